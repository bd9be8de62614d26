// Copyright 2026 The evtgd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evtgd/cooccurrence.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "evtgd/error.h"
#include "evtgd/parallel.h"

namespace evtgd {

namespace {

constexpr std::string_view kStatsHeader = "#pairstats v1";
constexpr std::string_view kDailyHeader = "#dailystats v1";

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    fields.push_back(line.substr(pos, tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return fields;
}

[[noreturn]] void BadStats(const std::string &what) {
  throw Error(ErrorCode::kParse, "stats checkpoint: " + what);
}

std::uint64_t ParseCount(std::string_view text) {
  std::uint64_t value = 0;
  if (text.empty()) BadStats("empty count");
  for (char c : text) {
    if (c < '0' || c > '9') BadStats("bad count '" + std::string(text) + "'");
    value = value * 10 + std::uint64_t(c - '0');
  }
  return value;
}

Date ParseCheckpointDate(std::string_view text) {
  auto date = Date::Parse(text);
  if (!date) BadStats("bad date '" + std::string(text) + "'");
  return *date;
}

}  // namespace

std::string DateWindow::ToString() const {
  return start.ToString() + "+" + std::to_string(length_days);
}

std::uint64_t PairStats::PairCount(const EntityPair &pair) const {
  auto it = pair_counts_.find(pair);
  return it == pair_counts_.end() ? 0 : it->second;
}

std::uint64_t PairStats::EntityCount(const std::string &key) const {
  auto it = entity_counts_.find(key);
  return it == entity_counts_.end() ? 0 : it->second;
}

bool PairStats::AddArticle(const Document &document) {
  if (!window_.Contains(document.date)) return false;
  ++n_articles_;
  std::unordered_set<std::string_view> entities;
  std::unordered_set<EntityPair, EntityPairHash> pairs;
  for (const Sentence &s : document.sentences) {
    for (const EntityMention &m : s.mentions) entities.insert(m.key);
    ForEachCandidatePair(s, [&](int i, int j) {
      pairs.insert(EntityPair::Canonical(s.mentions[i].key, s.mentions[j].key));
    });
  }
  for (std::string_view key : entities) ++entity_counts_[std::string(key)];
  for (const EntityPair &p : pairs) ++pair_counts_[p];
  return true;
}

void PairStats::AddCounts(const PairStats &other) {
  n_articles_ += other.n_articles_;
  for (const auto &[pair, count] : other.pair_counts_) {
    pair_counts_[pair] += count;
  }
  for (const auto &[key, count] : other.entity_counts_) {
    entity_counts_[key] += count;
  }
}

void PairStats::Merge(const PairStats &other) {
  if (!(other.window_ == window_)) {
    throw Error(ErrorCode::kWindowMismatch,
                "cannot merge stats for window " + other.window_.ToString() +
                    " into " + window_.ToString());
  }
  AddCounts(other);
}

void PairStats::SerializeTo(std::ostream &out) const {
  out << kStatsHeader << '\n';
  out << "window\t" << window_.start.ToString() << '\t' << window_.length_days
      << '\n';
  out << "articles\t" << n_articles_ << '\n';
  std::vector<const EntityCounts::value_type *> entities;
  entities.reserve(entity_counts_.size());
  for (const auto &e : entity_counts_) entities.push_back(&e);
  std::sort(entities.begin(), entities.end(),
            [](auto *a, auto *b) { return a->first < b->first; });
  for (const auto *e : entities) {
    out << "entity\t" << e->first << '\t' << e->second << '\n';
  }
  std::vector<const PairCounts::value_type *> pairs;
  pairs.reserve(pair_counts_.size());
  for (const auto &p : pair_counts_) pairs.push_back(&p);
  std::sort(pairs.begin(), pairs.end(),
            [](auto *a, auto *b) { return a->first < b->first; });
  for (const auto *p : pairs) {
    out << "pair\t" << p->first.first() << '\t' << p->first.second() << '\t'
        << p->second << '\n';
  }
  out << "end\n";
}

std::string PairStats::Serialize() const {
  std::ostringstream out;
  SerializeTo(out);
  return out.str();
}

PairStats PairStats::Deserialize(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kStatsHeader) {
    BadStats("missing pairstats header");
  }
  if (!std::getline(in, line)) BadStats("missing window line");
  auto fields = SplitTabs(line);
  if (fields.size() != 3 || fields[0] != "window") BadStats("bad window line");
  PairStats stats(DateWindow{ParseCheckpointDate(fields[1]),
                             int(ParseCount(fields[2]))});
  if (!std::getline(in, line)) BadStats("missing articles line");
  fields = SplitTabs(line);
  if (fields.size() != 2 || fields[0] != "articles") {
    BadStats("bad articles line");
  }
  stats.n_articles_ = ParseCount(fields[1]);
  while (std::getline(in, line)) {
    if (line == "end") return stats;
    fields = SplitTabs(line);
    if (fields[0] == "entity" && fields.size() == 3) {
      stats.entity_counts_[std::string(fields[1])] = ParseCount(fields[2]);
    } else if (fields[0] == "pair" && fields.size() == 4) {
      stats.pair_counts_[EntityPair::Canonical(fields[1], fields[2])] =
          ParseCount(fields[3]);
    } else {
      BadStats("unexpected line '" + line + "'");
    }
  }
  BadStats("truncated block");
}

PairStats AccumulateStats(std::span<const Document> documents,
                          DateWindow window) {
  PairStats stats(window);
  for (const Document &doc : documents) stats.AddArticle(doc);
  return stats;
}

PairStats AccumulateStatsParallel(std::span<const Document> documents,
                                  DateWindow window, int workers) {
  const int shards = std::max(1, workers);
  std::vector<PairStats> partial(shards, PairStats(window));
  ForEachShard(documents.size(), shards,
               [&](std::size_t s, std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   partial[s].AddArticle(documents[i]);
                 }
               });
  PairStats merged(window);
  for (const PairStats &p : partial) merged.Merge(p);
  return merged;
}

PairStats MergeStats(const PairStats &a, const PairStats &b) {
  PairStats out = a;
  out.Merge(b);
  return out;
}

double Ppmi(const PairStats &stats, const EntityPair &pair, double smoothing) {
  const std::uint64_t joint = stats.PairCount(pair);
  if (joint == 0) {
    throw Error(ErrorCode::kUndefinedScore,
                "PPMI undefined for unseen pair (" + pair.first() + ", " +
                    pair.second() + ")");
  }
  const double n = double(stats.n_articles());
  const double ca = double(stats.EntityCount(pair.first()));
  const double cb = double(stats.EntityCount(pair.second()));
  double pmi;
  if (smoothing == 1.0) {
    pmi = std::log2(double(joint) * n / (ca * cb));
  } else {
    pmi = std::log2(double(joint) / n) -
          smoothing * (std::log2(ca / n) + std::log2(cb / n));
  }
  return std::max(0.0, pmi);
}

void DailyStats::AddArticle(const Document &document) {
  auto it = days_.find(document.date);
  if (it == days_.end()) {
    it = days_.emplace(document.date, PairStats(DateWindow{document.date, 0}))
             .first;
  }
  it->second.AddArticle(document);
}

void DailyStats::Merge(const DailyStats &other) {
  for (const auto &[date, stats] : other.days_) {
    auto it = days_.find(date);
    if (it == days_.end()) {
      days_.emplace(date, stats);
    } else {
      it->second.Merge(stats);
    }
  }
}

PairStats DailyStats::Window(DateWindow window) const {
  PairStats out(window);
  for (auto it = days_.lower_bound(window.start);
       it != days_.end() && it->first <= window.end(); ++it) {
    out.AddCounts(it->second);
  }
  return out;
}

std::optional<Date> DailyStats::first_date() const {
  if (days_.empty()) return std::nullopt;
  return days_.begin()->first;
}

std::optional<Date> DailyStats::last_date() const {
  if (days_.empty()) return std::nullopt;
  return days_.rbegin()->first;
}

std::uint64_t DailyStats::n_articles() const {
  std::uint64_t n = 0;
  for (const auto &[date, stats] : days_) n += stats.n_articles();
  return n;
}

std::optional<DateWindow> DailyStats::FullRange() const {
  if (days_.empty()) return std::nullopt;
  return DateWindow{*first_date(), *last_date() - *first_date()};
}

void DailyStats::SerializeTo(std::ostream &out) const {
  out << kDailyHeader << '\n' << "days\t" << days_.size() << '\n';
  for (const auto &[date, stats] : days_) stats.SerializeTo(out);
}

std::string DailyStats::Serialize() const {
  std::ostringstream out;
  SerializeTo(out);
  return out.str();
}

DailyStats DailyStats::Deserialize(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != kDailyHeader) {
    BadStats("missing dailystats header");
  }
  if (!std::getline(in, line)) BadStats("missing days line");
  auto fields = SplitTabs(line);
  if (fields.size() != 2 || fields[0] != "days") BadStats("bad days line");
  const std::uint64_t n = ParseCount(fields[1]);
  DailyStats daily;
  for (std::uint64_t i = 0; i < n; ++i) {
    PairStats day = PairStats::Deserialize(in);
    if (day.window().length_days != 0) BadStats("day block with length > 0");
    Date date = day.window().start;
    if (!daily.days_.emplace(date, std::move(day)).second) {
      BadStats("duplicate day " + date.ToString());
    }
  }
  return daily;
}

DailyStats AccumulateDailyStats(std::span<const Document> documents,
                                int workers) {
  const int shards = std::max(1, workers);
  std::vector<DailyStats> partial(shards);
  ForEachShard(documents.size(), shards,
               [&](std::size_t s, std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   partial[s].AddArticle(documents[i]);
                 }
               });
  DailyStats merged;
  for (const DailyStats &p : partial) merged.Merge(p);
  return merged;
}

}  // namespace evtgd
