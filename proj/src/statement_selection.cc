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

#include "evtgd/statement_selection.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "evtgd/error.h"
#include "evtgd/parallel.h"
#include "evtgd/rng.h"
#include "json.hpp"

namespace evtgd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Rejection draws per requested statement before falling back to a scan.
constexpr std::size_t kRejectionAttempts = 32;

struct RefHash {
  std::size_t operator()(const StatementRef &r) const {
    return std::size_t(MixSeed((std::uint64_t(r.doc) << 32) | r.sentence,
                               (std::uint64_t(r.mention1) << 16) | r.mention2));
  }
};
using RefSet = std::unordered_set<StatementRef, RefHash>;

// Appends up to `count` refs from `pool` that satisfy `eligible` and are not
// in `taken`, uniformly at random. Rejection-samples first, which is cheap
// when most of the pool qualifies, then scans what is left.
template <typename Pred>
void DrawInto(std::span<const StatementRef> pool, std::size_t count,
              Pred eligible, RefSet &taken, std::vector<StatementRef> &out,
              Rng &rng) {
  if (count == 0 || pool.empty()) return;
  std::size_t wanted = count;
  for (std::size_t attempt = 0;
       wanted > 0 && attempt < kRejectionAttempts * count; ++attempt) {
    const StatementRef &r = pool[rng.Uniform(pool.size())];
    if (!eligible(r) || taken.count(r)) continue;
    taken.insert(r);
    out.push_back(r);
    --wanted;
  }
  if (wanted == 0) return;
  std::vector<StatementRef> rest;
  for (const StatementRef &r : pool) {
    if (eligible(r) && !taken.count(r)) rest.push_back(r);
  }
  for (std::size_t i : SampleWithoutReplacement(rest.size(), wanted, rng)) {
    taken.insert(rest[i]);
    out.push_back(rest[i]);
  }
}

std::vector<RelationStatement> Materialize(const StatementIndex &index,
                                           std::vector<StatementRef> refs) {
  std::sort(refs.begin(), refs.end());
  std::vector<RelationStatement> out;
  out.reserve(refs.size());
  for (const StatementRef &r : refs) out.push_back(index.Materialize(r));
  return out;
}

const char *KindName(MentionKind kind) {
  return kind == MentionKind::kNamedEntity ? "NE" : "NOUN";
}

ordered_json StatementToJson(const RelationStatement &s) {
  ordered_json j;
  j["id"] = s.statement_id;
  j["doc_id"] = s.doc_id;
  j["date"] = s.date.ToString();
  j["sentence"] = s.sentence_index;
  j["tokens"] = s.tokens;
  j["span1"] = {s.span1.start, s.span1.end};
  j["span2"] = {s.span2.start, s.span2.end};
  j["keys"] = {s.key1, s.key2};
  j["kinds"] = {KindName(s.kind1), KindName(s.kind2)};
  return j;
}

MentionKind KindFromName(const std::string &name) {
  if (name == "NE") return MentionKind::kNamedEntity;
  if (name == "NOUN") return MentionKind::kNoun;
  throw Error(ErrorCode::kParse, "unknown mention kind '" + name + "'");
}

RelationStatement StatementFromJson(const json &j) {
  RelationStatement s;
  s.statement_id = j.at("id").get<std::string>();
  s.doc_id = j.at("doc_id").get<std::string>();
  auto date = Date::Parse(j.at("date").get<std::string>());
  if (!date) throw Error(ErrorCode::kParse, "bad statement date");
  s.date = *date;
  s.sentence_index = j.at("sentence").get<int>();
  s.tokens = j.at("tokens").get<std::vector<std::string>>();
  s.span1 = {j.at("span1").at(0).get<int>(), j.at("span1").at(1).get<int>()};
  s.span2 = {j.at("span2").at(0).get<int>(), j.at("span2").at(1).get<int>()};
  s.key1 = j.at("keys").at(0).get<std::string>();
  s.key2 = j.at("keys").at(1).get<std::string>();
  s.kind1 = KindFromName(j.at("kinds").at(0).get<std::string>());
  s.kind2 = KindFromName(j.at("kinds").at(1).get<std::string>());
  return s;
}

std::string GroupId(std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "grp-%06zu", ordinal);
  return buf;
}

}  // namespace

StatementIndex::StatementIndex(std::vector<Document> documents)
    : documents_(std::move(documents)) {
  for (std::uint32_t d = 0; d < documents_.size(); ++d) {
    const Document &doc = documents_[d];
    for (std::uint32_t s = 0; s < doc.sentences.size(); ++s) {
      const Sentence &sentence = doc.sentences[s];
      ForEachCandidatePair(sentence, [&](int i, int j) {
        const StatementRef ref{d, s, std::uint16_t(i), std::uint16_t(j)};
        by_date_.push_back(ref);
        const std::string &a = sentence.mentions[i].key;
        const std::string &b = sentence.mentions[j].key;
        by_pair_[EntityPair::Canonical(a, b)].push_back(ref);
        by_entity_[a].push_back(ref);
        by_entity_[b].push_back(ref);
      });
    }
  }
  std::stable_sort(by_date_.begin(), by_date_.end(),
                   [this](const StatementRef &x, const StatementRef &y) {
                     return DateOf(x) < DateOf(y);
                   });
}

std::span<const StatementRef> StatementIndex::ForPair(
    const EntityPair &pair) const {
  auto it = by_pair_.find(pair);
  if (it == by_pair_.end()) return {};
  return it->second;
}

std::span<const StatementRef> StatementIndex::ForEntity(
    const std::string &key) const {
  auto it = by_entity_.find(key);
  if (it == by_entity_.end()) return {};
  return it->second;
}

std::span<const StatementRef> StatementIndex::InWindow(
    const DateWindow &window) const {
  auto lo = std::partition_point(
      by_date_.begin(), by_date_.end(),
      [&](const StatementRef &r) { return DateOf(r) < window.start; });
  auto hi = std::partition_point(
      lo, by_date_.end(),
      [&](const StatementRef &r) { return DateOf(r) <= window.end(); });
  return std::span<const StatementRef>(by_date_).subspan(
      std::size_t(lo - by_date_.begin()), std::size_t(hi - lo));
}

const std::string &StatementIndex::Key1(StatementRef ref) const {
  return documents_[ref.doc].sentences[ref.sentence].mentions[ref.mention1].key;
}

const std::string &StatementIndex::Key2(StatementRef ref) const {
  return documents_[ref.doc].sentences[ref.sentence].mentions[ref.mention2].key;
}

RelationStatement StatementIndex::Materialize(StatementRef ref) const {
  const Document &doc = documents_[ref.doc];
  return MakeStatement(doc.sentences[ref.sentence], doc.doc_id, doc.date,
                       int(ref.sentence), ref.mention1, ref.mention2);
}

PositiveSample SelectPositiveStatements(const SelectedPair &pair,
                                        const StatementIndex &index,
                                        SentenceMode mode, std::size_t n_pos,
                                        std::uint64_t seed) {
  std::vector<StatementRef> pool;
  for (const StatementRef &r : index.ForPair(pair.pair)) {
    if (mode == SentenceMode::kDateWindow && pair.window &&
        !pair.window->Contains(index.DateOf(r))) {
      continue;
    }
    pool.push_back(r);
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "no statements for pair (" +
                                            pair.pair.first() + ", " +
                                            pair.pair.second() + ")");
  }
  PositiveSample out;
  out.short_of_target = pool.size() < n_pos;
  Rng rng(seed);
  for (std::size_t i : SampleWithoutReplacement(pool.size(), n_pos, rng)) {
    out.statements.push_back(pool[i]);
  }
  std::sort(out.statements.begin(), out.statements.end());
  return out;
}

NegativeSample SampleNegatives(const EntityPair &pair,
                               const StatementIndex &index, std::size_t n_easy,
                               std::size_t n_hard,
                               const std::optional<DateWindow> &window,
                               std::uint64_t seed) {
  NegativeSample out;
  Rng rng(seed);
  RefSet taken;

  // Hard pool: statements mentioning exactly one key, in corpus order.
  if (n_hard > 0) {
    std::vector<StatementRef> hard_pool;
    for (const std::string *key : {&pair.first(), &pair.second()}) {
      for (const StatementRef &r : index.ForEntity(*key)) {
        if (index.KeysPresent(r, pair) == 1) hard_pool.push_back(r);
      }
    }
    std::sort(hard_pool.begin(), hard_pool.end());
    auto in_window = [&](const StatementRef &r) {
      return window && window->Contains(index.DateOf(r));
    };
    if (window) {
      DrawInto(hard_pool, n_hard, in_window, taken, out.hard, rng);
    }
    DrawInto(hard_pool, n_hard - out.hard.size(),
             [](const StatementRef &) { return true; }, taken, out.hard, rng);
    out.hard_short = out.hard.size() < n_hard;
  }

  if (n_easy > 0) {
    auto easy = [&](const StatementRef &r) {
      return index.KeysPresent(r, pair) == 0;
    };
    if (window) {
      DrawInto(index.InWindow(*window), n_easy, easy, taken, out.easy, rng);
    }
    DrawInto(index.All(), n_easy - out.easy.size(), easy, taken, out.easy, rng);
    if (out.easy.empty()) {
      throw Error(ErrorCode::kDegenerateCorpus,
                  "corpus has no statement free of both (" + pair.first() +
                      ", " + pair.second() + ")");
    }
    out.easy_short = out.easy.size() < n_easy;
  }
  std::sort(out.easy.begin(), out.easy.end());
  std::sort(out.hard.begin(), out.hard.end());
  return out;
}

GroupAssembly AssembleGroups(std::span<const SelectedPair> selected,
                             const StatementIndex &index,
                             const GroupConfig &config, std::uint64_t seed,
                             int workers) {
  struct Slot {
    std::optional<TrainingGroup> group;
    bool short_positives = false;
    bool short_negatives = false;
  };
  std::vector<Slot> slots(selected.size());
  ParallelFor(selected.size(), workers, [&](std::size_t i) {
    const SelectedPair &source = selected[i];
    const std::uint64_t pair_seed = MixSeed(seed, i);
    PositiveSample positives;
    try {
      positives = SelectPositiveStatements(source, index, config.mode,
                                           config.n_pos, MixSeed(pair_seed, 0));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kEmptyGroup) throw;
      return;
    }
    if (positives.statements.size() < config.min_positives) return;
    NegativeSample negatives =
        SampleNegatives(source.pair, index, config.n_easy, config.n_hard,
                        source.window, MixSeed(pair_seed, 1));
    TrainingGroup group{GroupId(i), source,
                        Materialize(index, positives.statements),
                        Materialize(index, negatives.easy),
                        Materialize(index, negatives.hard)};
    slots[i].group = std::move(group);
    slots[i].short_positives = positives.short_of_target;
    slots[i].short_negatives = negatives.easy_short || negatives.hard_short;
  });

  GroupAssembly out;
  out.summary.pairs_in = selected.size();
  for (Slot &slot : slots) {
    if (!slot.group) {
      ++out.summary.dropped_few_positives;
      continue;
    }
    out.summary.statements_out += slot.group->size();
    out.summary.short_positives += slot.short_positives;
    out.summary.short_negatives += slot.short_negatives;
    out.groups.push_back(std::move(*slot.group));
  }
  out.summary.groups_out = out.groups.size();
  return out;
}

std::string SerializeGroup(const TrainingGroup &group) {
  ordered_json j;
  j["group_id"] = group.group_id;
  j["pair"] = {group.pair().first(), group.pair().second()};
  j["source"] = ordered_json::parse(SerializeSelectedPair(group.source));
  auto statements = [](const std::vector<RelationStatement> &list) {
    ordered_json arr = ordered_json::array();
    for (const RelationStatement &s : list) arr.push_back(StatementToJson(s));
    return arr;
  };
  j["positives"] = statements(group.positives);
  j["easy_negatives"] = statements(group.easy_negatives);
  j["hard_negatives"] = statements(group.hard_negatives);
  return j.dump();
}

TrainingGroup ParseGroup(std::string_view line, std::size_t line_number) {
  const std::string where = "groups line " + std::to_string(line_number);
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParse, where + ": not a JSON object");
  }
  try {
    TrainingGroup group{j.at("group_id").get<std::string>(),
                        ParseSelectedPair(j.at("source").dump(), line_number),
                        {}, {}, {}};
    auto statements = [](const json &arr) {
      std::vector<RelationStatement> out;
      for (const json &s : arr) out.push_back(StatementFromJson(s));
      return out;
    };
    group.positives = statements(j.at("positives"));
    group.easy_negatives = statements(j.at("easy_negatives"));
    group.hard_negatives = statements(j.at("hard_negatives"));
    return group;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, where + ": " + e.what());
  }
}

std::vector<TrainingGroup> ReadGroups(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<TrainingGroup> groups;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    groups.push_back(ParseGroup(line, line_number));
  }
  return groups;
}

}  // namespace evtgd
