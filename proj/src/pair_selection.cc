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

#include "evtgd/pair_selection.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "evtgd/error.h"
#include "evtgd/parallel.h"
#include "evtgd/rng.h"
#include "json.hpp"

namespace evtgd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<EntityPair> EligiblePairs(const PairStats &stats,
                                      const PairFilter &filter) {
  std::vector<EntityPair> eligible;
  for (const auto &[pair, count] : stats.pair_counts()) {
    if (filter.Passes(stats, pair)) eligible.push_back(pair);
  }
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

// Indices of a uniform sample of min(budget, n) items, in ascending order.
std::vector<std::size_t> SortedSample(std::size_t n, std::size_t budget,
                                      Rng &rng) {
  std::vector<std::size_t> picked;
  if (budget >= n) {
    picked.resize(n);
    for (std::size_t i = 0; i < n; ++i) picked[i] = i;
    return picked;
  }
  picked = SampleWithoutReplacement(n, budget, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

SelectedPair MakeSelected(const PairStats &stats, const PairFilter &filter,
                          const EntityPair &pair, Provenance provenance) {
  SelectedPair s{pair, std::nullopt, provenance, "", stats.PairCount(pair),
                 Ppmi(stats, pair, filter.ppmi_smoothing)};
  if (provenance != Provenance::kRandom) s.window = stats.window();
  return s;
}

[[noreturn]] void BadRecord(std::size_t line_number, const std::string &what) {
  throw Error(ErrorCode::kParse, "selected pairs line " +
                                     std::to_string(line_number) + ": " + what);
}

}  // namespace

bool PairFilter::Passes(const PairStats &stats, const EntityPair &pair) const {
  const std::uint64_t count = stats.PairCount(pair);
  if (count == 0) return false;
  const bool count_ok = count >= min_article_count;
  if (mode == FilterMode::kAnd && !count_ok) return false;
  if (mode == FilterMode::kOr && count_ok) return true;
  return Ppmi(stats, pair, ppmi_smoothing) >= min_ppmi;
}

const char *ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kRandom: return "random";
    case Provenance::kDateWindow: return "date_window";
    case Provenance::kEvent: return "event";
  }
  return "unknown";
}

PairSelection SelectRandomPairs(const PairStats &stats,
                                const PairFilter &filter, std::size_t budget,
                                std::uint64_t seed) {
  PairSelection out;
  std::vector<EntityPair> eligible = EligiblePairs(stats, filter);
  if (budget > eligible.size()) {
    out.warnings.push_back("random pairing: budget " + std::to_string(budget) +
                           " exceeds the " + std::to_string(eligible.size()) +
                           " eligible pairs; returning all of them");
  }
  Rng rng(seed);
  for (std::size_t i : SortedSample(eligible.size(), budget, rng)) {
    out.pairs.push_back(
        MakeSelected(stats, filter, eligible[i], Provenance::kRandom));
  }
  return out;
}

std::vector<DateWindow> SlidingWindows(Date first, Date last,
                                       int length_days) {
  if (length_days < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative window length");
  }
  std::vector<DateWindow> windows;
  const Date final_start = std::max(first, last - length_days);
  for (Date d = first; d <= final_start; d = d + 1) {
    windows.push_back({d, length_days});
  }
  return windows;
}

PairSelection SelectDateWindowPairs(std::span<const PairStats> windowed,
                                    const PairFilter &filter,
                                    std::size_t budget_per_window,
                                    std::uint64_t seed, int workers) {
  std::vector<std::vector<SelectedPair>> per_window(windowed.size());
  std::vector<char> short_window(windowed.size(), 0);
  ParallelFor(windowed.size(), workers, [&](std::size_t w) {
    const PairStats &stats = windowed[w];
    std::vector<EntityPair> eligible = EligiblePairs(stats, filter);
    short_window[w] = budget_per_window > eligible.size();
    Rng rng(MixSeed(seed, std::uint64_t(std::int64_t(stats.window().start.days()))));
    for (std::size_t i : SortedSample(eligible.size(), budget_per_window, rng)) {
      per_window[w].push_back(
          MakeSelected(stats, filter, eligible[i], Provenance::kDateWindow));
    }
  });
  PairSelection out;
  for (auto &pairs : per_window) {
    for (auto &p : pairs) out.pairs.push_back(std::move(p));
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const SelectedPair &a, const SelectedPair &b) {
                     if (a.window->start != b.window->start) {
                       return a.window->start < b.window->start;
                     }
                     return a.pair < b.pair;
                   });
  const auto shortfalls =
      std::count(short_window.begin(), short_window.end(), char(1));
  if (shortfalls > 0) {
    out.warnings.push_back(
        "date-window pairing: " + std::to_string(shortfalls) + " of " +
        std::to_string(windowed.size()) +
        " windows had fewer eligible pairs than the per-window budget");
  }
  return out;
}

PairSelection SelectDateWindowPairs(const DailyStats &daily, int length_days,
                                    const PairFilter &filter,
                                    std::size_t budget_per_window,
                                    std::uint64_t seed, int workers) {
  if (!daily.first_date()) return {};
  std::vector<DateWindow> windows =
      SlidingWindows(*daily.first_date(), *daily.last_date(), length_days);
  std::vector<PairStats> windowed;
  windowed.reserve(windows.size());
  for (const DateWindow &w : windows) windowed.push_back(daily.Window(w));
  return SelectDateWindowPairs(windowed, filter, budget_per_window, seed,
                               workers);
}

PairSelection SelectEventGuidedPairs(std::span<const EventRecord> events,
                                     const StatsProvider &stats_for_window,
                                     const PairFilter &filter,
                                     const EventWindowConfig &windows,
                                     std::optional<std::size_t> cap,
                                     std::uint64_t seed) {
  PairSelection out;
  std::size_t skipped = 0;
  // Windows are built lazily and dropped once the events move past their
  // start date, so at most a couple of windows are alive at a time.
  std::map<DateWindow, PairStats> cache;
  for (const EventRecord &event : events) {
    if (!event.has_pairs()) {
      ++skipped;
      continue;
    }
    for (auto it = cache.begin(); it != cache.end();) {
      it = it->first.start < event.date ? cache.erase(it) : std::next(it);
    }
    for (const EventPair &ep : event.pairs) {
      const DateWindow window{event.date, windows.DaysFor(ep)};
      auto it = cache.find(window);
      if (it == cache.end()) {
        it = cache.emplace(window, stats_for_window(window)).first;
      }
      const PairStats &stats = it->second;
      if (!filter.Passes(stats, ep.pair)) continue;
      SelectedPair s = MakeSelected(stats, filter, ep.pair, Provenance::kEvent);
      s.event_id = event.event_id;
      out.pairs.push_back(std::move(s));
    }
  }
  if (skipped > 0) {
    out.warnings.push_back("event-guided pairing: skipped " +
                           std::to_string(skipped) +
                           " events without entity pairs");
  }
  if (cap && *cap < out.pairs.size()) {
    Rng rng(seed);
    std::vector<SelectedPair> kept;
    for (std::size_t i : SortedSample(out.pairs.size(), *cap, rng)) {
      kept.push_back(std::move(out.pairs[i]));
    }
    out.pairs = std::move(kept);
  }
  std::stable_sort(out.pairs.begin(), out.pairs.end(),
                   [](const SelectedPair &a, const SelectedPair &b) {
                     if (a.window->start != b.window->start) {
                       return a.window->start < b.window->start;
                     }
                     if (a.pair != b.pair) return a.pair < b.pair;
                     return a.event_id < b.event_id;
                   });
  return out;
}

std::vector<SelectedPair> DeduplicatePairs(
    std::span<const SelectedPair> pairs) {
  std::set<EntityPair> seen;
  std::vector<SelectedPair> out;
  for (const SelectedPair &p : pairs) {
    if (seen.insert(p.pair).second) out.push_back(p);
  }
  return out;
}

std::string SerializeSelectedPair(const SelectedPair &pair) {
  ordered_json j;
  j["pair"] = {pair.pair.first(), pair.pair.second()};
  if (pair.window) {
    j["window"] = {{"start", pair.window->start.ToString()},
                   {"length_days", pair.window->length_days}};
  } else {
    j["window"] = nullptr;
  }
  ordered_json provenance;
  provenance["type"] = ProvenanceName(pair.provenance);
  if (pair.provenance == Provenance::kEvent) {
    provenance["event_id"] = pair.event_id;
  }
  j["provenance"] = std::move(provenance);
  j["count"] = pair.count;
  j["ppmi"] = pair.ppmi;
  return j.dump();
}

SelectedPair ParseSelectedPair(std::string_view line,
                               std::size_t line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) BadRecord(line_number, "not a JSON object");
  try {
    const json &pair = j.at("pair");
    if (!pair.is_array() || pair.size() != 2) BadRecord(line_number, "bad pair");
    SelectedPair s{EntityPair::Canonical(pair[0].get<std::string>(),
                                         pair[1].get<std::string>()),
                   std::nullopt, Provenance::kRandom, "", 0, 0.0};
    const json &window = j.at("window");
    if (!window.is_null()) {
      auto start = Date::Parse(window.at("start").get<std::string>());
      if (!start) BadRecord(line_number, "bad window start");
      s.window = DateWindow{*start, window.at("length_days").get<int>()};
    }
    const json &provenance = j.at("provenance");
    const std::string type = provenance.at("type").get<std::string>();
    if (type == "random") {
      s.provenance = Provenance::kRandom;
    } else if (type == "date_window") {
      s.provenance = Provenance::kDateWindow;
    } else if (type == "event") {
      s.provenance = Provenance::kEvent;
      s.event_id = provenance.at("event_id").get<std::string>();
    } else {
      BadRecord(line_number, "unknown provenance '" + type + "'");
    }
    if (s.provenance != Provenance::kRandom && !s.window) {
      BadRecord(line_number, "provenance requires a window");
    }
    s.count = j.at("count").get<std::uint64_t>();
    s.ppmi = j.at("ppmi").get<double>();
    return s;
  } catch (const json::exception &e) {
    BadRecord(line_number, e.what());
  }
}

void WriteSelectedPairs(std::ostream &out,
                        std::span<const SelectedPair> pairs) {
  for (const SelectedPair &p : pairs) out << SerializeSelectedPair(p) << '\n';
}

std::vector<SelectedPair> ReadSelectedPairs(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<SelectedPair> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    pairs.push_back(ParseSelectedPair(line, line_number));
  }
  return pairs;
}

}  // namespace evtgd
