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

#ifndef EVTGD_PAIR_SELECTION_H_
#define EVTGD_PAIR_SELECTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtgd/cooccurrence.h"
#include "evtgd/core.h"
#include "evtgd/ingestion.h"

namespace evtgd {

enum class FilterMode {
  kAnd,  // count and PPMI thresholds must both hold
  kOr,   // either threshold suffices
};

struct PairFilter {
  std::uint64_t min_article_count = 3;
  double min_ppmi = 1.0;
  FilterMode mode = FilterMode::kAnd;
  double ppmi_smoothing = 1.0;

  // A pair that never occurs in the stats never passes, whatever the mode.
  bool Passes(const PairStats &stats, const EntityPair &pair) const;
};

enum class Provenance { kRandom, kDateWindow, kEvent };

const char *ProvenanceName(Provenance p);

struct SelectedPair {
  EntityPair pair;
  // Set for kDateWindow and kEvent provenance, empty for kRandom.
  std::optional<DateWindow> window;
  Provenance provenance = Provenance::kRandom;
  std::string event_id;
  // Count and PPMI in the stats the pair was selected from.
  std::uint64_t count = 0;
  double ppmi = 0.0;

  bool operator==(const SelectedPair &) const = default;
};

struct PairSelection {
  std::vector<SelectedPair> pairs;
  std::vector<std::string> warnings;
};

// Uniform sample without replacement of `budget` pairs among those passing
// the filter, returned sorted by pair key.
PairSelection SelectRandomPairs(const PairStats &stats,
                                const PairFilter &filter, std::size_t budget,
                                std::uint64_t seed);

// Windows of `length_days` sliding by one day. The first starts at `first`,
// the last at max(first, last - length_days).
std::vector<DateWindow> SlidingWindows(Date first, Date last, int length_days);

// Filters every window by its own stats and samples up to
// `budget_per_window` pairs from each. Sorted by (window start, pair).
PairSelection SelectDateWindowPairs(std::span<const PairStats> windowed,
                                    const PairFilter &filter,
                                    std::size_t budget_per_window,
                                    std::uint64_t seed, int workers = 1);

// Same, with the windows slid over the full range of `daily`.
PairSelection SelectDateWindowPairs(const DailyStats &daily, int length_days,
                                    const PairFilter &filter,
                                    std::size_t budget_per_window,
                                    std::uint64_t seed, int workers = 1);

struct EventWindowConfig {
  int noun_days = 4;
  int ne_days = 7;

  // Named-entity pairs get the longer window; any pair with a noun gets the
  // noun window.
  int DaysFor(const EventPair &pair) const {
    return pair.named_entities ? ne_days : noun_days;
  }
};

using StatsProvider = std::function<PairStats(DateWindow)>;

// Keeps the event-description pairs that pass the filter in the window
// [event date, event date + days] following their event. Sorted by
// (event date, pair, event id). `cap` bounds the output by uniform sampling;
// nullopt leaves it uncapped.
PairSelection SelectEventGuidedPairs(std::span<const EventRecord> events,
                                     const StatsProvider &stats_for_window,
                                     const PairFilter &filter,
                                     const EventWindowConfig &windows,
                                     std::optional<std::size_t> cap,
                                     std::uint64_t seed);

// Keeps the first selection of each entity pair.
std::vector<SelectedPair> DeduplicatePairs(std::span<const SelectedPair> pairs);

std::string SerializeSelectedPair(const SelectedPair &pair);
SelectedPair ParseSelectedPair(std::string_view line, std::size_t line_number);

void WriteSelectedPairs(std::ostream &out, std::span<const SelectedPair> pairs);
std::vector<SelectedPair> ReadSelectedPairs(const std::string &path);

}  // namespace evtgd

#endif  // EVTGD_PAIR_SELECTION_H_
