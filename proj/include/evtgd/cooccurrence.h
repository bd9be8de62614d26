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

#ifndef EVTGD_COOCCURRENCE_H_
#define EVTGD_COOCCURRENCE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evtgd/core.h"
#include "evtgd/date.h"

namespace evtgd {

// Inclusive calendar range [start, start + length_days].
struct DateWindow {
  Date start;
  int length_days = 0;

  Date end() const { return start + length_days; }
  bool Contains(Date d) const { return start <= d && d <= end(); }
  std::string ToString() const;

  auto operator<=>(const DateWindow &) const = default;
  bool operator==(const DateWindow &) const = default;
};

// Article-level occurrence counts inside one date window. An entity counts
// once per article that mentions it; a pair counts once per article in which
// some sentence yields it as a candidate statement.
class PairStats {
 public:
  using PairCounts = std::unordered_map<EntityPair, std::uint64_t, EntityPairHash>;
  using EntityCounts = std::unordered_map<std::string, std::uint64_t>;

  explicit PairStats(DateWindow window) : window_(window) {}

  const DateWindow &window() const { return window_; }
  std::uint64_t n_articles() const { return n_articles_; }
  const PairCounts &pair_counts() const { return pair_counts_; }
  const EntityCounts &entity_counts() const { return entity_counts_; }

  std::uint64_t PairCount(const EntityPair &pair) const;
  std::uint64_t EntityCount(const std::string &key) const;

  // Counts the article if its date lies in the window; returns whether it did.
  bool AddArticle(const Document &document);

  // Adds another shard's counts. Throws Error(kWindowMismatch) unless the
  // windows are equal.
  void Merge(const PairStats &other);

  // Deterministic text dump: entities and pairs sorted by key.
  std::string Serialize() const;
  void SerializeTo(std::ostream &out) const;
  // Reads one block written by SerializeTo. Throws Error(kParse).
  static PairStats Deserialize(std::istream &in);

  bool operator==(const PairStats &other) const = default;

 private:
  friend class DailyStats;
  void AddCounts(const PairStats &other);

  DateWindow window_;
  std::uint64_t n_articles_ = 0;
  PairCounts pair_counts_;
  EntityCounts entity_counts_;
};

PairStats AccumulateStats(std::span<const Document> documents,
                          DateWindow window);

// Shards the documents into `workers` contiguous partitions, counts each on
// its own thread and merges the results.
PairStats AccumulateStatsParallel(std::span<const Document> documents,
                                  DateWindow window, int workers);

PairStats MergeStats(const PairStats &a, const PairStats &b);

// In-article PPMI: max(0, log2(c(a,b) N / (c(a) c(b)))). With a smoothing
// exponent s != 1 each marginal probability c(x)/N is raised to s before the
// ratio is taken. Throws Error(kUndefinedScore) when the pair never occurs.
double Ppmi(const PairStats &stats, const EntityPair &pair,
            double smoothing = 1.0);

// Per-day statistics for a corpus. Any window is the merge of its days, which
// is exact because every article carries a single date.
class DailyStats {
 public:
  void AddArticle(const Document &document);
  void Merge(const DailyStats &other);

  PairStats Window(DateWindow window) const;

  std::optional<Date> first_date() const;
  std::optional<Date> last_date() const;
  std::uint64_t n_articles() const;
  const std::map<Date, PairStats> &days() const { return days_; }

  // Window spanning every day that has articles.
  std::optional<DateWindow> FullRange() const;

  std::string Serialize() const;
  void SerializeTo(std::ostream &out) const;
  static DailyStats Deserialize(std::istream &in);

  bool operator==(const DailyStats &) const = default;

 private:
  std::map<Date, PairStats> days_;
};

DailyStats AccumulateDailyStats(std::span<const Document> documents,
                                int workers = 1);

}  // namespace evtgd

#endif  // EVTGD_COOCCURRENCE_H_
