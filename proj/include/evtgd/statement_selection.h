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

#ifndef EVTGD_STATEMENT_SELECTION_H_
#define EVTGD_STATEMENT_SELECTION_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evtgd/cooccurrence.h"
#include "evtgd/core.h"
#include "evtgd/pair_selection.h"

namespace evtgd {

// Compact handle to one candidate statement of an indexed corpus.
struct StatementRef {
  std::uint32_t doc = 0;
  std::uint32_t sentence = 0;
  std::uint16_t mention1 = 0;
  std::uint16_t mention2 = 0;

  auto operator<=>(const StatementRef &) const = default;
  bool operator==(const StatementRef &) const = default;
};

// Owns a corpus and indexes its candidate statements by entity pair, by
// single entity and by date. Immutable after construction, so concurrent
// readers need no locking.
class StatementIndex {
 public:
  explicit StatementIndex(std::vector<Document> documents);

  const std::vector<Document> &documents() const { return documents_; }
  std::size_t size() const { return by_date_.size(); }

  // Statements of the pair, in corpus order.
  std::span<const StatementRef> ForPair(const EntityPair &pair) const;
  // Statements with a mention of `key`, in corpus order.
  std::span<const StatementRef> ForEntity(const std::string &key) const;
  // Every statement, ordered by (date, corpus order).
  std::span<const StatementRef> All() const { return by_date_; }
  // The contiguous slice of All() dated inside the window.
  std::span<const StatementRef> InWindow(const DateWindow &window) const;

  Date DateOf(StatementRef ref) const { return documents_[ref.doc].date; }
  const std::string &Key1(StatementRef ref) const;
  const std::string &Key2(StatementRef ref) const;
  int KeysPresent(StatementRef ref, const EntityPair &pair) const {
    return int(pair.Contains(Key1(ref))) + int(pair.Contains(Key2(ref)));
  }

  RelationStatement Materialize(StatementRef ref) const;

 private:
  std::vector<Document> documents_;
  std::vector<StatementRef> by_date_;
  std::unordered_map<EntityPair, std::vector<StatementRef>, EntityPairHash>
      by_pair_;
  std::unordered_map<std::string, std::vector<StatementRef>> by_entity_;
};

enum class SentenceMode {
  kRandom,      // any statement of the pair
  kDateWindow,  // only statements dated inside the pair's window
};

struct PositiveSample {
  std::vector<StatementRef> statements;
  // Fewer than n_pos statements were available.
  bool short_of_target = false;
};

// Throws Error(kEmptyGroup) when no statement qualifies. A pair without a
// window is sampled corpus-wide in either mode.
PositiveSample SelectPositiveStatements(const SelectedPair &pair,
                                        const StatementIndex &index,
                                        SentenceMode mode, std::size_t n_pos,
                                        std::uint64_t seed);

struct NegativeSample {
  std::vector<StatementRef> easy;  // neither pair key
  std::vector<StatementRef> hard;  // exactly one pair key
  bool easy_short = false;
  bool hard_short = false;
};

// Samples from the window first and tops up corpus-wide when the window is
// short. Throws Error(kDegenerateCorpus) when easy negatives are requested
// and the corpus has none.
NegativeSample SampleNegatives(const EntityPair &pair,
                               const StatementIndex &index, std::size_t n_easy,
                               std::size_t n_hard,
                               const std::optional<DateWindow> &window,
                               std::uint64_t seed);

struct TrainingGroup {
  std::string group_id;
  SelectedPair source;
  std::vector<RelationStatement> positives;
  std::vector<RelationStatement> easy_negatives;
  std::vector<RelationStatement> hard_negatives;

  const EntityPair &pair() const { return source.pair; }
  std::size_t size() const {
    return positives.size() + easy_negatives.size() + hard_negatives.size();
  }
  bool operator==(const TrainingGroup &) const = default;
};

struct GroupConfig {
  std::size_t n_pos = 6;
  std::size_t n_easy = 3;
  std::size_t n_hard = 3;
  std::size_t min_positives = 2;
  SentenceMode mode = SentenceMode::kDateWindow;
};

// Corpus accounting for the denoising stage.
struct GroupSummary {
  std::size_t pairs_in = 0;
  std::size_t groups_out = 0;
  std::size_t statements_out = 0;
  std::size_t dropped_few_positives = 0;
  std::size_t short_positives = 0;
  std::size_t short_negatives = 0;
};

struct GroupAssembly {
  std::vector<TrainingGroup> groups;
  GroupSummary summary;
};

// One group per selected pair with at least min_positives positives. Group
// ids and contents depend only on (inputs, seed), not on `workers`.
GroupAssembly AssembleGroups(std::span<const SelectedPair> selected,
                             const StatementIndex &index,
                             const GroupConfig &config, std::uint64_t seed,
                             int workers = 1);

std::string SerializeGroup(const TrainingGroup &group);
TrainingGroup ParseGroup(std::string_view line, std::size_t line_number);
std::vector<TrainingGroup> ReadGroups(const std::string &path);

}  // namespace evtgd

#endif  // EVTGD_STATEMENT_SELECTION_H_
