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

#ifndef EVTGD_CORE_H_
#define EVTGD_CORE_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evtgd/date.h"

namespace evtgd {

enum class MentionKind { kNamedEntity, kNoun };

// Half-open token range [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool Overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  bool operator==(const Span &) const = default;
};

struct EntityMention {
  int start = 0;
  int end = 0;
  MentionKind kind = MentionKind::kNamedEntity;
  std::string key;

  Span span() const { return {start, end}; }
  bool operator==(const EntityMention &) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  // Non-overlapping, sorted by start.
  std::vector<EntityMention> mentions;

  bool operator==(const Sentence &) const = default;
};

struct Document {
  std::string doc_id;
  Date date;
  std::string lang;
  std::vector<Sentence> sentences;

  bool operator==(const Document &) const = default;
};

// Returns a description of the first violated sentence invariant, or nullopt
// when the sentence is well formed.
std::optional<std::string> ValidateSentence(const Sentence &sentence);

// Entity identity: lowercased surface with whitespace runs collapsed to one
// space and trimmed. ASCII case folding only; other bytes pass through.
std::string NormalizeEntityKey(std::string_view surface);

// Order-invariant key for two distinct entities; first() <= second().
class EntityPair {
 public:
  // Throws Error(kDegeneratePair) for equal or empty keys.
  static EntityPair Canonical(std::string_view a, std::string_view b);

  const std::string &first() const { return first_; }
  const std::string &second() const { return second_; }

  bool Contains(std::string_view key) const {
    return key == first_ || key == second_;
  }

  std::string ToString() const { return first_ + "\t" + second_; }

  auto operator<=>(const EntityPair &) const = default;
  bool operator==(const EntityPair &) const = default;

 private:
  EntityPair(std::string first, std::string second)
      : first_(std::move(first)), second_(std::move(second)) {}

  std::string first_;
  std::string second_;
};

inline EntityPair CanonicalPair(std::string_view a, std::string_view b) {
  return EntityPair::Canonical(a, b);
}

struct EntityPairHash {
  std::size_t operator()(const EntityPair &p) const {
    std::size_t h = std::hash<std::string>{}(p.first());
    return h ^ (std::hash<std::string>{}(p.second()) + 0x9e3779b97f4a7c15ULL +
                (h << 6) + (h >> 2));
  }
};

// The unit r = (x, s1, s2): a sentence with two marked entity mentions.
// span1 always precedes span2.
struct RelationStatement {
  std::string statement_id;
  std::string doc_id;
  Date date;
  int sentence_index = 0;
  std::vector<std::string> tokens;
  Span span1;
  Span span2;
  std::string key1;
  std::string key2;
  MentionKind kind1 = MentionKind::kNamedEntity;
  MentionKind kind2 = MentionKind::kNamedEntity;

  EntityPair pair() const { return EntityPair::Canonical(key1, key2); }

  // Number of the pair's keys carried by this statement's two mentions.
  int KeysPresent(const EntityPair &pair) const {
    return int(pair.Contains(key1)) + int(pair.Contains(key2));
  }

  bool operator==(const RelationStatement &) const = default;
};

std::string MakeStatementId(std::string_view doc_id, int sentence_index,
                            int mention1, int mention2);

// Calls fn(i, j) for every mention pair i < j whose keys differ. Mentions are
// sorted by start, so mention i is the leftmost of the pair.
template <typename Fn>
void ForEachCandidatePair(const Sentence &sentence, Fn &&fn) {
  const auto &m = sentence.mentions;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m[i].key != m[j].key) fn(int(i), int(j));
    }
  }
}

// Number of statements ExtractCandidateStatements yields for the sentence.
std::size_t CandidateCount(const Sentence &sentence);

RelationStatement MakeStatement(const Sentence &sentence,
                                std::string_view doc_id, Date date,
                                int sentence_index, int mention1,
                                int mention2);

std::vector<RelationStatement> ExtractCandidateStatements(
    const Sentence &sentence, std::string_view doc_id, Date date,
    int sentence_index);

inline constexpr std::string_view kE1Start = "[E1]";
inline constexpr std::string_view kE1End = "[/E1]";
inline constexpr std::string_view kE2Start = "[E2]";
inline constexpr std::string_view kE2End = "[/E2]";

bool IsMarkerToken(std::string_view token);

// Marked token sequence plus where the entity tokens ended up. The marker
// tokens sit at entity1.start - 1, entity1.end and likewise for entity2.
struct MarkedStatement {
  std::vector<std::string> tokens;
  Span entity1;
  Span entity2;

  bool operator==(const MarkedStatement &) const = default;
};

// Wraps span1 in [E1] ... [/E1] and span2 in [E2] ... [/E2]. Throws
// Error(kMalformedStatement) for overlapping, empty, out-of-range or
// misordered spans.
MarkedStatement InsertMarkers(const RelationStatement &statement);

}  // namespace evtgd

#endif  // EVTGD_CORE_H_
