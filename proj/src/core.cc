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

#include "evtgd/core.h"

#include <cctype>

#include "evtgd/error.h"

namespace evtgd {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDegeneratePair: return "degenerate-pair";
    case ErrorCode::kMalformedStatement: return "malformed-statement";
    case ErrorCode::kUndefinedScore: return "undefined-score";
    case ErrorCode::kWindowMismatch: return "window-mismatch";
    case ErrorCode::kEmptyGroup: return "empty-group";
    case ErrorCode::kDegenerateCorpus: return "degenerate-corpus";
    case ErrorCode::kInsufficientExamples: return "insufficient-examples";
    case ErrorCode::kMissingId: return "missing-id";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kMissingInput: return "missing-input";
  }
  return "unknown";
}

std::optional<std::string> ValidateSentence(const Sentence &sentence) {
  const int n = int(sentence.tokens.size());
  int previous_end = 0;
  for (std::size_t i = 0; i < sentence.mentions.size(); ++i) {
    const EntityMention &m = sentence.mentions[i];
    const std::string where = "mention " + std::to_string(i);
    if (m.start < 0 || m.end > n) return where + ": span outside tokens";
    if (m.start >= m.end) return where + ": end <= start";
    if (m.key.empty()) return where + ": empty key";
    if (m.key.find_first_of("\t\n\r") != std::string::npos) {
      return where + ": key contains a tab or line break";
    }
    if (m.start < previous_end) return where + ": overlaps or out of order";
    previous_end = m.end;
  }
  return std::nullopt;
}

std::string NormalizeEntityKey(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool pending_space = false;
  for (char c : surface) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

EntityPair EntityPair::Canonical(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kDegeneratePair, "entity pair with empty key");
  }
  if (a == b) {
    throw Error(ErrorCode::kDegeneratePair,
                "entity pair of identical keys: " + std::string(a));
  }
  if (b < a) std::swap(a, b);
  return EntityPair(std::string(a), std::string(b));
}

std::string MakeStatementId(std::string_view doc_id, int sentence_index,
                            int mention1, int mention2) {
  std::string id(doc_id);
  id += '#';
  id += std::to_string(sentence_index);
  id += ':';
  id += std::to_string(mention1);
  id += '-';
  id += std::to_string(mention2);
  return id;
}

std::size_t CandidateCount(const Sentence &sentence) {
  std::size_t count = 0;
  ForEachCandidatePair(sentence, [&](int, int) { ++count; });
  return count;
}

RelationStatement MakeStatement(const Sentence &sentence,
                                std::string_view doc_id, Date date,
                                int sentence_index, int mention1,
                                int mention2) {
  const EntityMention &a = sentence.mentions[mention1];
  const EntityMention &b = sentence.mentions[mention2];
  RelationStatement s;
  s.statement_id = MakeStatementId(doc_id, sentence_index, mention1, mention2);
  s.doc_id = std::string(doc_id);
  s.date = date;
  s.sentence_index = sentence_index;
  s.tokens = sentence.tokens;
  s.span1 = a.span();
  s.span2 = b.span();
  s.key1 = a.key;
  s.key2 = b.key;
  s.kind1 = a.kind;
  s.kind2 = b.kind;
  return s;
}

std::vector<RelationStatement> ExtractCandidateStatements(
    const Sentence &sentence, std::string_view doc_id, Date date,
    int sentence_index) {
  std::vector<RelationStatement> out;
  out.reserve(CandidateCount(sentence));
  ForEachCandidatePair(sentence, [&](int i, int j) {
    out.push_back(MakeStatement(sentence, doc_id, date, sentence_index, i, j));
  });
  return out;
}

bool IsMarkerToken(std::string_view token) {
  return token == kE1Start || token == kE1End || token == kE2Start ||
         token == kE2End;
}

MarkedStatement InsertMarkers(const RelationStatement &statement) {
  const Span &s1 = statement.span1;
  const Span &s2 = statement.span2;
  const int n = int(statement.tokens.size());
  if (s1.start < 0 || s2.end > n || s1.length() <= 0 || s2.length() <= 0 ||
      s1.Overlaps(s2) || s2.start < s1.end) {
    throw Error(ErrorCode::kMalformedStatement,
                "statement " + statement.statement_id +
                    ": spans overlap, are empty, or are out of order");
  }
  MarkedStatement out;
  out.tokens.reserve(statement.tokens.size() + 4);
  for (int i = 0; i < n; ++i) {
    if (i == s1.start) out.tokens.emplace_back(kE1Start);
    if (i == s2.start) out.tokens.emplace_back(kE2Start);
    out.tokens.push_back(statement.tokens[i]);
    if (i + 1 == s1.end) out.tokens.emplace_back(kE1End);
    if (i + 1 == s2.end) out.tokens.emplace_back(kE2End);
  }
  out.entity1 = {s1.start + 1, s1.end + 1};
  out.entity2 = {s2.start + 3, s2.end + 3};
  return out;
}

}  // namespace evtgd
