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

#ifndef EVTGD_INGESTION_H_
#define EVTGD_INGESTION_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtgd/core.h"
#include "evtgd/date.h"

namespace evtgd {

struct ParseOptions {
  // Strict mode throws on the first malformed record; lenient mode counts and
  // skips it.
  bool strict = false;
  // Optional inclusive date range. Records dated outside it are malformed.
  std::optional<Date> min_date;
  std::optional<Date> max_date;
  // Extra days either side of the range accepted for event records.
  int event_slack_days = 0;
};

struct ParseCounters {
  std::size_t records = 0;
  std::size_t yielded = 0;
  std::size_t skipped = 0;
  // First few skip reasons, for diagnostics.
  std::vector<std::string> skip_reasons;
};

// Parses one corpus JSON Lines record. Throws Error(kParse) naming the line
// and the offending field.
Document ParseDocumentRecord(std::string_view line, std::size_t line_number,
                             const ParseOptions &options = {});

// Serializes a document as one corpus record (no trailing newline).
std::string SerializeDocument(const Document &document);

// Lazy reader over a corpus stream; yields documents in file order.
class CorpusReader {
 public:
  explicit CorpusReader(std::istream &in, ParseOptions options = {})
      : in_(in), options_(std::move(options)) {}

  // Next well-formed document, or nullopt at end of stream.
  std::optional<Document> Next();

  const ParseCounters &counters() const { return counters_; }

 private:
  std::istream &in_;
  ParseOptions options_;
  ParseCounters counters_;
  std::size_t line_number_ = 0;
  std::string line_;
};

// Reads a whole corpus file. Throws Error(kMissingInput) when it cannot be
// opened.
std::vector<Document> ReadCorpusFile(const std::string &path,
                                     const ParseOptions &options = {},
                                     ParseCounters *counters = nullptr);

struct EventPair {
  EntityPair pair;
  // Both keys were tagged as named entities in the description.
  bool named_entities = false;
};

struct EventRecord {
  std::string event_id;
  Date date;
  std::vector<std::string> tokens;
  std::vector<EntityMention> mentions;
  // Canonical pairs over mentions with distinct keys, sorted and unique.
  std::vector<EventPair> pairs;

  bool has_pairs() const { return !pairs.empty(); }
};

// Builds the pair list of an event from its mentions.
std::vector<EventPair> EventPairsFromMentions(
    std::span<const EntityMention> mentions);

// Parses an event stream. The result is stably sorted by date. Records
// without an "id" field get "event-<ordinal>" from their position in the
// file.
std::vector<EventRecord> ParseEventStream(std::istream &in,
                                          const ParseOptions &options = {},
                                          ParseCounters *counters = nullptr);

std::vector<EventRecord> ReadEventFile(const std::string &path,
                                       const ParseOptions &options = {},
                                       ParseCounters *counters = nullptr);

std::string SerializeEvent(const EventRecord &event);

// Events keyed by date; indices refer to the input sequence.
std::map<Date, std::vector<std::size_t>> GroupEventsByDate(
    std::span<const EventRecord> events);

// Lossy stand-in for a real tagger: splits on whitespace and punctuation,
// and marks maximal runs of capitalized tokens as named entities.
Sentence NaiveMentionFallback(std::string_view text);

}  // namespace evtgd

#endif  // EVTGD_INGESTION_H_
