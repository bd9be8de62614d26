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

#include "evtgd/ingestion.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "evtgd/error.h"
#include "json.hpp"

namespace evtgd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxSkipReasons = 16;

// Schema violation at a field path; turned into Error(kParse) with the line
// number by the record-level entry points.
struct FieldError {
  std::string field;
  std::string message;
};

const json &Member(const json &obj, const std::string &path, const char *name) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw FieldError{path.empty() ? name : path + "." + name, "missing"};
  }
  return *it;
}

std::string Join(const std::string &path, const char *name) {
  return path.empty() ? std::string(name) : path + "." + name;
}

std::string StringField(const json &obj, const std::string &path,
                        const char *name) {
  const json &v = Member(obj, path, name);
  if (!v.is_string()) throw FieldError{Join(path, name), "expected string"};
  return v.get<std::string>();
}

int IntField(const json &obj, const std::string &path, const char *name) {
  const json &v = Member(obj, path, name);
  if (!v.is_number_integer()) {
    throw FieldError{Join(path, name), "expected integer"};
  }
  auto value = v.get<long long>();
  if (value < std::numeric_limits<int>::min() ||
      value > std::numeric_limits<int>::max()) {
    throw FieldError{Join(path, name), "integer out of range"};
  }
  return int(value);
}

Date DateField(const json &obj, const std::string &path,
               const ParseOptions &options, int slack) {
  std::string text = StringField(obj, path, "date");
  auto date = Date::Parse(text);
  if (!date) throw FieldError{Join(path, "date"), "invalid date '" + text + "'"};
  if (options.min_date && *date < *options.min_date - slack) {
    throw FieldError{Join(path, "date"), "before corpus range: " + text};
  }
  if (options.max_date && *date > *options.max_date + slack) {
    throw FieldError{Join(path, "date"), "after corpus range: " + text};
  }
  return *date;
}

std::vector<std::string> TokensField(const json &obj, const std::string &path) {
  const json &v = Member(obj, path, "tokens");
  const std::string field = Join(path, "tokens");
  if (!v.is_array()) throw FieldError{field, "expected array"};
  std::vector<std::string> tokens;
  tokens.reserve(v.size());
  for (const json &t : v) {
    if (!t.is_string()) throw FieldError{field, "expected array of strings"};
    tokens.push_back(t.get<std::string>());
  }
  return tokens;
}

std::vector<EntityMention> MentionsField(const json &obj,
                                         const std::string &path) {
  const json &v = Member(obj, path, "mentions");
  const std::string field = Join(path, "mentions");
  if (!v.is_array()) throw FieldError{field, "expected array"};
  std::vector<EntityMention> mentions;
  mentions.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json &m = v[i];
    const std::string mpath = field + "[" + std::to_string(i) + "]";
    if (!m.is_object()) throw FieldError{mpath, "expected object"};
    EntityMention mention;
    mention.start = IntField(m, mpath, "start");
    mention.end = IntField(m, mpath, "end");
    std::string kind = StringField(m, mpath, "kind");
    if (kind == "NE") {
      mention.kind = MentionKind::kNamedEntity;
    } else if (kind == "NOUN") {
      mention.kind = MentionKind::kNoun;
    } else {
      throw FieldError{mpath + ".kind", "expected \"NE\" or \"NOUN\""};
    }
    mention.key = StringField(m, mpath, "key");
    mentions.push_back(std::move(mention));
  }
  return mentions;
}

void CheckMentions(const Sentence &sentence, const std::string &path) {
  if (auto problem = ValidateSentence(sentence)) {
    throw FieldError{Join(path, "mentions"), *problem};
  }
}

Error ToParseError(std::size_t line_number, const FieldError &e) {
  return Error(ErrorCode::kParse, "line " + std::to_string(line_number) +
                                      ": field '" + e.field +
                                      "': " + e.message);
}

json ParseJson(std::string_view line, std::size_t line_number) {
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_number) + ": invalid JSON");
  }
  if (!record.is_object()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_number) + ": expected object");
  }
  return record;
}

ordered_json MentionsToJson(const std::vector<EntityMention> &mentions) {
  ordered_json out = ordered_json::array();
  for (const EntityMention &m : mentions) {
    ordered_json j;
    j["start"] = m.start;
    j["end"] = m.end;
    j["kind"] = m.kind == MentionKind::kNamedEntity ? "NE" : "NOUN";
    j["key"] = m.key;
    out.push_back(std::move(j));
  }
  return out;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

void NoteSkip(ParseCounters &counters, const std::string &reason) {
  ++counters.skipped;
  if (counters.skip_reasons.size() < kMaxSkipReasons) {
    counters.skip_reasons.push_back(reason);
  }
}

EventRecord ParseEventRecord(std::string_view line, std::size_t line_number,
                             std::size_t ordinal,
                             const ParseOptions &options) {
  json record = ParseJson(line, line_number);
  try {
    EventRecord event;
    auto id = record.find("id");
    if (id != record.end()) {
      if (!id->is_string()) throw FieldError{"id", "expected string"};
      event.event_id = id->get<std::string>();
    } else {
      event.event_id = "event-" + std::to_string(ordinal);
    }
    event.date = DateField(record, "", options, options.event_slack_days);
    Sentence description{TokensField(record, ""), MentionsField(record, "")};
    CheckMentions(description, "");
    event.tokens = std::move(description.tokens);
    event.mentions = std::move(description.mentions);
    event.pairs = EventPairsFromMentions(event.mentions);
    return event;
  } catch (const FieldError &e) {
    throw ToParseError(line_number, e);
  }
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kMissingInput, "cannot open input file: " + path);
  }
  return in;
}

}  // namespace

Document ParseDocumentRecord(std::string_view line, std::size_t line_number,
                             const ParseOptions &options) {
  json record = ParseJson(line, line_number);
  try {
    Document doc;
    doc.doc_id = StringField(record, "", "doc_id");
    doc.date = DateField(record, "", options, 0);
    doc.lang = StringField(record, "", "lang");
    const json &sentences = Member(record, "", "sentences");
    if (!sentences.is_array()) throw FieldError{"sentences", "expected array"};
    doc.sentences.reserve(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const std::string path = "sentences[" + std::to_string(i) + "]";
      if (!sentences[i].is_object()) throw FieldError{path, "expected object"};
      Sentence s;
      s.tokens = TokensField(sentences[i], path);
      s.mentions = MentionsField(sentences[i], path);
      CheckMentions(s, path);
      doc.sentences.push_back(std::move(s));
    }
    return doc;
  } catch (const FieldError &e) {
    throw ToParseError(line_number, e);
  }
}

std::string SerializeDocument(const Document &document) {
  ordered_json j;
  j["doc_id"] = document.doc_id;
  j["date"] = document.date.ToString();
  j["lang"] = document.lang;
  ordered_json sentences = ordered_json::array();
  for (const Sentence &s : document.sentences) {
    ordered_json sj;
    sj["tokens"] = s.tokens;
    sj["mentions"] = MentionsToJson(s.mentions);
    sentences.push_back(std::move(sj));
  }
  j["sentences"] = std::move(sentences);
  return j.dump();
}

std::optional<Document> CorpusReader::Next() {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (IsBlank(line_)) continue;
    ++counters_.records;
    try {
      Document doc = ParseDocumentRecord(line_, line_number_, options_);
      ++counters_.yielded;
      return doc;
    } catch (const Error &e) {
      if (options_.strict) throw;
      NoteSkip(counters_, e.what());
    }
  }
  if (in_.bad()) throw Error(ErrorCode::kIo, "read failure in corpus stream");
  return std::nullopt;
}

std::vector<Document> ReadCorpusFile(const std::string &path,
                                     const ParseOptions &options,
                                     ParseCounters *counters) {
  std::ifstream in = OpenInput(path);
  CorpusReader reader(in, options);
  std::vector<Document> docs;
  while (auto doc = reader.Next()) docs.push_back(std::move(*doc));
  if (counters) *counters = reader.counters();
  return docs;
}

std::vector<EventPair> EventPairsFromMentions(
    std::span<const EntityMention> mentions) {
  // A key counts as a named entity only if every mention of it is one.
  std::map<std::string, bool> named;
  for (const EntityMention &m : mentions) {
    auto [it, inserted] =
        named.emplace(m.key, m.kind == MentionKind::kNamedEntity);
    if (!inserted) it->second = it->second && m.kind == MentionKind::kNamedEntity;
  }
  std::vector<EventPair> pairs;
  for (auto a = named.begin(); a != named.end(); ++a) {
    for (auto b = std::next(a); b != named.end(); ++b) {
      pairs.push_back({EntityPair::Canonical(a->first, b->first),
                       a->second && b->second});
    }
  }
  return pairs;
}

std::vector<EventRecord> ParseEventStream(std::istream &in,
                                          const ParseOptions &options,
                                          ParseCounters *counters) {
  ParseCounters local;
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const std::size_t ordinal = local.records++;
    try {
      events.push_back(ParseEventRecord(line, line_number, ordinal, options));
      ++local.yielded;
    } catch (const Error &e) {
      if (options.strict) throw;
      NoteSkip(local, e.what());
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure in event stream");
  std::stable_sort(events.begin(), events.end(),
                   [](const EventRecord &a, const EventRecord &b) {
                     return a.date < b.date;
                   });
  if (counters) *counters = std::move(local);
  return events;
}

std::vector<EventRecord> ReadEventFile(const std::string &path,
                                       const ParseOptions &options,
                                       ParseCounters *counters) {
  std::ifstream in = OpenInput(path);
  return ParseEventStream(in, options, counters);
}

std::string SerializeEvent(const EventRecord &event) {
  ordered_json j;
  j["id"] = event.event_id;
  j["date"] = event.date.ToString();
  j["tokens"] = event.tokens;
  j["mentions"] = MentionsToJson(event.mentions);
  return j.dump();
}

std::map<Date, std::vector<std::size_t>> GroupEventsByDate(
    std::span<const EventRecord> events) {
  std::map<Date, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < events.size(); ++i) {
    groups[events[i].date].push_back(i);
  }
  return groups;
}

Sentence NaiveMentionFallback(std::string_view text) {
  Sentence sentence;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) sentence.tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (std::ispunct(u) && c != '\'' && c != '-') {
      flush();
      sentence.tokens.emplace_back(1, c);
    } else {
      current.push_back(c);
    }
  }
  flush();

  auto capitalized = [](const std::string &token) {
    return std::isupper(static_cast<unsigned char>(token[0])) != 0;
  };
  const int n = int(sentence.tokens.size());
  for (int i = 0; i < n;) {
    if (!capitalized(sentence.tokens[i])) {
      ++i;
      continue;
    }
    int j = i;
    std::string surface;
    while (j < n && capitalized(sentence.tokens[j])) {
      if (!surface.empty()) surface += ' ';
      surface += sentence.tokens[j];
      ++j;
    }
    sentence.mentions.push_back(
        {i, j, MentionKind::kNamedEntity, NormalizeEntityKey(surface)});
    i = j;
  }
  return sentence;
}

}  // namespace evtgd
