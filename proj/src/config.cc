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

#include "evtgd/config.h"

#include <fstream>
#include <sstream>

#include "evtgd/error.h"
#include "evtgd/hashing.h"
#include "json.hpp"

namespace evtgd {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void ConfigError(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::kConfig, "config field '" + path + "': " + what);
}

std::string Child(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

bool SameKind(const ordered_json &target, const ordered_json &value) {
  if (target.is_number_float()) return value.is_number();
  if (target.is_number_unsigned() || target.is_number_integer()) {
    return value.is_number_integer();
  }
  if (target.is_string()) return value.is_string();
  if (target.is_boolean()) return value.is_boolean();
  return false;
}

// Overlays `src` onto `dst`, whose shape acts as the schema.
void Overlay(ordered_json &dst, const ordered_json &src,
             const std::string &path) {
  if (!src.is_object()) ConfigError(path.empty() ? "<root>" : path, "expected object");
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string field = Child(path, it.key());
    auto target = dst.find(it.key());
    if (target == dst.end()) ConfigError(field, "unknown key");
    if (target->is_object()) {
      Overlay(*target, it.value(), field);
    } else if (!SameKind(*target, it.value())) {
      ConfigError(field, "expected " + std::string(target->type_name()) +
                             ", got " + it.value().type_name());
    } else {
      *target = it.value();
    }
  }
}

void ApplyOverride(ordered_json &root, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    ConfigError(assignment, "override must look like key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  ordered_json *node = &root;
  std::string walked;
  std::stringstream parts(path);
  std::string part;
  while (std::getline(parts, part, '.')) {
    walked = Child(walked, part);
    if (!node->is_object()) ConfigError(walked, "not an object");
    auto it = node->find(part);
    if (it == node->end()) ConfigError(walked, "unknown key");
    node = &*it;
  }
  if (node->is_object()) ConfigError(path, "cannot override a whole section");
  ordered_json value;
  if (node->is_string()) {
    value = text;
  } else {
    value = ordered_json::parse(text, nullptr, false);
    if (value.is_discarded()) ConfigError(path, "unparseable value '" + text + "'");
  }
  if (!SameKind(*node, value)) {
    ConfigError(path, "expected " + std::string(node->type_name()));
  }
  *node = value;
}

template <typename T>
T Get(const ordered_json &root, const std::string &path) {
  const ordered_json *node = &root;
  std::stringstream parts(path);
  std::string part;
  while (std::getline(parts, part, '.')) node = &node->at(part);
  return node->get<T>();
}

long long GetInRange(const ordered_json &root, const std::string &path,
                     long long lo, long long hi) {
  const long long v = Get<long long>(root, path);
  if (v < lo || v > hi) {
    ConfigError(path, "value " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

double GetReal(const ordered_json &root, const std::string &path, double lo,
               double hi) {
  const double v = Get<double>(root, path);
  if (!(v >= lo && v <= hi)) {
    ConfigError(path, "value " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

template <typename Enum, std::size_t N>
Enum GetEnum(const ordered_json &root, const std::string &path,
             const std::pair<const char *, Enum> (&choices)[N]) {
  const std::string v = Get<std::string>(root, path);
  std::string allowed;
  for (const auto &[name, value] : choices) {
    if (v == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  ConfigError(path, "'" + v + "' is not one of: " + allowed);
}

constexpr std::pair<const char *, Strategy> kStrategies[] = {
    {"random", Strategy::kRandom},
    {"date_window", Strategy::kDateWindow},
    {"event_guided", Strategy::kEventGuided}};
constexpr std::pair<const char *, FilterMode> kFilterModes[] = {
    {"and", FilterMode::kAnd}, {"or", FilterMode::kOr}};
constexpr std::pair<const char *, SentenceMode> kSentenceModes[] = {
    {"random", SentenceMode::kRandom},
    {"date_window", SentenceMode::kDateWindow}};
constexpr std::pair<const char *, Similarity> kSimilarities[] = {
    {"cosine", Similarity::kCosine},
    {"inner_product", Similarity::kInnerProduct}};

template <typename Enum, std::size_t N>
const char *EnumName(Enum value,
                     const std::pair<const char *, Enum> (&choices)[N]) {
  for (const auto &[name, v] : choices) {
    if (v == value) return name;
  }
  return "?";
}

ordered_json ToJson(const PipelineConfig &c) {
  ordered_json j;
  j["paths"] = {{"corpus", c.paths.corpus},
                {"events", c.paths.events},
                {"output_dir", c.paths.output_dir},
                {"embeddings", c.paths.embeddings}};
  j["strategy"] = EnumName(c.strategy, kStrategies);
  j["windows"] = {{"noun_days", c.windows.noun_days},
                  {"ne_days", c.windows.ne_days},
                  {"date_window_days", c.windows.date_window_days}};
  j["filter"] = {{"min_count", c.filter.min_article_count},
                 {"min_ppmi", c.filter.min_ppmi},
                 {"mode", EnumName(c.filter.mode, kFilterModes)},
                 {"ppmi_smoothing", c.filter.ppmi_smoothing}};
  j["selection"] = {{"random_budget", c.selection.random_budget},
                    {"window_budget", c.selection.window_budget},
                    {"event_cap", c.selection.event_cap},
                    {"dedup", c.selection.dedup}};
  j["groups"] = {{"n_pos", c.groups.n_pos},
                 {"n_easy", c.groups.n_easy},
                 {"n_hard", c.groups.n_hard},
                 {"min_positives", c.groups.min_positives},
                 {"sentence_mode", EnumName(c.groups.mode, kSentenceModes)}};
  j["corruption"] = {{"alpha", c.corruption.alpha},
                     {"beta", c.corruption.beta},
                     {"batch_size", c.corruption.batch_size}};
  j["seeds"] = {{"pair", c.seeds.pair},
                {"groups", c.seeds.groups},
                {"corruption", c.seeds.corruption},
                {"eval", c.seeds.eval}};
  j["eval"] = {{"n", c.eval.n},
               {"k", c.eval.k},
               {"trials", c.eval.trials},
               {"queries", c.eval.queries},
               {"similarity", EnumName(c.eval.similarity, kSimilarities)}};
  j["parse"] = {{"strict", c.parse.strict},
                {"date_min", c.parse.date_min},
                {"date_max", c.parse.date_max},
                {"event_slack_days", c.parse.event_slack_days}};
  j["workers"] = c.workers;
  return j;
}

void CheckDate(const std::string &path, const std::string &value) {
  if (!value.empty() && !Date::Parse(value)) {
    ConfigError(path, "invalid date '" + value + "'");
  }
}

PipelineConfig FromJson(const ordered_json &j) {
  constexpr long long kMaxCount = 1LL << 62;
  PipelineConfig c;
  c.paths.corpus = Get<std::string>(j, "paths.corpus");
  c.paths.events = Get<std::string>(j, "paths.events");
  c.paths.output_dir = Get<std::string>(j, "paths.output_dir");
  c.paths.embeddings = Get<std::string>(j, "paths.embeddings");
  if (c.paths.output_dir.empty()) ConfigError("paths.output_dir", "empty");
  c.strategy = GetEnum(j, "strategy", kStrategies);
  // Window lengths are bounded by the searched range 0..7 days.
  c.windows.noun_days = int(GetInRange(j, "windows.noun_days", 0, 7));
  c.windows.ne_days = int(GetInRange(j, "windows.ne_days", 0, 7));
  c.windows.date_window_days =
      int(GetInRange(j, "windows.date_window_days", 0, 7));
  c.filter.min_article_count =
      std::uint64_t(GetInRange(j, "filter.min_count", 1, kMaxCount));
  c.filter.min_ppmi = GetReal(j, "filter.min_ppmi", 0.0, 1e300);
  c.filter.mode = GetEnum(j, "filter.mode", kFilterModes);
  c.filter.ppmi_smoothing = GetReal(j, "filter.ppmi_smoothing", 1e-9, 1.0);
  c.selection.random_budget =
      std::size_t(GetInRange(j, "selection.random_budget", 0, kMaxCount));
  c.selection.window_budget =
      std::size_t(GetInRange(j, "selection.window_budget", 0, kMaxCount));
  c.selection.event_cap =
      std::size_t(GetInRange(j, "selection.event_cap", 0, kMaxCount));
  c.selection.dedup = Get<bool>(j, "selection.dedup");
  c.groups.n_pos = std::size_t(GetInRange(j, "groups.n_pos", 1, 1 << 20));
  c.groups.n_easy = std::size_t(GetInRange(j, "groups.n_easy", 0, 1 << 20));
  c.groups.n_hard = std::size_t(GetInRange(j, "groups.n_hard", 0, 1 << 20));
  c.groups.min_positives =
      std::size_t(GetInRange(j, "groups.min_positives", 1, 1 << 20));
  if (c.groups.min_positives > c.groups.n_pos) {
    ConfigError("groups.min_positives", "exceeds groups.n_pos");
  }
  c.groups.mode = GetEnum(j, "groups.sentence_mode", kSentenceModes);
  c.corruption.alpha = GetReal(j, "corruption.alpha", 0.0, 1.0);
  c.corruption.beta = GetReal(j, "corruption.beta", 0.0, 1.0);
  c.corruption.batch_size =
      std::size_t(GetInRange(j, "corruption.batch_size", 1, 1 << 30));
  c.seeds.pair = Get<std::uint64_t>(j, "seeds.pair");
  c.seeds.groups = Get<std::uint64_t>(j, "seeds.groups");
  c.seeds.corruption = Get<std::uint64_t>(j, "seeds.corruption");
  c.seeds.eval = Get<std::uint64_t>(j, "seeds.eval");
  c.eval.n = int(GetInRange(j, "eval.n", 1, 1 << 20));
  c.eval.k = int(GetInRange(j, "eval.k", 1, 1 << 20));
  c.eval.trials = int(GetInRange(j, "eval.trials", 1, 1 << 20));
  c.eval.queries = std::size_t(GetInRange(j, "eval.queries", 0, kMaxCount));
  c.eval.similarity = GetEnum(j, "eval.similarity", kSimilarities);
  c.parse.strict = Get<bool>(j, "parse.strict");
  c.parse.date_min = Get<std::string>(j, "parse.date_min");
  c.parse.date_max = Get<std::string>(j, "parse.date_max");
  CheckDate("parse.date_min", c.parse.date_min);
  CheckDate("parse.date_max", c.parse.date_max);
  c.parse.event_slack_days =
      int(GetInRange(j, "parse.event_slack_days", 0, 3660));
  c.workers = int(GetInRange(j, "workers", 1, 1024));
  return c;
}

}  // namespace

const char *StrategyName(Strategy strategy) {
  return EnumName(strategy, kStrategies);
}

ParseOptions PipelineConfig::parse_options() const {
  ParseOptions options;
  options.strict = parse.strict;
  if (!parse.date_min.empty()) options.min_date = Date::Parse(parse.date_min);
  if (!parse.date_max.empty()) options.max_date = Date::Parse(parse.date_max);
  options.event_slack_days = parse.event_slack_days;
  return options;
}

CorruptionConfig PipelineConfig::corruption_config() const {
  return CorruptionConfig{corruption.alpha, corruption.beta, seeds.corruption};
}

std::string ConfigToJson(const PipelineConfig &config) {
  return ToJson(config).dump(2);
}

std::string ConfigHash(const PipelineConfig &config) {
  return Sha256Hex(ToJson(config).dump());
}

PipelineConfig ParseConfig(std::string_view json_text,
                           std::span<const std::string> overrides) {
  ordered_json merged = ToJson(PipelineConfig{});
  if (!json_text.empty()) {
    ordered_json user = ordered_json::parse(json_text, nullptr, false);
    if (user.is_discarded()) {
      throw Error(ErrorCode::kConfig, "config is not valid JSON");
    }
    Overlay(merged, user, "");
  }
  for (const std::string &o : overrides) ApplyOverride(merged, o);
  return FromJson(merged);
}

PipelineConfig LoadConfig(const std::string &path,
                          std::span<const std::string> overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kMissingInput, "cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return ParseConfig(text, overrides);
}

}  // namespace evtgd
