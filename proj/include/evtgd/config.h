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

#ifndef EVTGD_CONFIG_H_
#define EVTGD_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtgd/batch_builder.h"
#include "evtgd/fewshot.h"
#include "evtgd/ingestion.h"
#include "evtgd/pair_selection.h"
#include "evtgd/statement_selection.h"

namespace evtgd {

enum class Strategy { kRandom, kDateWindow, kEventGuided };

const char *StrategyName(Strategy strategy);

// Every knob of the pipeline. The filter thresholds and budgets are tuning
// choices rather than fixed protocol values.
struct PipelineConfig {
  struct Paths {
    std::string corpus;
    std::string events;
    std::string output_dir = "out";
    std::string embeddings;
  } paths;

  Strategy strategy = Strategy::kEventGuided;

  struct Windows {
    int noun_days = 4;
    int ne_days = 7;
    int date_window_days = 4;
  } windows;

  PairFilter filter;

  struct Selection {
    std::size_t random_budget = 5000;
    std::size_t window_budget = 50;
    std::size_t event_cap = 0;  // 0 = uncapped
    bool dedup = false;
  } selection;

  GroupConfig groups;

  struct Corruption {
    double alpha = 0.7;
    double beta = 0.15;
    std::size_t batch_size = 32;
  } corruption;

  struct Seeds {
    std::uint64_t pair = 1;
    std::uint64_t groups = 2;
    std::uint64_t corruption = 3;
    std::uint64_t eval = 4;
  } seeds;

  struct Eval {
    int n = 5;
    int k = 1;
    int trials = 10;
    std::size_t queries = 0;  // 0 = every example once
    Similarity similarity = Similarity::kCosine;
  } eval;

  struct Parse {
    bool strict = false;
    std::string date_min;
    std::string date_max;
    int event_slack_days = 0;
  } parse;

  int workers = 1;

  ParseOptions parse_options() const;
  CorruptionConfig corruption_config() const;
};

// Environment variable naming the config file used when none is given.
inline constexpr const char *kConfigEnvVar = "EVTGD_CONFIG";

// Canonical JSON rendering (stable key order); its SHA-256 is the config hash.
std::string ConfigToJson(const PipelineConfig &config);
std::string ConfigHash(const PipelineConfig &config);

// Parses a JSON config document layered over the defaults, then applies
// "dotted.key=value" overrides. Unknown keys, type mismatches and values out
// of range throw Error(kConfig) naming the field path.
PipelineConfig ParseConfig(std::string_view json_text,
                           std::span<const std::string> overrides = {});

// Reads `path` (or the defaults when empty) and applies the overrides.
// A missing file throws Error(kMissingInput).
PipelineConfig LoadConfig(const std::string &path,
                          std::span<const std::string> overrides = {});

}  // namespace evtgd

#endif  // EVTGD_CONFIG_H_
