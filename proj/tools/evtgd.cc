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

// Command-line driver for the corpus-building pipeline.
//
//   evtgd <extract|stats|pair|groups|batches|eval|pipeline>
//         [--config FILE] [--set key.path=value]... [--workers N]
//
// Exit status: 0 success, 2 config error, 3 missing input, 4 runtime failure.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evtgd/config.h"
#include "evtgd/error.h"
#include "evtgd/pipeline.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMissingInput = 3;
constexpr int kExitRuntime = 4;

int ExitCodeFor(evtgd::ErrorCode code) {
  switch (code) {
    case evtgd::ErrorCode::kConfig: return kExitConfig;
    case evtgd::ErrorCode::kMissingInput: return kExitMissingInput;
    default: return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Event-guided relation corpus builder"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  int workers = 0;
  app.add_option("-c,--config", config_path,
                 std::string("JSON config file (default: $") +
                     evtgd::kConfigEnvVar + ")");
  app.add_option("--set", overrides, "Override a config field, key.path=value")
      ->take_all();
  app.add_option("-w,--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  const std::pair<const char *, const char *> commands[] = {
      {"extract", "Count candidate relation statements"},
      {"stats", "Build the per-day co-occurrence checkpoint"},
      {"pair", "Select entity pairs with the configured strategy"},
      {"groups", "Assemble positive/negative training groups"},
      {"batches", "Corrupt and serialize training batches"},
      {"eval", "Few-shot nearest-neighbour evaluation of embeddings"},
      {"pipeline", "Run extract, stats, pair, groups and batches"},
  };
  for (const auto &[name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (config_path.empty()) {
    if (const char *env = std::getenv(evtgd::kConfigEnvVar)) config_path = env;
  }
  if (workers > 0) overrides.push_back("workers=" + std::to_string(workers));

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const evtgd::PipelineConfig config =
        evtgd::LoadConfig(config_path, overrides);
    const evtgd::StageOutcome outcome =
        evtgd::RunStage(*evtgd::StageFromName(name), config);
    for (const std::string &w : outcome.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    for (const std::string &m : outcome.messages) std::cout << m << "\n";
  } catch (const evtgd::Error &e) {
    std::cerr << "evtgd " << name << ": error ("
              << evtgd::ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    std::cerr << "evtgd " << name << ": error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
