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

#ifndef EVTGD_PIPELINE_H_
#define EVTGD_PIPELINE_H_

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtgd/config.h"
#include "evtgd/core.h"

namespace evtgd {

enum class Stage { kExtract, kStats, kPair, kGroups, kBatches, kEval, kPipeline };

std::optional<Stage> StageFromName(std::string_view name);
const char *StageName(Stage stage);

// Artifact names inside the output directory.
namespace artifacts {
inline constexpr const char *kExtraction = "extraction.json";
inline constexpr const char *kStats = "stats.tsv";
inline constexpr const char *kPairs = "pairs.jsonl";
inline constexpr const char *kGroups = "groups.jsonl";
inline constexpr const char *kGroupSummary = "groups.summary.json";
inline constexpr const char *kBatches = "batches.jsonl";
inline constexpr const char *kBatchManifest = "batch_manifest.json";
inline constexpr const char *kEvalReport = "eval_report.json";
}  // namespace artifacts

// Candidate-statement accounting over a corpus: the articles / sentences /
// entity pairs / relation statements columns of a corpus summary.
struct ExtractionSummary {
  std::size_t articles = 0;
  std::size_t sentences = 0;
  std::size_t mentions = 0;
  std::size_t statements = 0;
  std::size_t distinct_pairs = 0;
  std::size_t skipped_records = 0;

  std::string ToJson() const;
};

// Extracts every candidate statement (counting, not storing them) and
// collects the distinct pairs, sharding documents across workers.
ExtractionSummary SummarizeExtraction(std::span<const Document> documents,
                                      int workers = 1);

struct StageOutcome {
  std::vector<std::string> warnings;
  // Short human-readable lines for the console (e.g. an accuracy).
  std::vector<std::string> messages;
};

// Runs one stage (or the whole chain for kPipeline) and writes its artifacts
// and a "<stage>.manifest.json" run manifest into paths.output_dir. Every
// file is written to a temporary name and renamed into place.
StageOutcome RunStage(Stage stage, const PipelineConfig &config);

// Writes `content` to `path` via a temporary file and rename.
void WriteFileAtomic(const std::string &path, std::string_view content);

}  // namespace evtgd

#endif  // EVTGD_PIPELINE_H_
