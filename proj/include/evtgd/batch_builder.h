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

#ifndef EVTGD_BATCH_BUILDER_H_
#define EVTGD_BATCH_BUILDER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evtgd/core.h"
#include "evtgd/rng.h"
#include "evtgd/statement_selection.h"

namespace evtgd {

inline constexpr std::string_view kBlankToken = "[BLANK]";
inline constexpr std::string_view kMaskToken = "[MASK]";

struct CorruptionConfig {
  double alpha = 0.7;   // per-entity blank probability
  double beta = 0.15;   // per-token mask probability
  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) for probabilities outside [0, 1].
  void Validate() const;
};

struct CorruptedStatement {
  std::vector<std::string> tokens;
  // Post-blank position -> original token, for every [MASK].
  std::map<int, std::string> mlm_targets;
  std::array<bool, 2> blanked{false, false};

  bool operator==(const CorruptedStatement &) const = default;
};

// Blanks each entity span independently with probability alpha, collapsing
// it to a single [BLANK], then masks every remaining token that is neither a
// marker nor a [BLANK] with probability beta.
CorruptedStatement CorruptStatement(const MarkedStatement &marked,
                                    const CorruptionConfig &config, Rng &rng);

// Undoes CorruptStatement: fills masks from mlm_targets, then expands blanks
// with the original entity tokens.
std::vector<std::string> RestoreStatement(const CorruptedStatement &corrupted,
                                          const MarkedStatement &original);

enum class StatementRole { kPositive, kEasyNegative, kHardNegative };

const char *StatementRoleName(StatementRole role);

struct BatchManifest {
  std::size_t batches = 0;
  std::size_t groups = 0;
  std::size_t statements = 0;
  std::size_t batch_size = 0;
  CorruptionConfig config;
  std::string config_hash;
  std::string batch_file_sha256;

  std::string ToJson() const;
};

// Packs whole groups greedily into batches of at most batch_size statements
// (a larger group gets a batch of its own) and writes one JSON record per
// batch. Statement n of the stream is corrupted with MixSeed(seed, n), so the
// bytes written do not depend on `workers`.
BatchManifest WriteBatches(std::span<const TrainingGroup> groups,
                           const CorruptionConfig &config,
                           std::size_t batch_size, std::ostream &out,
                           int workers = 1);

}  // namespace evtgd

#endif  // EVTGD_BATCH_BUILDER_H_
