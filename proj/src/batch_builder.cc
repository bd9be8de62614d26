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

#include "evtgd/batch_builder.h"

#include "evtgd/error.h"
#include "evtgd/hashing.h"
#include "evtgd/parallel.h"
#include "json.hpp"

namespace evtgd {

using ordered_json = nlohmann::ordered_json;

namespace {

struct Item {
  const TrainingGroup *group;
  const RelationStatement *statement;
  StatementRole role;
};

ordered_json ConfigJson(const CorruptionConfig &config,
                        std::size_t batch_size) {
  ordered_json j;
  j["alpha"] = config.alpha;
  j["beta"] = config.beta;
  j["seed"] = config.seed;
  j["batch_size"] = batch_size;
  return j;
}

ordered_json ItemJson(const Item &item, const CorruptedStatement &c) {
  ordered_json j;
  j["group_id"] = item.group->group_id;
  j["statement_id"] = item.statement->statement_id;
  j["role"] = StatementRoleName(item.role);
  j["pair_keys"] = item.statement->KeysPresent(item.group->pair());
  j["tokens"] = c.tokens;
  ordered_json targets = ordered_json::object();
  for (const auto &[pos, token] : c.mlm_targets) {
    targets[std::to_string(pos)] = token;
  }
  j["mlm_targets"] = std::move(targets);
  j["blanked"] = {c.blanked[0], c.blanked[1]};
  // Original entity tokens, so blanks can be expanded from the record alone.
  const RelationStatement &st = *item.statement;
  ordered_json entities = ordered_json::array();
  for (const Span &span : {st.span1, st.span2}) {
    entities.push_back(std::vector<std::string>(
        st.tokens.begin() + span.start, st.tokens.begin() + span.end));
  }
  j["entities"] = std::move(entities);
  return j;
}

}  // namespace

void CorruptionConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "corruption probabilities must lie in [0, 1]");
  }
}

CorruptedStatement CorruptStatement(const MarkedStatement &marked,
                                    const CorruptionConfig &config, Rng &rng) {
  CorruptedStatement out;
  out.blanked[0] = rng.Bernoulli(config.alpha);
  out.blanked[1] = rng.Bernoulli(config.alpha);
  const Span spans[2] = {marked.entity1, marked.entity2};
  out.tokens.reserve(marked.tokens.size());
  for (int i = 0; i < int(marked.tokens.size()); ++i) {
    bool in_blank = false;
    for (int e = 0; e < 2; ++e) {
      if (out.blanked[e] && spans[e].start <= i && i < spans[e].end) {
        if (i == spans[e].start) out.tokens.emplace_back(kBlankToken);
        in_blank = true;
      }
    }
    if (in_blank) continue;
    const std::string &token = marked.tokens[i];
    if (IsMarkerToken(token) || !rng.Bernoulli(config.beta)) {
      out.tokens.push_back(token);
      continue;
    }
    out.mlm_targets.emplace(int(out.tokens.size()), token);
    out.tokens.emplace_back(kMaskToken);
  }
  return out;
}

std::vector<std::string> RestoreStatement(const CorruptedStatement &corrupted,
                                          const MarkedStatement &original) {
  std::vector<std::string> unmasked = corrupted.tokens;
  for (const auto &[pos, token] : corrupted.mlm_targets) {
    unmasked.at(std::size_t(pos)) = token;
  }
  const Span spans[2] = {original.entity1, original.entity2};
  const std::string_view openers[2] = {kE1Start, kE2Start};
  std::vector<std::string> out;
  out.reserve(original.tokens.size());
  for (std::size_t i = 0; i < unmasked.size(); ++i) {
    out.push_back(unmasked[i]);
    for (int e = 0; e < 2; ++e) {
      if (corrupted.blanked[e] && unmasked[i] == openers[e]) {
        out.insert(out.end(), original.tokens.begin() + spans[e].start,
                   original.tokens.begin() + spans[e].end);
        ++i;  // the [BLANK] standing in for the span
      }
    }
  }
  return out;
}

const char *StatementRoleName(StatementRole role) {
  switch (role) {
    case StatementRole::kPositive: return "pos";
    case StatementRole::kEasyNegative: return "easy_neg";
    case StatementRole::kHardNegative: return "hard_neg";
  }
  return "unknown";
}

std::string BatchManifest::ToJson() const {
  ordered_json j;
  j["batches"] = batches;
  j["groups"] = groups;
  j["statements"] = statements;
  j["config"] = ConfigJson(config, batch_size);
  j["config_hash"] = config_hash;
  j["batch_file_sha256"] = batch_file_sha256;
  return j.dump(2);
}

BatchManifest WriteBatches(std::span<const TrainingGroup> groups,
                           const CorruptionConfig &config,
                           std::size_t batch_size, std::ostream &out,
                           int workers) {
  config.Validate();
  if (batch_size == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch size must be positive");
  }

  // Batch boundaries, as [first group, last group) ranges.
  std::vector<std::pair<std::size_t, std::size_t>> batches;
  for (std::size_t g = 0; g < groups.size();) {
    std::size_t end = g;
    std::size_t filled = 0;
    while (end < groups.size() &&
           (end == g || filled + groups[end].size() <= batch_size)) {
      filled += groups[end].size();
      ++end;
    }
    batches.emplace_back(g, end);
    g = end;
  }

  std::vector<Item> items;
  for (const TrainingGroup &group : groups) {
    for (const auto &s : group.positives) {
      items.push_back({&group, &s, StatementRole::kPositive});
    }
    for (const auto &s : group.easy_negatives) {
      items.push_back({&group, &s, StatementRole::kEasyNegative});
    }
    for (const auto &s : group.hard_negatives) {
      items.push_back({&group, &s, StatementRole::kHardNegative});
    }
  }
  std::vector<CorruptedStatement> corrupted(items.size());
  ParallelFor(items.size(), workers, [&](std::size_t n) {
    Rng rng(MixSeed(config.seed, n));
    corrupted[n] = CorruptStatement(InsertMarkers(*items[n].statement), config,
                                    rng);
  });

  Sha256 sha;
  std::size_t next_item = 0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    std::size_t statements = 0;
    for (std::size_t g = batches[b].first; g < batches[b].second; ++g) {
      statements += groups[g].size();
    }
    ordered_json record;
    record["batch_id"] = b;
    ordered_json list = ordered_json::array();
    for (std::size_t k = 0; k < statements; ++k, ++next_item) {
      list.push_back(ItemJson(items[next_item], corrupted[next_item]));
    }
    record["items"] = std::move(list);
    std::string line = record.dump();
    line += '\n';
    sha.Update(line);
    out << line;
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing batch file");

  BatchManifest manifest;
  manifest.batches = batches.size();
  manifest.groups = groups.size();
  manifest.statements = items.size();
  manifest.batch_size = batch_size;
  manifest.config = config;
  manifest.config_hash = Sha256Hex(ConfigJson(config, batch_size).dump());
  manifest.batch_file_sha256 = sha.HexDigest();
  return manifest;
}

}  // namespace evtgd
