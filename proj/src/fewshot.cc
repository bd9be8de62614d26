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

#include "evtgd/fewshot.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "evtgd/error.h"
#include "evtgd/parallel.h"
#include "json.hpp"

namespace evtgd {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void CheckDims(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "similarity of vectors with different dimensions");
  }
}

double Score(Similarity similarity, std::span<const double> u,
             std::span<const double> v) {
  return similarity == Similarity::kCosine ? CosineSimilarity(u, v)
                                           : InnerProduct(u, v);
}

}  // namespace

void EmbeddingTable::Add(EmbeddingRow row) {
  if (row.vector.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty vector for " + row.id);
  }
  if (dim_ != 0 && row.vector.size() != dim_) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector for " + row.id + " has dimension " +
                    std::to_string(row.vector.size()) + ", expected " +
                    std::to_string(dim_));
  }
  for (double x : row.vector) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite value in vector for " + row.id);
    }
  }
  if (!by_id_.emplace(row.id, rows_.size()).second) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate id " + row.id);
  }
  dim_ = row.vector.size();
  rows_.push_back(std::move(row));
}

const EmbeddingRow &EmbeddingTable::Find(const std::string &id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw Error(ErrorCode::kMissingId, "no embedding for id " + id);
  }
  return rows_[it->second];
}

std::map<std::string, std::vector<std::size_t>> EmbeddingTable::ByLabel()
    const {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out[rows_[i].label].push_back(i);
  }
  for (auto &[label, members] : out) {
    std::sort(members.begin(), members.end(),
              [this](std::size_t a, std::size_t b) {
                return rows_[a].id < rows_[b].id;
              });
  }
  return out;
}

EmbeddingTable ParseEmbeddings(std::istream &in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const std::string where = "embeddings line " + std::to_string(line_number);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kParse, where + ": not a JSON object");
    }
    EmbeddingRow row;
    try {
      row.id = j.at("id").get<std::string>();
      row.label = j.at("label").get<std::string>();
      row.vector = j.at("vector").get<std::vector<double>>();
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    try {
      table.Add(std::move(row));
    } catch (const Error &e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable ReadEmbeddingFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  return ParseEmbeddings(in);
}

void WriteEmbeddings(std::ostream &out, const EmbeddingTable &table) {
  for (const EmbeddingRow &row : table.rows()) {
    ordered_json j;
    j["id"] = row.id;
    j["label"] = row.label;
    j["vector"] = row.vector;
    out << j.dump() << '\n';
  }
}

double InnerProduct(std::span<const double> u, std::span<const double> v) {
  CheckDims(u, v);
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return dot;
}

double CosineSimilarity(std::span<const double> u, std::span<const double> v) {
  CheckDims(u, v);
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "cosine similarity with a zero vector");
  }
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

void ValidateEpisode(const EmbeddingTable &table, const Episode &episode) {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, "invalid episode: " + what);
  };
  if (episode.ways <= 0 || episode.shots <= 0) fail("non-positive n or k");
  if (episode.candidates.size() !=
      std::size_t(episode.ways) * std::size_t(episode.shots)) {
    fail("candidate count is not n * k");
  }
  std::map<std::string, int> per_label;
  std::set<std::string> ids;
  for (const std::string &id : episode.candidates) {
    if (id == episode.query) fail("query among candidates");
    if (!ids.insert(id).second) fail("duplicate candidate " + id);
    ++per_label[table.Find(id).label];
  }
  if (per_label.size() != std::size_t(episode.ways)) fail("wrong label count");
  for (const auto &[label, count] : per_label) {
    if (count != episode.shots) fail("label " + label + " has wrong shot count");
  }
  if (!per_label.count(table.Find(episode.query).label)) {
    fail("query label not among candidates");
  }
}

std::string EvaluateEpisode(const EmbeddingTable &table, const Episode &episode,
                            Similarity similarity) {
  const EmbeddingRow &query = table.Find(episode.query);
  const EmbeddingRow *best = nullptr;
  double best_score = 0.0;
  for (const std::string &id : episode.candidates) {
    const EmbeddingRow &c = table.Find(id);
    const double score = Score(similarity, query.vector, c.vector);
    if (!best || score > best_score ||
        (score == best_score && c.id < best->id)) {
      best = &c;
      best_score = score;
    }
  }
  if (!best) throw Error(ErrorCode::kInvalidArgument, "episode without candidates");
  return best->label;
}

Episode SampleEpisode(
    const EmbeddingTable &table,
    const std::map<std::string, std::vector<std::size_t>> &by_label,
    std::size_t query_row, int ways, int shots, Rng &rng) {
  const std::string &query_label = table.row(query_row).label;
  Episode episode;
  episode.ways = ways;
  episode.shots = shots;
  episode.query = table.row(query_row).id;

  std::vector<const std::string *> others;
  for (const auto &[label, members] : by_label) {
    if (label != query_label) others.push_back(&label);
  }
  std::vector<const std::string *> labels{&query_label};
  for (std::size_t i : SampleWithoutReplacement(others.size(), ways - 1, rng)) {
    labels.push_back(others[i]);
  }
  for (const std::string *label : labels) {
    std::vector<std::size_t> pool;
    for (std::size_t r : by_label.at(*label)) {
      if (r != query_row) pool.push_back(r);
    }
    for (std::size_t i : SampleWithoutReplacement(pool.size(), shots, rng)) {
      episode.candidates.push_back(table.row(pool[i]).id);
    }
  }
  return episode;
}

std::string FewShotReport::ToJson() const {
  ordered_json j;
  j["n"] = ways;
  j["k"] = shots;
  j["trials"] = trials;
  j["queries_per_trial"] = queries_per_trial;
  j["mean_acc"] = mean_accuracy;
  j["per_trial"] = per_trial;
  return j.dump(2);
}

FewShotReport RunFewShot(const EmbeddingTable &table,
                         const FewShotOptions &options) {
  if (options.ways < 1 || options.shots < 1 || options.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n, k and trials must be positive");
  }
  const auto by_label = table.ByLabel();
  for (const auto &[label, members] : by_label) {
    if (members.size() < std::size_t(options.shots) + 1) {
      throw Error(ErrorCode::kInsufficientExamples,
                  "label '" + label + "' has " +
                      std::to_string(members.size()) + " examples; " +
                      std::to_string(options.shots + 1) + " needed");
    }
  }
  if (by_label.size() < std::size_t(options.ways)) {
    throw Error(ErrorCode::kInsufficientExamples,
                std::to_string(by_label.size()) + " labels for a " +
                    std::to_string(options.ways) + "-way evaluation");
  }

  FewShotReport report;
  report.ways = options.ways;
  report.shots = options.shots;
  report.trials = options.trials;
  const std::size_t total = table.size();
  const bool every_example =
      options.num_queries == 0 || options.num_queries == total;
  report.queries_per_trial = every_example ? total : options.num_queries;
  if (options.num_queries > total) {
    report.warnings.push_back(
        "requested " + std::to_string(options.num_queries) +
        " queries from " + std::to_string(total) +
        " examples; sampling queries uniformly with replacement");
  }

  for (int t = 0; t < options.trials; ++t) {
    const std::uint64_t trial_seed = MixSeed(options.seed, std::uint64_t(t));
    std::vector<std::size_t> queries;
    if (every_example) {
      queries.resize(total);
      for (std::size_t i = 0; i < total; ++i) queries[i] = i;
    } else if (options.num_queries < total) {
      Rng rng(MixSeed(trial_seed, ~std::uint64_t{0}));
      queries = SampleWithoutReplacement(total, options.num_queries, rng);
    } else {
      Rng rng(MixSeed(trial_seed, ~std::uint64_t{0}));
      for (std::size_t i = 0; i < options.num_queries; ++i) {
        queries.push_back(std::size_t(rng.Uniform(total)));
      }
    }
    std::vector<char> hit(queries.size(), 0);
    ParallelFor(queries.size(), options.workers, [&](std::size_t q) {
      Rng rng(MixSeed(trial_seed, q));
      Episode episode = SampleEpisode(table, by_label, queries[q],
                                      options.ways, options.shots, rng);
      hit[q] = EvaluateEpisode(table, episode, options.similarity) ==
               table.row(queries[q]).label;
    });
    const auto hits = std::count(hit.begin(), hit.end(), char(1));
    report.per_trial.push_back(double(hits) / double(queries.size()));
  }
  double sum = 0.0;
  for (double a : report.per_trial) sum += a;
  report.mean_accuracy = sum / double(report.per_trial.size());
  return report;
}

}  // namespace evtgd
