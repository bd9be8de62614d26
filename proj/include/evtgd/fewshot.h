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

#ifndef EVTGD_FEWSHOT_H_
#define EVTGD_FEWSHOT_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "evtgd/rng.h"

namespace evtgd {

struct EmbeddingRow {
  std::string id;
  std::string label;
  std::vector<double> vector;
};

// Fixed-dimension relation embeddings keyed by statement id.
class EmbeddingTable {
 public:
  // Throws Error(kInvalidArgument) on a duplicate id, a dimension mismatch,
  // an empty vector or a non-finite value.
  void Add(EmbeddingRow row);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  const EmbeddingRow &row(std::size_t i) const { return rows_[i]; }
  const std::vector<EmbeddingRow> &rows() const { return rows_; }

  // Throws Error(kMissingId).
  const EmbeddingRow &Find(const std::string &id) const;

  // Label -> row indices, both in ascending order (rows ordered by id).
  std::map<std::string, std::vector<std::size_t>> ByLabel() const;

 private:
  std::size_t dim_ = 0;
  std::vector<EmbeddingRow> rows_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// Reads JSON Lines records {id, label, vector}. Throws Error(kParse) with
// the line number.
EmbeddingTable ParseEmbeddings(std::istream &in);
EmbeddingTable ReadEmbeddingFile(const std::string &path);
void WriteEmbeddings(std::ostream &out, const EmbeddingTable &table);

enum class Similarity {
  kCosine,        // evaluation default
  kInnerProduct,  // what the training objective scores
};

// Throws Error(kInvalidArgument) on a dimension mismatch or a zero vector.
double CosineSimilarity(std::span<const double> u, std::span<const double> v);
double InnerProduct(std::span<const double> u, std::span<const double> v);

// One n-way k-shot instance.
struct Episode {
  int ways = 0;
  int shots = 0;
  std::vector<std::string> candidates;
  std::string query;
};

// Throws Error(kInvalidArgument) unless the candidates are k ids for each of
// n distinct labels, the query is not among them and its label is.
void ValidateEpisode(const EmbeddingTable &table, const Episode &episode);

// Label of the candidate most similar to the query. Exact ties go to the
// lexicographically smallest candidate id.
std::string EvaluateEpisode(const EmbeddingTable &table, const Episode &episode,
                            Similarity similarity = Similarity::kCosine);

// Builds the episode for `query_row`: k other examples of its label plus k
// examples from each of n - 1 other labels sampled uniformly.
Episode SampleEpisode(const EmbeddingTable &table,
                      const std::map<std::string, std::vector<std::size_t>> &by_label,
                      std::size_t query_row, int ways, int shots, Rng &rng);

struct FewShotOptions {
  int ways = 5;
  int shots = 1;
  // 0 uses every example as a query once per trial.
  std::size_t num_queries = 0;
  int trials = 10;
  std::uint64_t seed = 0;
  Similarity similarity = Similarity::kCosine;
  int workers = 1;
};

struct FewShotReport {
  int ways = 0;
  int shots = 0;
  int trials = 0;
  std::size_t queries_per_trial = 0;
  double mean_accuracy = 0.0;
  std::vector<double> per_trial;
  std::vector<std::string> warnings;

  std::string ToJson() const;
};

// Throws Error(kInsufficientExamples) naming the first label with fewer than
// shots + 1 examples, or when there are fewer than `ways` labels.
FewShotReport RunFewShot(const EmbeddingTable &table,
                         const FewShotOptions &options);

}  // namespace evtgd

#endif  // EVTGD_FEWSHOT_H_
