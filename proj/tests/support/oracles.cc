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

#include "oracles.h"

#include <cmath>

namespace evtgd::testing {

std::vector<Document> RandomCorpus(Rng &rng, int max_articles, int max_entities,
                                   Date start, int days) {
  const int n_articles = 1 + int(rng.Uniform(max_articles));
  const int n_entities = 2 + int(rng.Uniform(max_entities - 1));
  std::vector<Document> docs;
  for (int a = 0; a < n_articles; ++a) {
    Document d;
    d.doc_id = "a" + std::to_string(a);
    d.date = start + int(rng.Uniform(days));
    d.lang = "en";
    const int n_sent = int(rng.Uniform(4));
    for (int s = 0; s < n_sent; ++s) {
      Sentence sent;
      const int n_mentions = int(rng.Uniform(5));
      for (int m = 0; m < n_mentions; ++m) {
        sent.tokens.push_back("w");
        sent.tokens.push_back("E");
        const int pos = int(sent.tokens.size()) - 1;
        sent.mentions.push_back({pos, pos + 1,
                                 rng.Bernoulli(0.8) ? MentionKind::kNamedEntity
                                                    : MentionKind::kNoun,
                                 "e" + std::to_string(rng.Uniform(n_entities))});
      }
      sent.tokens.push_back(".");
      d.sentences.push_back(std::move(sent));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

Recount RecountWindow(const std::vector<Document> &docs, Date start, Date end) {
  Recount r;
  for (const Document &d : docs) {
    if (d.date < start || d.date > end) continue;
    ++r.articles;
    std::set<std::string> entities;
    std::set<std::pair<std::string, std::string>> pairs;
    for (const Sentence &s : d.sentences) {
      for (const EntityMention &m : s.mentions) entities.insert(m.key);
      for (std::size_t i = 0; i < s.mentions.size(); ++i) {
        for (std::size_t j = 0; j < s.mentions.size(); ++j) {
          const std::string &a = s.mentions[i].key;
          const std::string &b = s.mentions[j].key;
          if (a < b) pairs.insert({a, b});
        }
      }
    }
    for (const auto &e : entities) ++r.entity[e];
    for (const auto &p : pairs) ++r.pair[p];
  }
  return r;
}

std::optional<long double> OraclePpmi(const Recount &counts,
                                      const std::string &a,
                                      const std::string &b) {
  const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  auto it = counts.pair.find(key);
  if (it == counts.pair.end() || it->second == 0) return std::nullopt;
  const long double n = counts.articles;
  const long double p_ab = it->second / n;
  const long double p_a = counts.entity.at(a) / n;
  const long double p_b = counts.entity.at(b) / n;
  const long double pmi = std::log2(p_ab / (p_a * p_b));
  return pmi > 0 ? pmi : 0.0L;
}

EmbeddingTable GaussianTable(Rng &rng, int labels, int per_label, int dim) {
  EmbeddingTable table;
  for (int l = 0; l < labels; ++l) {
    for (int i = 0; i < per_label; ++i) {
      EmbeddingRow row{"g" + std::to_string(l) + "-" + std::to_string(i),
                       "L" + std::to_string(l), {}};
      for (int d = 0; d < dim; ++d) {
        // Box-Muller; 1 - UnitReal() keeps the log argument positive.
        const double u1 = 1.0 - rng.UnitReal();
        const double u2 = rng.UnitReal();
        row.vector.push_back(std::sqrt(-2.0 * std::log(u1)) *
                             std::cos(2.0 * M_PI * u2));
      }
      table.Add(std::move(row));
    }
  }
  return table;
}

std::string OracleNearestLabel(const EmbeddingTable &table,
                               const std::vector<std::string> &candidates,
                               const std::string &query, bool cosine) {
  const auto &q = table.Find(query).vector;
  long double best = -INFINITY;
  std::string best_id;
  for (const std::string &id : candidates) {
    const auto &v = table.Find(id).vector;
    long double dot = 0, nq = 0, nv = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      dot += (long double)q[i] * v[i];
      nq += (long double)q[i] * q[i];
      nv += (long double)v[i] * v[i];
    }
    const long double score = cosine ? dot / std::sqrt(nq * nv) : dot;
    if (score > best || (score == best && id < best_id)) {
      best = score;
      best_id = id;
    }
  }
  return table.Find(best_id).label;
}

}  // namespace evtgd::testing
