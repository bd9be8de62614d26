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

#include "fixtures.h"

#include <cstdio>
#include <sstream>

#include "evtgd/rng.h"

namespace evtgd::testing {

PlantedSpec FixtureSpec() {
  PlantedSpec spec;
  spec.seed = 11;
  spec.days = 60;
  spec.num_events = 4;
  spec.num_relations = 4;
  spec.noise_per_event = 3;
  spec.num_decoys = 12;
  spec.min_decoy_articles = 3;
  spec.max_decoy_articles = 6;
  spec.background_entities = 20;
  spec.total_sentences = 500;
  return spec;
}

EmbeddingTable SeparableEmbeddings() {
  constexpr int kLabels = 6;
  constexpr int kPerLabel = 8;
  constexpr int kDim = 16;
  Rng rng(5);
  EmbeddingTable table;
  for (int l = 0; l < kLabels; ++l) {
    for (int i = 0; i < kPerLabel; ++i) {
      EmbeddingRow row;
      char id[32];
      std::snprintf(id, sizeof(id), "s%02d-%02d", l, i);
      row.id = id;
      row.label = "rel" + std::to_string(l);
      row.vector.assign(kDim, 0.0);
      for (double &x : row.vector) x = 0.05 * (rng.UnitReal() - 0.5);
      row.vector[l * 2] += 1.0;
      row.vector[l * 2 + 1] += 0.5;
      table.Add(std::move(row));
    }
  }
  return table;
}

FixtureFiles RenderFixtures() {
  const PlantedCorpus corpus = GeneratePlantedCorpus(FixtureSpec());
  FixtureFiles files;
  for (const Document &d : corpus.documents) {
    files.corpus += SerializeDocument(d);
    files.corpus += '\n';
  }
  for (const EventRecord &e : corpus.events) {
    files.events += SerializeEvent(e);
    files.events += '\n';
  }
  std::ostringstream out;
  WriteEmbeddings(out, SeparableEmbeddings());
  files.embeddings = out.str();
  return files;
}

}  // namespace evtgd::testing
