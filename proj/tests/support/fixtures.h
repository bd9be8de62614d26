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

#ifndef EVTGD_TESTS_SUPPORT_FIXTURES_H_
#define EVTGD_TESTS_SUPPORT_FIXTURES_H_

#include <string>

#include "evtgd/fewshot.h"
#include "planted_corpus.h"

namespace evtgd::testing {

// Small planted corpus (500 sentences) shipped under tests/fixtures.
PlantedSpec FixtureSpec();

// Six labels of eight vectors each, clustered tightly around orthogonal
// centers.
EmbeddingTable SeparableEmbeddings();

// File name -> contents for every committed fixture file.
struct FixtureFiles {
  std::string corpus;
  std::string events;
  std::string embeddings;
};

FixtureFiles RenderFixtures();

}  // namespace evtgd::testing

#endif  // EVTGD_TESTS_SUPPORT_FIXTURES_H_
