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

#ifndef EVTGD_TESTS_SUPPORT_PLANTED_CORPUS_H_
#define EVTGD_TESTS_SUPPORT_PLANTED_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evtgd/core.h"
#include "evtgd/date.h"
#include "evtgd/ingestion.h"
#include "evtgd/statement_selection.h"

namespace evtgd::testing {

// Synthetic news corpus with known ground truth. Each event plants one entity
// pair expressing one relation in a burst of articles right after the event
// date; the same pair also shows up with other relations far away from the
// event window. Decoy pairs never named by any event are spread uniformly
// over the whole range, and background chatter between common entities fills
// the corpus up to the requested sentence count.
struct PlantedSpec {
  std::uint64_t seed = 7;
  Date start = Date::FromYmd(1996, 8, 1);
  int days = 150;
  int num_events = 10;
  int num_relations = 10;
  int min_event_sentences = 5;
  int max_event_sentences = 15;
  // Length of the burst after each event, matching the named-entity window.
  int event_window_days = 7;
  // Same-pair sentences with a different relation, outside the window.
  int noise_per_event = 6;
  // Minimum gap in days between the window and any noise sentence.
  int noise_gap_days = 10;
  // In-window sentences pairing one event entity with a background entity.
  int hard_per_event = 2;
  int num_decoys = 60;
  int min_decoy_articles = 6;
  int max_decoy_articles = 12;
  int background_entities = 40;
  std::size_t total_sentences = 6000;
};

struct PlantedCorpus {
  std::vector<Document> documents;  // sorted by date
  std::vector<EventRecord> events;  // sorted by date
  std::vector<EntityPair> planted_pairs;
  std::map<EntityPair, std::string> planted_relation;
  std::map<EntityPair, DateWindow> planted_window;
  std::vector<EntityPair> decoy_pairs;
  // "<doc_id>#<sentence index>" -> relation expressed by the sentence's
  // entity pair.
  std::map<std::string, std::string> sentence_relation;

  std::size_t sentence_count() const;
  const std::string &RelationOf(const RelationStatement &s) const;
};

PlantedCorpus GeneratePlantedCorpus(const PlantedSpec &spec);

// Fraction of positives that carry their group's majority relation, pooled
// over all groups.
struct PurityTally {
  std::size_t majority = 0;
  std::size_t positives = 0;
  double purity() const {
    return positives == 0 ? 0.0 : double(majority) / double(positives);
  }
};

PurityTally MeasurePurity(const PlantedCorpus &corpus,
                          const std::vector<TrainingGroup> &groups);

}  // namespace evtgd::testing

#endif  // EVTGD_TESTS_SUPPORT_PLANTED_CORPUS_H_
