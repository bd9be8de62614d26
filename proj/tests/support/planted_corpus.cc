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

#include "planted_corpus.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "evtgd/rng.h"

namespace evtgd::testing {

namespace {

const char *const kSyllables[] = {"ka", "lo", "mir", "ven", "to", "sar", "bel",
                                  "dri", "nu", "pha", "gor", "ze", "qui", "rah",
                                  "tem", "os", "li", "van", "dor", "esh"};
const char *const kVerbs[] = {"attacked", "signed", "beat",    "visited",
                              "sued",     "acquired", "hosted", "condemned",
                              "joined",   "struck",  "courted", "outvoted"};
const char *const kFiller[] = {"on", "the", "after", "talks", "late",
                               "in", "a",   "move",  "week",  "said",
                               "by", "over", "while", "amid", "officials"};
const char *const kNouns[] = {"earthquake", "coup", "summit", "strike",
                              "election"};

struct Article {
  Date date;
  std::vector<Sentence> sentences;
  std::vector<std::string> relations;  // parallel to sentences; "" if none
};

class Builder {
 public:
  explicit Builder(const PlantedSpec &spec) : spec_(spec), rng_(spec.seed) {}

  std::string NewEntity() {
    while (true) {
      std::string name;
      const int parts = 2 + int(rng_.Uniform(2));
      for (int i = 0; i < parts; ++i) {
        name += kSyllables[rng_.Uniform(std::size(kSyllables))];
      }
      name[0] = char(name[0] - 'a' + 'A');
      if (used_.insert(name).second) return name;
    }
  }

  std::string Filler() { return kFiller[rng_.Uniform(std::size(kFiller))]; }

  // "<left> <verb> <right> <filler...> ." with both names as NE mentions.
  Sentence PairSentence(const std::string &left, const std::string &right,
                        const std::string &verb) {
    Sentence s;
    s.tokens.push_back(left);
    s.tokens.push_back(verb);
    s.tokens.push_back(right);
    const int fill = 1 + int(rng_.Uniform(4));
    for (int i = 0; i < fill; ++i) s.tokens.push_back(Filler());
    s.tokens.push_back(".");
    s.mentions.push_back({0, 1, MentionKind::kNamedEntity,
                          NormalizeEntityKey(left)});
    s.mentions.push_back({2, 3, MentionKind::kNamedEntity,
                          NormalizeEntityKey(right)});
    return s;
  }

  Sentence SingleSentence(const std::string &name) {
    Sentence s;
    s.tokens.push_back(Filler());
    s.tokens.push_back(name);
    s.tokens.push_back("reported");
    const int fill = 1 + int(rng_.Uniform(3));
    for (int i = 0; i < fill; ++i) s.tokens.push_back(Filler());
    s.tokens.push_back(".");
    s.mentions.push_back({1, 2, MentionKind::kNamedEntity,
                          NormalizeEntityKey(name)});
    return s;
  }

  std::string Relation(int r) const { return "rel" + std::to_string(r); }
  std::string Verb(int r) const { return kVerbs[r % std::size(kVerbs)]; }

  Rng &rng() { return rng_; }

 private:
  const PlantedSpec &spec_;
  Rng rng_;
  std::set<std::string> used_;
};

}  // namespace

std::size_t PlantedCorpus::sentence_count() const {
  std::size_t n = 0;
  for (const Document &d : documents) n += d.sentences.size();
  return n;
}

const std::string &PlantedCorpus::RelationOf(const RelationStatement &s) const {
  static const std::string kNone;
  auto it = sentence_relation.find(s.doc_id + "#" +
                                   std::to_string(s.sentence_index));
  return it == sentence_relation.end() ? kNone : it->second;
}

PlantedCorpus GeneratePlantedCorpus(const PlantedSpec &spec) {
  Builder b(spec);
  Rng &rng = b.rng();
  PlantedCorpus out;
  std::vector<Article> articles;
  const Date end = spec.start + (spec.days - 1);

  std::vector<std::string> background;
  for (int i = 0; i < spec.background_entities; ++i) {
    background.push_back(b.NewEntity());
  }
  auto random_background = [&] {
    return background[rng.Uniform(background.size())];
  };
  auto add_article = [&](Date date, Sentence s, std::string relation) {
    Article a{date, {}, {}};
    a.sentences.push_back(std::move(s));
    a.relations.push_back(std::move(relation));
    a.sentences.push_back(b.SingleSentence(random_background()));
    a.relations.push_back("");
    articles.push_back(std::move(a));
  };

  // Events, evenly spaced after a lead-in that leaves room for noise.
  const int lead = spec.noise_gap_days + 2;
  const int span = spec.days - lead - spec.event_window_days - 1;
  for (int k = 0; k < spec.num_events; ++k) {
    const Date date = spec.start + lead + span * k / std::max(1, spec.num_events);
    const std::string a = b.NewEntity();
    const std::string c = b.NewEntity();
    const std::string place = b.NewEntity();
    const int rel = k % spec.num_relations;
    const EntityPair pair =
        EntityPair::Canonical(NormalizeEntityKey(a), NormalizeEntityKey(c));
    const DateWindow window{date, spec.event_window_days};
    out.planted_pairs.push_back(pair);
    out.planted_relation.emplace(pair, b.Relation(rel));
    out.planted_window.emplace(pair, window);

    const int burst = spec.min_event_sentences +
                      int(rng.Uniform(std::uint64_t(spec.max_event_sentences -
                                                    spec.min_event_sentences + 1)));
    for (int i = 0; i < burst; ++i) {
      const Date d = date + int(rng.Uniform(spec.event_window_days + 1));
      const bool flip = rng.Bernoulli(0.3);
      add_article(d, b.PairSentence(flip ? c : a, flip ? a : c, b.Verb(rel)),
                  b.Relation(rel));
    }
    for (int i = 0; i < spec.hard_per_event; ++i) {
      const Date d = date + int(rng.Uniform(spec.event_window_days + 1));
      add_article(d, b.PairSentence(i % 2 ? c : a, random_background(),
                                    "met"),
                  "");
    }
    // Noise: same pair, another relation, well away from the window.
    std::vector<Date> noise_days;
    for (Date d = spec.start; d <= end; d = d + 1) {
      if (d < date - spec.noise_gap_days ||
          d > window.end() + spec.noise_gap_days) {
        noise_days.push_back(d);
      }
    }
    for (int i = 0; i < spec.noise_per_event && !noise_days.empty(); ++i) {
      const int other = (rel + 1 + int(rng.Uniform(spec.num_relations - 1))) %
                        spec.num_relations;
      const Date d = noise_days[rng.Uniform(noise_days.size())];
      add_article(d, b.PairSentence(a, c, b.Verb(other)), b.Relation(other));
    }

    EventRecord event;
    event.event_id = "evt-" + std::to_string(k);
    event.date = date;
    event.tokens = {a, b.Verb(rel), c, "near", place};
    event.mentions = {
        {0, 1, MentionKind::kNamedEntity, NormalizeEntityKey(a)},
        {2, 3, MentionKind::kNamedEntity, NormalizeEntityKey(c)},
        {4, 5, MentionKind::kNamedEntity, NormalizeEntityKey(place)}};
    if (k % 2 == 1) {
      event.tokens.push_back("after");
      event.tokens.push_back(kNouns[k % std::size(kNouns)]);
      event.mentions.push_back(
          {6, 7, MentionKind::kNoun, kNouns[k % std::size(kNouns)]});
    }
    event.pairs = EventPairsFromMentions(event.mentions);
    out.events.push_back(std::move(event));
  }

  // Decoys: spread uniformly, each sentence with a random relation.
  for (int j = 0; j < spec.num_decoys; ++j) {
    const std::string a = b.NewEntity();
    const std::string c = b.NewEntity();
    out.decoy_pairs.push_back(
        EntityPair::Canonical(NormalizeEntityKey(a), NormalizeEntityKey(c)));
    const int n = spec.min_decoy_articles +
                  int(rng.Uniform(std::uint64_t(spec.max_decoy_articles -
                                                spec.min_decoy_articles + 1)));
    for (int i = 0; i < n; ++i) {
      const int rel = int(rng.Uniform(spec.num_relations));
      const Date d = spec.start + int(rng.Uniform(spec.days));
      add_article(d, b.PairSentence(a, c, b.Verb(rel)), b.Relation(rel));
    }
  }

  // Background chatter up to the sentence budget.
  std::size_t sentences = 0;
  for (const Article &a : articles) sentences += a.sentences.size();
  for (int day = 0; sentences < spec.total_sentences; day = (day + 1) % spec.days) {
    Article a{spec.start + day, {}, {}};
    std::string x = random_background();
    std::string y = random_background();
    while (y == x) y = random_background();
    const int rel = int(rng.Uniform(spec.num_relations));
    a.sentences.push_back(b.PairSentence(x, y, b.Verb(rel)));
    a.relations.push_back(b.Relation(rel));
    if (sentences + 2 <= spec.total_sentences) {
      a.sentences.push_back(b.SingleSentence(random_background()));
      a.relations.push_back("");
    }
    sentences += a.sentences.size();
    articles.push_back(std::move(a));
  }

  std::stable_sort(articles.begin(), articles.end(),
                   [](const Article &x, const Article &y) {
                     return x.date < y.date;
                   });
  for (std::size_t i = 0; i < articles.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "doc-%06zu", i);
    Document doc{id, articles[i].date, "en", std::move(articles[i].sentences)};
    for (std::size_t s = 0; s < articles[i].relations.size(); ++s) {
      if (!articles[i].relations[s].empty()) {
        out.sentence_relation[doc.doc_id + "#" + std::to_string(s)] =
            articles[i].relations[s];
      }
    }
    out.documents.push_back(std::move(doc));
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const EventRecord &x, const EventRecord &y) {
                     return x.date < y.date;
                   });
  return out;
}

PurityTally MeasurePurity(const PlantedCorpus &corpus,
                          const std::vector<TrainingGroup> &groups) {
  PurityTally tally;
  for (const TrainingGroup &g : groups) {
    std::map<std::string, std::size_t> votes;
    for (const RelationStatement &s : g.positives) ++votes[corpus.RelationOf(s)];
    std::size_t best = 0;
    for (const auto &[rel, n] : votes) best = std::max(best, n);
    tally.majority += best;
    tally.positives += g.positives.size();
  }
  return tally;
}

}  // namespace evtgd::testing
