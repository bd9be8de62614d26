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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "evtgd/core.h"
#include "evtgd/date.h"
#include "evtgd/error.h"
#include "evtgd/rng.h"

namespace evtgd {
namespace {

EntityMention Ne(int start, int end, std::string key) {
  return {start, end, MentionKind::kNamedEntity, std::move(key)};
}

Sentence MakeSentence(std::vector<std::string> tokens,
                      std::vector<EntityMention> mentions) {
  return {std::move(tokens), std::move(mentions)};
}

// Random sentence of `n` tokens with non-overlapping mentions drawn from a
// small key vocabulary (so repeated keys happen).
Sentence RandomSentence(Rng &rng, int vocab) {
  Sentence s;
  const int n = 1 + int(rng.Uniform(30));
  for (int i = 0; i < n; ++i) s.tokens.push_back("t" + std::to_string(i));
  int pos = 0;
  while (pos < n) {
    if (rng.Bernoulli(0.4)) {
      const int len = 1 + int(rng.Uniform(std::min(3, n - pos)));
      s.mentions.push_back(Ne(pos, pos + len,
                              "k" + std::to_string(rng.Uniform(vocab))));
      pos += len;
    } else {
      ++pos;
    }
  }
  return s;
}

std::size_t Choose2(std::size_t m) { return m * (m - 1) / 2; }

}  // namespace

TEST_CASE("date parsing is strict") {
  CHECK(Date::Parse("1996-08-20")->ToString() == "1996-08-20");
  CHECK_FALSE(Date::Parse("1996-08-32"));
  CHECK_FALSE(Date::Parse("1996-02-30"));
  CHECK_FALSE(Date::Parse("1996-8-20"));
  CHECK_FALSE(Date::Parse("1996-08-20x"));
  CHECK(Date::Parse("1996-02-29"));
  CHECK_FALSE(Date::Parse("1997-02-29"));
  const Date d = Date::FromYmd(1996, 12, 30);
  CHECK((d + 3).ToString() == "1997-01-02");
  CHECK((d + 3) - d == 3);
}

TEST_CASE("three mentions give three statements") {
  const Sentence s = MakeSentence({"A", "x", "B", "y", "C"},
                                  {Ne(0, 1, "a"), Ne(2, 3, "b"), Ne(4, 5, "c")});
  const auto out = ExtractCandidateStatements(s, "d1", Date(), 0);
  REQUIRE(out.size() == 3);
  CHECK(out[0].pair() == EntityPair::Canonical("a", "b"));
  CHECK(out[1].pair() == EntityPair::Canonical("a", "c"));
  CHECK(out[2].pair() == EntityPair::Canonical("b", "c"));
  CHECK(out[0].statement_id == "d1#0:0-1");
  CHECK(out[2].statement_id == "d1#0:1-2");
}

TEST_CASE("one mention gives no statements") {
  const Sentence s = MakeSentence({"A", "slept"}, {Ne(0, 1, "a")});
  CHECK(ExtractCandidateStatements(s, "d", Date(), 0).empty());
}

TEST_CASE("leftmost mention becomes span1") {
  const Sentence s = MakeSentence({"Zed", "x", "y", "z", "Al", "Bo"},
                                  {Ne(0, 1, "zed"), Ne(4, 6, "al bo")});
  const auto out = ExtractCandidateStatements(s, "d", Date(), 2);
  REQUIRE(out.size() == 1);
  CHECK(out[0].span1 == Span{0, 1});
  CHECK(out[0].span2 == Span{4, 6});
  CHECK(out[0].key1 == "zed");
  CHECK(out[0].pair().first() == "al bo");
  CHECK(out[0].pair().second() == "zed");
}

TEST_CASE("mentions sharing a key are not paired") {
  const Sentence s = MakeSentence({"A", "and", "A", "met", "B"},
                                  {Ne(0, 1, "a"), Ne(2, 3, "a"), Ne(4, 5, "b")});
  const auto out = ExtractCandidateStatements(s, "d", Date(), 0);
  CHECK(out.size() == 2);
  for (const auto &st : out) CHECK(st.key1 != st.key2);
}

TEST_CASE("candidate count property") {
  Rng rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const Sentence s = RandomSentence(rng, 1 + int(rng.Uniform(12)));
    REQUIRE_FALSE(ValidateSentence(s));
    std::map<std::string, std::size_t> per_key;
    for (const auto &m : s.mentions) ++per_key[m.key];
    std::size_t same_key = 0;
    for (const auto &[key, n] : per_key) same_key += Choose2(n);
    const auto out = ExtractCandidateStatements(s, "d", Date(), 0);
    CHECK(out.size() == Choose2(s.mentions.size()) - same_key);
    CHECK(out.size() == CandidateCount(s));
    if (per_key.size() == s.mentions.size()) {
      CHECK(out.size() == Choose2(s.mentions.size()));
    }
    // Ids are a pure function of the inputs.
    const auto again = ExtractCandidateStatements(s, "d", Date(), 0);
    CHECK(out == again);
    std::set<std::string> ids;
    for (const auto &st : out) ids.insert(st.statement_id);
    CHECK(ids.size() == out.size());
  }
}

TEST_CASE("canonical pair") {
  CHECK(EntityPair::Canonical("france", "italy").first() == "france");
  const EntityPair p = EntityPair::Canonical("italy", "france");
  CHECK(p.first() == "france");
  CHECK(p.second() == "italy");
  CHECK_THROWS_AS(EntityPair::Canonical("x", "x"), Error);
  try {
    EntityPair::Canonical("x", "x");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kDegeneratePair);
  }
  CHECK_THROWS_AS(EntityPair::Canonical("", "x"), Error);
}

TEST_CASE("canonical pair is symmetric and idempotent") {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    std::string a = "k" + std::to_string(rng.Uniform(50));
    std::string b = "k" + std::to_string(rng.Uniform(50));
    if (a == b) continue;
    const EntityPair ab = EntityPair::Canonical(a, b);
    CHECK(ab == EntityPair::Canonical(b, a));
    CHECK(ab == EntityPair::Canonical(ab.first(), ab.second()));
    CHECK(ab.first() < ab.second());
  }
}

TEST_CASE("insert markers") {
  RelationStatement st;
  st.statement_id = "s";
  st.tokens = {"Italy", "beat", "France"};
  st.span1 = {0, 1};
  st.span2 = {2, 3};
  const MarkedStatement m = InsertMarkers(st);
  CHECK(m.tokens == std::vector<std::string>{"[E1]", "Italy", "[/E1]", "beat",
                                             "[E2]", "France", "[/E2]"});
  CHECK(m.entity1 == Span{1, 2});
  CHECK(m.entity2 == Span{5, 6});

  st.tokens = {"a", "b"};
  st.span1 = {0, 1};
  st.span2 = {1, 2};
  CHECK(InsertMarkers(st).tokens ==
        std::vector<std::string>{"[E1]", "a", "[/E1]", "[E2]", "b", "[/E2]"});

  st.span2 = {0, 2};
  CHECK_THROWS_AS(InsertMarkers(st), Error);
}

TEST_CASE("markers add four tokens and strip back to the input") {
  Rng rng(17);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Sentence s = RandomSentence(rng, 20);
    for (const auto &st : ExtractCandidateStatements(s, "d", Date(), 0)) {
      const MarkedStatement m = InsertMarkers(st);
      CHECK(m.tokens.size() == st.tokens.size() + 4);
      std::vector<std::string> stripped;
      for (const auto &t : m.tokens) {
        if (!IsMarkerToken(t)) stripped.push_back(t);
      }
      CHECK(stripped == st.tokens);
      CHECK(m.tokens[m.entity1.start - 1] == "[E1]");
      CHECK(m.tokens[m.entity1.end] == "[/E1]");
      CHECK(m.tokens[m.entity2.start - 1] == "[E2]");
      CHECK(m.tokens[m.entity2.end] == "[/E2]");
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("sentence validation") {
  CHECK_FALSE(ValidateSentence(MakeSentence({"a", "b"}, {Ne(0, 1, "a")})));
  CHECK(ValidateSentence(MakeSentence({"a", "b"}, {Ne(1, 1, "a")})));
  CHECK(ValidateSentence(MakeSentence({"a", "b"}, {Ne(1, 3, "a")})));
  CHECK(ValidateSentence(MakeSentence({"a", "b"}, {Ne(0, 2, "a"), Ne(1, 2, "b")})));
  CHECK(ValidateSentence(MakeSentence({"a", "b"}, {Ne(1, 2, "b"), Ne(0, 1, "a")})));
  CHECK(ValidateSentence(MakeSentence({"a"}, {Ne(0, 1, "")})));
  CHECK(ValidateSentence(MakeSentence({"a"}, {Ne(0, 1, "a\tb")})));
}

TEST_CASE("entity key normalization") {
  CHECK(NormalizeEntityKey("  President   Hun\tSen ") == "president hun sen");
  CHECK(NormalizeEntityKey("IRAN") == "iran");
}

TEST_CASE("seed mixing and bounded draws") {
  CHECK(MixSeed(1, 2) == MixSeed(1, 2));
  CHECK(MixSeed(1, 2) != MixSeed(2, 1));
  Rng rng(9);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.Uniform(7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (std::size_t count : {0, 3, 50, 100}) {
    const auto s = SampleWithoutReplacement(100, count, rng);
    CHECK(s.size() == count);
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == count);
    for (auto x : s) CHECK(x < 100);
  }
}

}  // namespace evtgd
