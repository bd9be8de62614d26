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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "evtgd/config.h"
#include "evtgd/error.h"
#include "evtgd/hashing.h"
#include "evtgd/pipeline.h"
#include "fixtures.h"
#include "json.hpp"

namespace evtgd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kFixtures = EVTGD_FIXTURE_DIR;

std::string ConfigErrorOf(std::string_view text,
                          std::vector<std::string> overrides = {}) {
  try {
    ParseConfig(text, overrides);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kConfig);
    return e.what();
  }
  FAIL("expected a config error");
  return "";
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path FreshDir(const std::string &name) {
  const fs::path dir = fs::temp_directory_path() / ("evtgd_config_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig FixtureConfig(const fs::path &out) {
  PipelineConfig c;
  c.paths.corpus = kFixtures + "/corpus.jsonl";
  c.paths.events = kFixtures + "/events.jsonl";
  c.paths.embeddings = kFixtures + "/embeddings.jsonl";
  c.paths.output_dir = out.string();
  return c;
}

}  // namespace

TEST_CASE("defaults") {
  const PipelineConfig c = ParseConfig("");
  CHECK(c.strategy == Strategy::kEventGuided);
  CHECK(c.windows.noun_days == 4);
  CHECK(c.windows.ne_days == 7);
  CHECK(c.filter.min_article_count == 3);
  CHECK(c.filter.min_ppmi == 1.0);
  CHECK(c.groups.n_pos == 6);
  CHECK(c.groups.n_easy + c.groups.n_hard == 6);
  CHECK(c.corruption.alpha == 0.7);
  CHECK(c.corruption.beta == 0.15);
  CHECK(c.corruption.batch_size == 32);
  CHECK(c.eval.n == 5);
  CHECK(c.eval.k == 1);
  CHECK(c.eval.trials == 10);
  CHECK(ConfigToJson(ParseConfig(ConfigToJson(c))) == ConfigToJson(c));
}

TEST_CASE("file values and overrides") {
  const std::vector<std::string> overrides = {"filter.min_count=10",
                                              "strategy=random",
                                              "filter.min_ppmi=2"};
  const PipelineConfig c = ParseConfig(
      R"({"windows": {"noun_days": 3}, "eval": {"similarity": "inner_product"}})",
      overrides);
  CHECK(c.windows.noun_days == 3);
  CHECK(c.filter.min_article_count == 10);
  CHECK(c.filter.min_ppmi == 2.0);
  CHECK(c.strategy == Strategy::kRandom);
  CHECK(c.eval.similarity == Similarity::kInnerProduct);
  CHECK(ConfigHash(c) != ConfigHash(PipelineConfig{}));
  CHECK(ConfigHash(c) == ConfigHash(ParseConfig(ConfigToJson(c))));
}

TEST_CASE("config errors name the field") {
  CHECK(ConfigErrorOf(R"({"windows": {"nuon_days": 3}})").find("windows.nuon_days") !=
        std::string::npos);
  CHECK(ConfigErrorOf(R"({"filter": {"min_count": "many"}})").find("filter.min_count") !=
        std::string::npos);
  CHECK(ConfigErrorOf("", {"windows.ne_days=9"}).find("windows.ne_days") !=
        std::string::npos);
  CHECK(ConfigErrorOf("", {"strategy=burst"}).find("strategy") != std::string::npos);
  CHECK(ConfigErrorOf("", {"corruption.alpha=1.5"}).find("corruption.alpha") !=
        std::string::npos);
  CHECK(ConfigErrorOf("", {"nope"}).size() > 0);
  CHECK(ConfigErrorOf("", {"windows=3"}).find("windows") != std::string::npos);
  CHECK(ConfigErrorOf("{not json").size() > 0);
  CHECK(ConfigErrorOf("", {"parse.date_min=1996-13-01"}).find("parse.date_min") !=
        std::string::npos);
}

TEST_CASE("committed fixtures are current") {
  const auto files = testing::RenderFixtures();
  CHECK(Slurp(kFixtures + "/corpus.jsonl") == files.corpus);
  CHECK(Slurp(kFixtures + "/events.jsonl") == files.events);
  CHECK(Slurp(kFixtures + "/embeddings.jsonl") == files.embeddings);
}

TEST_CASE("pipeline on the fixture corpus") {
  const fs::path out = FreshDir("pipeline");
  const PipelineConfig c = FixtureConfig(out);
  RunStage(Stage::kPipeline, c);
  const json manifest = json::parse(Slurp(out / "pipeline.manifest.json"));
  CHECK(manifest["stage"] == "pipeline");
  CHECK(manifest["counts"]["groups"].get<int>() > 0);
  CHECK(manifest["counts"]["sentences"] == 500);
  for (const auto &o : manifest["outputs"]) {
    CHECK(o["sha256"] == Sha256File((out / o["file"].get<std::string>()).string()));
  }

  // Accounting: statements = sum over sentences of C(m, 2).
  std::size_t expected = 0;
  std::ifstream corpus(c.paths.corpus);
  std::string line;
  while (std::getline(corpus, line)) {
    const json record = json::parse(line);
    for (const auto &s : record["sentences"]) {
      const std::size_t m = s["mentions"].size();
      expected += m * (m - 1) / 2;
    }
  }
  CHECK(manifest["counts"]["statements"] == expected);
}

TEST_CASE("stages run one by one match the chained run") {
  const fs::path chained = FreshDir("chained");
  const fs::path staged = FreshDir("staged");
  RunStage(Stage::kPipeline, FixtureConfig(chained));
  PipelineConfig c = FixtureConfig(staged);
  for (Stage s : {Stage::kExtract, Stage::kStats, Stage::kPair, Stage::kGroups,
                  Stage::kBatches}) {
    RunStage(s, c);
  }
  for (const char *name : {artifacts::kExtraction, artifacts::kStats,
                           artifacts::kPairs, artifacts::kGroups,
                           artifacts::kGroupSummary, artifacts::kBatches,
                           artifacts::kBatchManifest}) {
    CHECK_MESSAGE(Slurp(chained / name) == Slurp(staged / name), name);
  }
  // More workers, same artifacts.
  const fs::path wide = FreshDir("wide");
  c = FixtureConfig(wide);
  c.workers = 4;
  RunStage(Stage::kPipeline, c);
  for (const char *name : {artifacts::kStats, artifacts::kPairs,
                           artifacts::kGroups, artifacts::kBatches}) {
    CHECK_MESSAGE(Slurp(chained / name) == Slurp(wide / name), name);
  }
}

TEST_CASE("every strategy runs on the fixture") {
  for (const char *strategy : {"random", "date_window", "event_guided"}) {
    const fs::path out = FreshDir(strategy);
    const std::vector<std::string> overrides = {std::string("strategy=") + strategy};
    PipelineConfig c = ParseConfig("", overrides);
    const PipelineConfig paths = FixtureConfig(out);
    c.paths = paths.paths;
    RunStage(Stage::kPipeline, c);
    const json manifest = json::parse(Slurp(out / "pipeline.manifest.json"));
    CHECK_MESSAGE(manifest["counts"]["selected_pairs"].get<int>() > 0, strategy);
  }
}

TEST_CASE("missing inputs") {
  const fs::path out = FreshDir("missing");
  PipelineConfig c = FixtureConfig(out);
  for (Stage s : {Stage::kPair, Stage::kGroups, Stage::kBatches}) {
    try {
      RunStage(s, c);
      FAIL("expected missing input");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kMissingInput);
      CHECK(std::string(e.what()).find(StageName(s)) != std::string::npos);
    }
  }
  c.paths.corpus = (out / "absent.jsonl").string();
  CHECK_THROWS_AS(RunStage(Stage::kStats, c), Error);
}

TEST_CASE("vacuous filter selects nothing and warns") {
  const fs::path out = FreshDir("vacuous");
  PipelineConfig c = FixtureConfig(out);
  c.filter.min_article_count = 1000000000;
  RunStage(Stage::kStats, c);
  const StageOutcome outcome = RunStage(Stage::kPair, c);
  CHECK(Slurp(out / artifacts::kPairs).empty());
  CHECK_FALSE(outcome.warnings.empty());
}

TEST_CASE("eval on the separable fixture") {
  const fs::path out = FreshDir("eval");
  const StageOutcome outcome = RunStage(Stage::kEval, FixtureConfig(out));
  const json report = json::parse(Slurp(out / artifacts::kEvalReport));
  CHECK(report["mean_acc"] == 1.0);
  CHECK(report["n"] == 5);
  REQUIRE(outcome.messages.size() == 1);
  CHECK(outcome.messages[0].find("accuracy 1") != std::string::npos);
}

}  // namespace evtgd
