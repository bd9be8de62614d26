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

#include "evtgd/pipeline.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "evtgd/batch_builder.h"
#include "evtgd/cooccurrence.h"
#include "evtgd/error.h"
#include "evtgd/fewshot.h"
#include "evtgd/hashing.h"
#include "evtgd/ingestion.h"
#include "evtgd/pair_selection.h"
#include "evtgd/parallel.h"
#include "evtgd/statement_selection.h"
#include "json.hpp"

namespace evtgd {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::pair<const char *, Stage> kStages[] = {
    {"extract", Stage::kExtract}, {"stats", Stage::kStats},
    {"pair", Stage::kPair},       {"groups", Stage::kGroups},
    {"batches", Stage::kBatches}, {"eval", Stage::kEval},
    {"pipeline", Stage::kPipeline}};

// Records inputs, outputs and counts of one stage run. Paths are reduced to
// file names so manifests do not depend on where the run happened.
class RunManifest {
 public:
  RunManifest(Stage stage, const PipelineConfig &config) {
    json_["stage"] = StageName(stage);
    json_["config_hash"] = ConfigHash(config);
    json_["seeds"] = {{"pair", config.seeds.pair},
                      {"groups", config.seeds.groups},
                      {"corruption", config.seeds.corruption},
                      {"eval", config.seeds.eval}};
    json_["inputs"] = ordered_json::array();
    json_["outputs"] = ordered_json::array();
    json_["counts"] = ordered_json::object();
  }

  void Input(const std::string &path) { Add("inputs", path); }
  void Output(const std::string &path) { Add("outputs", path); }
  ordered_json &counts() { return json_["counts"]; }

  void Write(const std::string &output_dir) const {
    WriteFileAtomic(
        (fs::path(output_dir) / (json_["stage"].get<std::string>() +
                                 ".manifest.json"))
            .string(),
        json_.dump(2) + "\n");
  }

 private:
  void Add(const char *list, const std::string &path) {
    json_[list].push_back({{"file", fs::path(path).filename().string()},
                           {"sha256", Sha256File(path)}});
  }

  ordered_json json_;
};

std::string OutPath(const PipelineConfig &config, const char *name) {
  return (fs::path(config.paths.output_dir) / name).string();
}

void RequireInput(Stage stage, const std::string &path,
                  const std::string &what) {
  if (path.empty() || !fs::exists(path)) {
    throw Error(ErrorCode::kMissingInput,
                std::string("stage '") + StageName(stage) + "': missing " +
                    what + (path.empty() ? "" : " (" + path + ")"));
  }
}

std::vector<Document> LoadCorpus(Stage stage, const PipelineConfig &config,
                                 ParseCounters *counters) {
  RequireInput(stage, config.paths.corpus, "corpus (paths.corpus)");
  return ReadCorpusFile(config.paths.corpus, config.parse_options(), counters);
}

void Merge(StageOutcome &into, StageOutcome from) {
  for (auto &w : from.warnings) into.warnings.push_back(std::move(w));
  for (auto &m : from.messages) into.messages.push_back(std::move(m));
}

StageOutcome RunExtract(const PipelineConfig &config) {
  ParseCounters counters;
  std::vector<Document> docs = LoadCorpus(Stage::kExtract, config, &counters);
  ExtractionSummary summary = SummarizeExtraction(docs, config.workers);
  summary.skipped_records = counters.skipped;
  const std::string out = OutPath(config, artifacts::kExtraction);
  WriteFileAtomic(out, summary.ToJson() + "\n");

  RunManifest manifest(Stage::kExtract, config);
  manifest.Input(config.paths.corpus);
  manifest.Output(out);
  manifest.counts() = ordered_json::parse(summary.ToJson());
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  for (const std::string &reason : counters.skip_reasons) {
    outcome.warnings.push_back("skipped record: " + reason);
  }
  outcome.messages.push_back("extract: " + std::to_string(summary.statements) +
                             " candidate statements, " +
                             std::to_string(summary.distinct_pairs) +
                             " distinct pairs");
  return outcome;
}

StageOutcome RunStats(const PipelineConfig &config) {
  std::vector<Document> docs = LoadCorpus(Stage::kStats, config, nullptr);
  DailyStats daily = AccumulateDailyStats(docs, config.workers);
  const std::string out = OutPath(config, artifacts::kStats);
  WriteFileAtomic(out, daily.Serialize());

  RunManifest manifest(Stage::kStats, config);
  manifest.Input(config.paths.corpus);
  manifest.Output(out);
  manifest.counts()["days"] = daily.days().size();
  manifest.counts()["articles"] = daily.n_articles();
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  outcome.messages.push_back("stats: " + std::to_string(daily.n_articles()) +
                             " articles over " +
                             std::to_string(daily.days().size()) + " days");
  return outcome;
}

StageOutcome RunPair(const PipelineConfig &config) {
  const std::string stats_path = OutPath(config, artifacts::kStats);
  RequireInput(Stage::kPair, stats_path, "stats checkpoint (run 'stats')");
  std::ifstream stats_in(stats_path);
  DailyStats daily = DailyStats::Deserialize(stats_in);

  RunManifest manifest(Stage::kPair, config);
  manifest.Input(stats_path);
  PairSelection selection;
  switch (config.strategy) {
    case Strategy::kRandom: {
      PairStats all(DateWindow{});
      if (auto range = daily.FullRange()) all = daily.Window(*range);
      selection = SelectRandomPairs(all, config.filter,
                                    config.selection.random_budget,
                                    config.seeds.pair);
      break;
    }
    case Strategy::kDateWindow:
      selection = SelectDateWindowPairs(
          daily, config.windows.date_window_days, config.filter,
          config.selection.window_budget, config.seeds.pair, config.workers);
      break;
    case Strategy::kEventGuided: {
      RequireInput(Stage::kPair, config.paths.events,
                   "event file (paths.events)");
      ParseCounters counters;
      std::vector<EventRecord> events = ReadEventFile(
          config.paths.events, config.parse_options(), &counters);
      manifest.Input(config.paths.events);
      for (const std::string &reason : counters.skip_reasons) {
        selection.warnings.push_back("skipped event record: " + reason);
      }
      EventWindowConfig windows{config.windows.noun_days,
                                config.windows.ne_days};
      std::optional<std::size_t> cap;
      if (config.selection.event_cap > 0) cap = config.selection.event_cap;
      PairSelection picked = SelectEventGuidedPairs(
          events, [&](DateWindow w) { return daily.Window(w); }, config.filter,
          windows, cap, config.seeds.pair);
      for (auto &w : picked.warnings) selection.warnings.push_back(w);
      selection.pairs = std::move(picked.pairs);
      break;
    }
  }
  if (config.selection.dedup) {
    selection.pairs = DeduplicatePairs(selection.pairs);
  }
  if (selection.pairs.empty()) {
    selection.warnings.push_back("pair selection produced zero pairs");
  }

  std::ostringstream out;
  WriteSelectedPairs(out, selection.pairs);
  const std::string path = OutPath(config, artifacts::kPairs);
  WriteFileAtomic(path, out.str());
  manifest.Output(path);
  manifest.counts()["strategy"] = StrategyName(config.strategy);
  manifest.counts()["pairs"] = selection.pairs.size();
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  outcome.warnings = std::move(selection.warnings);
  outcome.messages.push_back("pair: " + std::to_string(selection.pairs.size()) +
                             " pairs selected (" +
                             StrategyName(config.strategy) + ")");
  return outcome;
}

std::string GroupSummaryJson(const GroupSummary &s) {
  ordered_json j;
  j["pairs_in"] = s.pairs_in;
  j["groups_out"] = s.groups_out;
  j["statements_out"] = s.statements_out;
  j["dropped_few_positives"] = s.dropped_few_positives;
  j["short_positives"] = s.short_positives;
  j["short_negatives"] = s.short_negatives;
  return j.dump(2);
}

StageOutcome RunGroups(const PipelineConfig &config) {
  const std::string pairs_path = OutPath(config, artifacts::kPairs);
  RequireInput(Stage::kGroups, pairs_path, "selected pairs (run 'pair')");
  std::vector<SelectedPair> selected = ReadSelectedPairs(pairs_path);
  StatementIndex index(LoadCorpus(Stage::kGroups, config, nullptr));
  GroupAssembly assembly = AssembleGroups(selected, index, config.groups,
                                          config.seeds.groups, config.workers);

  std::string groups_text;
  for (const TrainingGroup &g : assembly.groups) {
    groups_text += SerializeGroup(g);
    groups_text += '\n';
  }
  const std::string groups_path = OutPath(config, artifacts::kGroups);
  const std::string summary_path = OutPath(config, artifacts::kGroupSummary);
  WriteFileAtomic(groups_path, groups_text);
  WriteFileAtomic(summary_path, GroupSummaryJson(assembly.summary) + "\n");

  RunManifest manifest(Stage::kGroups, config);
  manifest.Input(config.paths.corpus);
  manifest.Input(pairs_path);
  manifest.Output(groups_path);
  manifest.Output(summary_path);
  manifest.counts() = ordered_json::parse(GroupSummaryJson(assembly.summary));
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  if (assembly.groups.empty()) {
    outcome.warnings.push_back("group assembly produced zero groups");
  }
  outcome.messages.push_back(
      "groups: " + std::to_string(assembly.summary.groups_out) + " groups, " +
      std::to_string(assembly.summary.statements_out) + " statements");
  return outcome;
}

StageOutcome RunBatches(const PipelineConfig &config) {
  const std::string groups_path = OutPath(config, artifacts::kGroups);
  RequireInput(Stage::kBatches, groups_path, "groups (run 'groups')");
  std::vector<TrainingGroup> groups = ReadGroups(groups_path);
  std::ostringstream out;
  BatchManifest batch_manifest =
      WriteBatches(groups, config.corruption_config(),
                   config.corruption.batch_size, out, config.workers);
  const std::string batches_path = OutPath(config, artifacts::kBatches);
  const std::string manifest_path = OutPath(config, artifacts::kBatchManifest);
  WriteFileAtomic(batches_path, out.str());
  WriteFileAtomic(manifest_path, batch_manifest.ToJson() + "\n");

  RunManifest manifest(Stage::kBatches, config);
  manifest.Input(groups_path);
  manifest.Output(batches_path);
  manifest.Output(manifest_path);
  manifest.counts()["batches"] = batch_manifest.batches;
  manifest.counts()["groups"] = batch_manifest.groups;
  manifest.counts()["statements"] = batch_manifest.statements;
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  outcome.messages.push_back(
      "batches: " + std::to_string(batch_manifest.batches) + " batches, " +
      std::to_string(batch_manifest.statements) + " statements");
  return outcome;
}

StageOutcome RunEval(const PipelineConfig &config) {
  RequireInput(Stage::kEval, config.paths.embeddings,
               "embedding file (paths.embeddings)");
  EmbeddingTable table = ReadEmbeddingFile(config.paths.embeddings);
  FewShotOptions options;
  options.ways = config.eval.n;
  options.shots = config.eval.k;
  options.num_queries = config.eval.queries;
  options.trials = config.eval.trials;
  options.seed = config.seeds.eval;
  options.similarity = config.eval.similarity;
  options.workers = config.workers;
  FewShotReport report = RunFewShot(table, options);
  const std::string out = OutPath(config, artifacts::kEvalReport);
  WriteFileAtomic(out, report.ToJson() + "\n");

  RunManifest manifest(Stage::kEval, config);
  manifest.Input(config.paths.embeddings);
  manifest.Output(out);
  manifest.counts()["queries_per_trial"] = report.queries_per_trial;
  manifest.counts()["mean_acc"] = report.mean_accuracy;
  manifest.Write(config.paths.output_dir);

  StageOutcome outcome;
  outcome.warnings = report.warnings;
  std::ostringstream msg;
  msg << "eval: " << report.ways << "-way " << report.shots
      << "-shot accuracy " << report.mean_accuracy << " over "
      << report.trials << " trials";
  outcome.messages.push_back(msg.str());
  return outcome;
}

StageOutcome RunPipeline(const PipelineConfig &config) {
  StageOutcome outcome;
  for (Stage stage : {Stage::kExtract, Stage::kStats, Stage::kPair,
                      Stage::kGroups, Stage::kBatches}) {
    Merge(outcome, RunStage(stage, config));
  }
  auto read_json = [&](const char *name) {
    std::ifstream in(OutPath(config, name));
    return ordered_json::parse(in);
  };
  ordered_json extraction = read_json(artifacts::kExtraction);
  ordered_json groups = read_json(artifacts::kGroupSummary);
  ordered_json batches = read_json(artifacts::kBatchManifest);

  RunManifest manifest(Stage::kPipeline, config);
  manifest.Input(config.paths.corpus);
  if (config.strategy == Strategy::kEventGuided) {
    manifest.Input(config.paths.events);
  }
  for (const char *name :
       {artifacts::kExtraction, artifacts::kStats, artifacts::kPairs,
        artifacts::kGroups, artifacts::kGroupSummary, artifacts::kBatches,
        artifacts::kBatchManifest}) {
    manifest.Output(OutPath(config, name));
  }
  ordered_json &counts = manifest.counts();
  counts["articles"] = extraction["articles"];
  counts["sentences"] = extraction["sentences"];
  counts["entity_pairs"] = extraction["distinct_pairs"];
  counts["statements"] = extraction["statements"];
  counts["selected_pairs"] = groups["pairs_in"];
  counts["groups"] = groups["groups_out"];
  counts["denoised_statements"] = groups["statements_out"];
  counts["batches"] = batches["batches"];
  manifest.Write(config.paths.output_dir);
  return outcome;
}

}  // namespace

std::optional<Stage> StageFromName(std::string_view name) {
  for (const auto &[n, stage] : kStages) {
    if (name == n) return stage;
  }
  return std::nullopt;
}

const char *StageName(Stage stage) {
  for (const auto &[n, s] : kStages) {
    if (s == stage) return n;
  }
  return "?";
}

std::string ExtractionSummary::ToJson() const {
  ordered_json j;
  j["articles"] = articles;
  j["sentences"] = sentences;
  j["mentions"] = mentions;
  j["statements"] = statements;
  j["distinct_pairs"] = distinct_pairs;
  j["skipped_records"] = skipped_records;
  return j.dump(2);
}

ExtractionSummary SummarizeExtraction(std::span<const Document> documents,
                                      int workers) {
  const int shards = std::max(1, workers);
  std::vector<ExtractionSummary> partial(shards);
  std::vector<std::unordered_set<EntityPair, EntityPairHash>> pairs(shards);
  ForEachShard(documents.size(), shards,
               [&](std::size_t s, std::size_t begin, std::size_t end) {
                 ExtractionSummary &sum = partial[s];
                 for (std::size_t d = begin; d < end; ++d) {
                   const Document &doc = documents[d];
                   ++sum.articles;
                   for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
                     const Sentence &sentence = doc.sentences[i];
                     ++sum.sentences;
                     sum.mentions += sentence.mentions.size();
                     for (const RelationStatement &st :
                          ExtractCandidateStatements(sentence, doc.doc_id,
                                                     doc.date, int(i))) {
                       ++sum.statements;
                       pairs[s].insert(st.pair());
                     }
                   }
                 }
               });
  ExtractionSummary total;
  std::unordered_set<EntityPair, EntityPairHash> all;
  for (int s = 0; s < shards; ++s) {
    total.articles += partial[s].articles;
    total.sentences += partial[s].sentences;
    total.mentions += partial[s].mentions;
    total.statements += partial[s].statements;
    if (all.empty()) {
      all = std::move(pairs[s]);
    } else {
      all.insert(pairs[s].begin(), pairs[s].end());
    }
  }
  total.distinct_pairs = all.size();
  return total;
}

void WriteFileAtomic(const std::string &path, std::string_view content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = fs::path(path + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " +
                                    ec.message());
  }
}

StageOutcome RunStage(Stage stage, const PipelineConfig &config) {
  switch (stage) {
    case Stage::kExtract: return RunExtract(config);
    case Stage::kStats: return RunStats(config);
    case Stage::kPair: return RunPair(config);
    case Stage::kGroups: return RunGroups(config);
    case Stage::kBatches: return RunBatches(config);
    case Stage::kEval: return RunEval(config);
    case Stage::kPipeline: return RunPipeline(config);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown stage");
}

}  // namespace evtgd
