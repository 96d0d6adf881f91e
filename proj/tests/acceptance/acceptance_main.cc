// Copyright 2026 The risklens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero when
// any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli/config.h"
#include "cli/pipeline.h"
#include "risklens/augment.h"
#include "risklens/classifier.h"
#include "risklens/eval.h"
#include "risklens/features.h"
#include "risklens/fewshot.h"
#include "risklens/mock_server.h"
#include "risklens/rng.h"
#include "risklens/selftrain.h"
#include "risklens/synthetic.h"
#include "support/oracles.h"
#include "support/test_support.h"

namespace risklens {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and limits.
constexpr double kMetricTolerance = 1e-12;
constexpr double kGradientTolerance = 1e-4;
constexpr int kGradientInstances = 24;
constexpr double kMinSelfTrainLiftPoints = 2.0;
constexpr double kMinRecallGainPoints = 5.0;
constexpr double kThreshold = 0.33;
constexpr int kSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_seconds;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

double WeightedF1(const ProbabilisticModel& model, const Corpus& test, double* attempt_recall) {
  const auto dists = model.PredictProba(Texts(test));
  std::vector<RiskLabel> ref, pred;
  for (size_t i = 0; i < test.size(); ++i) {
    ref.push_back(*test[i].label);
    pred.push_back(dists[i].Argmax());
  }
  const MetricsReport r = ComputeMetrics(ComputeConfusionMatrix(ref, pred));
  if (attempt_recall != nullptr) *attempt_recall = r.classes[Index(RiskLabel::kAttempt)].recall;
  return r.weighted_f1;
}

std::shared_ptr<TfIdfFeaturizer> FitFeatures(const Corpus& a, const Corpus& b) {
  std::vector<std::string> texts = Texts(a);
  for (const Post& p : b) texts.push_back(p.text);
  return std::make_shared<TfIdfFeaturizer>(FitTfIdf(texts, {}));
}

Outcome PlanArithmetic() {
  ClassCounts counts;
  counts.counts = {129, 190, 140, 41};
  counts.total = 500;
  const AugmentationPlan plan = PlanAugmentation(counts, 2.0);
  const std::array<int64_t, 4> want_target = {190, 190, 190, 82};
  const std::array<int64_t, 4> want_generate = {61, 0, 50, 41};
  bool ok = plan.total_target() == 652 && plan.total_to_generate() == 152;
  for (size_t c = 0; c < 4; ++c) {
    ok = ok && plan.classes[c].target == want_target[c] &&
         plan.classes[c].to_generate == want_generate[c];
  }
  return {ok, fmt::format("targets {}/{}/{}/{} total {}", plan.classes[0].target,
                          plan.classes[1].target, plan.classes[2].target, plan.classes[3].target,
                          plan.total_target())};
}

Outcome FinalSet() {
  const BenchmarkSplits splits =
      MakeBenchmark(SyntheticSpec{}, {129, 190, 140, 41}, {375, 375, 375, 375}, {1, 1, 1, 1}, 1);
  NativeClassifierFactory factory(FitFeatures(splits.labeled, splits.unlabeled));
  SelfTrainConfig config;
  config.mode = SelfTrainMode::kRefresh;
  config.final_full_assign = true;
  config.seed = 1;
  const SelfTrainResult result = RunSelfTraining(splits.labeled, splits.unlabeled, factory, config);
  const auto& last = result.report.records.back();
  return {result.report.final_training_set_size == 2000 && last.training_set_size == 2000,
          fmt::format("final_training_set_size {} after {} fits",
                      result.report.final_training_set_size, result.report.records.size())};
}

Outcome ThresholdBoundary() {
  const std::vector<ProbDistribution> at = {testing::Dist(0.33, 0.33, 0.33, 0.01)};
  const std::vector<ProbDistribution> above = {testing::Dist(0.33 + 1e-9, 0.33, 0.33, 0.01 - 1e-9)};
  const bool rejected = SelectConfident(at, kThreshold).empty();
  const bool accepted = SelectConfident(above, kThreshold).size() == 1;

  Corpus pool;
  pool.Add(testing::Unlabeled("at", "a"));
  pool.Add(testing::Unlabeled("above", "b"));
  const std::vector<ProbDistribution> both = {at[0], above[0]};
  const PseudoLabelResult r = PseudoLabelPool(both, pool, kThreshold);
  const bool pooled = r.pseudo.size() == 1 && r.pseudo[0].id == "above" &&
                      r.rejected_ids == std::vector<std::string>{"at"};
  return {rejected && accepted && pooled,
          fmt::format("0.33 {}, 0.33+1e-9 {}", rejected ? "rejected" : "accepted",
                      accepted ? "accepted" : "rejected")};
}

Outcome MetricOracle() {
  Rng rng(20240);
  double worst = 0.0;
  bool matrices = true;
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.UniformIndex(50);
    std::vector<RiskLabel> ref, pred;
    for (size_t i = 0; i < n; ++i) {
      ref.push_back(LabelAt(rng.UniformIndex(kNumLabels)));
      pred.push_back(rng.Bernoulli(0.4) ? ref.back() : LabelAt(rng.UniformIndex(kNumLabels)));
    }
    const MetricsReport r = ComputeMetrics(ComputeConfusionMatrix(ref, pred));
    const testing::ScoreOracle o = testing::BruteForceScores(ref, pred);
    matrices = matrices && r.matrix.cells == o.cells;
    worst = std::max({worst, std::abs(r.weighted_f1 - o.weighted_f1),
                      std::abs(r.macro_f1 - o.macro_f1), std::abs(r.accuracy - o.accuracy)});
  }
  return {matrices && worst <= kMetricTolerance,
          fmt::format("200 pairs, max abs diff {:.3g}, matrices {}", worst,
                      matrices ? "equal" : "differ")};
}

Outcome GradientChecks() {
  Rng rng(31337);
  double worst = 0.0;
  for (LossKind loss : {LossKind::kCrossEntropy, LossKind::kHingeOvr}) {
    for (int i = 0; i < kGradientInstances / 2; ++i) {
      worst = std::max(worst, testing::WorstGradientError(rng, loss));
    }
  }
  return {worst <= kGradientTolerance,
          fmt::format("{} instances, worst relative error {:.3g}", kGradientInstances, worst)};
}

Outcome SelfTrainingLift() {
  double total = 0.0;
  std::string per_seed;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SyntheticSpec spec;
    spec.marker_probability = 0.7;
    const BenchmarkSplits b =
        MakeBenchmark(spec, {30, 30, 30, 30}, {200, 200, 200, 200}, {50, 50, 50, 50}, seed);
    NativeClassifierFactory factory(FitFeatures(b.labeled, b.unlabeled));
    SelfTrainConfig st;
    st.mode = SelfTrainMode::kRefresh;
    st.threshold = kThreshold;
    st.iterations = 2;
    st.seed = seed;
    SelfTrainConfig supervised = st;
    supervised.iterations = 0;
    supervised.final_full_assign = false;
    const double base =
        WeightedF1(*RunSelfTraining(b.labeled, b.unlabeled, factory, supervised).model, b.test,
                   nullptr);
    const double self =
        WeightedF1(*RunSelfTraining(b.labeled, b.unlabeled, factory, st).model, b.test, nullptr);
    total += self - base;
    per_seed += fmt::format(" {:+.1f}", 100.0 * (self - base));
  }
  const double mean = 100.0 * total / kSeeds;
  return {mean >= kMinSelfTrainLiftPoints,
          fmt::format("mean lift {:.2f} pts (seeds:{})", mean, per_seed)};
}

Outcome ImbalanceMitigation() {
  double total = 0.0;
  std::string per_seed;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const BenchmarkSplits b =
        MakeBenchmark(SyntheticSpec{}, {129, 190, 140, 41}, {0, 0, 0, 0}, {50, 50, 50, 50},
                      seed + 100);
    NativeClassifierFactory factory(FitFeatures(b.labeled, Corpus{}));
    ClassifierConfig config;
    config.seed = seed;
    const auto plain = factory.Fit(ToLabeledTexts(b.labeled), config);
    const AugmentationPlan plan = PlanAugmentation(CountClasses(b.labeled));
    const Corpus augmented = ApplyPlan(b.labeled, plan, NativeEditGenerator(), seed);
    const auto balanced = factory.Fit(ToLabeledTexts(augmented), config);
    double before = 0.0, after = 0.0;
    WeightedF1(*plain, b.test, &before);
    WeightedF1(*balanced, b.test, &after);
    total += after - before;
    per_seed += fmt::format(" {:+.1f}", 100.0 * (after - before));
  }
  const double mean = 100.0 * total / kSeeds;
  return {mean >= kMinRecallGainPoints,
          fmt::format("mean attempt recall gain {:.2f} pts (seeds:{})", mean, per_seed)};
}

Outcome AccumulateMonotonicity() {
  int violations = 0;
  int64_t fits = 0;
  for (uint64_t trial = 0; trial < 50; ++trial) {
    Rng rng(DeriveSeed(trial, "acceptance.accumulate"));
    SyntheticSpec spec;
    spec.marker_probability = 0.3 + 0.6 * rng.Uniform01();
    std::array<int64_t, kNumLabels> labeled{}, unlabeled{};
    for (size_t c = 0; c < kNumLabels; ++c) {
      labeled[c] = rng.UniformInt(1, 8);
      unlabeled[c] = rng.UniformInt(0, 25);
    }
    const BenchmarkSplits b = MakeBenchmark(spec, labeled, unlabeled, {1, 1, 1, 1}, trial);
    NativeClassifierFactory factory(FitFeatures(b.labeled, b.unlabeled));
    SelfTrainConfig config;
    config.mode = SelfTrainMode::kAccumulate;
    config.iterations = rng.UniformInt(1, 4);
    config.threshold = 0.26 + 0.6 * rng.Uniform01();
    config.final_full_assign = rng.Bernoulli(0.5);
    config.classifier.epochs = 10;
    config.seed = trial;
    const SelfTrainResult result = RunSelfTraining(b.labeled, b.unlabeled, factory, config);
    std::set<std::string> previous;
    for (const IterationRecord& record : result.report.records) {
      const std::set<std::string> ids(record.accepted_ids.begin(), record.accepted_ids.end());
      if (!std::includes(ids.begin(), ids.end(), previous.begin(), previous.end())) ++violations;
      previous = ids;
      ++fits;
    }
  }
  return {violations == 0, fmt::format("50 corpora, {} fits, {} shrinking steps", fits, violations)};
}

void WriteBenchmark(const fs::path& dir, const std::array<int64_t, 4>& labeled,
                    const std::array<int64_t, 4>& unlabeled, uint64_t seed) {
  const BenchmarkSplits b =
      MakeBenchmark(SyntheticSpec{}, labeled, unlabeled, {10, 10, 10, 10}, seed);
  SaveCorpus(Concat(b.labeled, b.unlabeled), dir / "train.jsonl", CorpusFormat::kJsonl);
  SaveCorpus(b.test, dir / "test.jsonl", CorpusFormat::kJsonl);
}

Outcome PipelineDeterminism() {
  testing::TempDir dir;
  WriteBenchmark(dir.path(), {24, 30, 26, 10}, {40, 40, 40, 40}, 8);
  const std::vector<std::string> overrides = {
      "seed=5",
      "paths.train=" + nlohmann::json((dir / "train.jsonl").string()).dump(),
      "paths.test=" + nlohmann::json((dir / "test.jsonl").string()).dump(),
      "paths.output_dir=" + nlohmann::json((dir / "out").string()).dump(),
      "baseline.enabled=true"};
  std::vector<std::string> runs[2];
  const std::vector<std::string> files = {"report.json", "model.json", "baseline_model.json",
                                          "manifest.json"};
  for (auto& run : runs) {
    cli::RunPipeline(cli::LoadRunConfig(std::nullopt, overrides));
    for (const std::string& f : files) run.push_back(testing::ReadFile(dir / "out" / f));
  }
  bool same = true;
  std::string differing;
  for (size_t i = 0; i < files.size(); ++i) {
    if (runs[0][i] != runs[1][i]) {
      same = false;
      differing += " " + files[i];
    }
  }
  return {same, same ? "report, models and manifest byte-identical" : "differ:" + differing};
}

Outcome EndToEndMock() {
  testing::TempDir dir;
  WriteBenchmark(dir.path(), {24, 30, 26, 10}, {30, 30, 30, 30}, 12);
  MockModelServer server;
  server.Start();
  const std::vector<std::string> overrides = {
      "seed=3",
      "paths.train=" + nlohmann::json((dir / "train.jsonl").string()).dump(),
      "paths.test=" + nlohmann::json((dir / "test.jsonl").string()).dump(),
      "paths.output_dir=" + nlohmann::json((dir / "out").string()).dump(),
      "endpoint.base_url=" + nlohmann::json(server.base_url()).dump(),
      "augment.generator=\"remote\"",
      "classifier.backend=\"remote\"",
      "baseline.enabled=true",
      "baseline.features.kind=\"remote_embed\"",
      "reference.source=\"fewshot\""};
  const cli::PipelineOutcome outcome = cli::RunPipeline(cli::LoadRunConfig(std::nullopt, overrides));

  const auto stats = server.stats();
  std::string missing;
  for (const char* path : {"/v1/embed", "/v1/generate", "/v1/fit", "/v1/predict_proba", "/v1/chat"}) {
    auto it = stats.requests.find(path);
    if (it == stats.requests.end() || it->second == 0) missing += std::string(" ") + path;
  }
  const std::string audit = testing::ReadFile(dir / "out" / "audit.jsonl");
  for (const char* path : {"/v1/embed", "/v1/generate", "/v1/fit", "/v1/predict_proba", "/v1/chat"}) {
    if (audit.find(std::string("\"") + path + "\"") == std::string::npos) {
      missing += std::string(" audit:") + path;
    }
  }

  const std::vector<Post> golden_examples = {
      testing::Labeled("e1", "some days are grey", RiskLabel::kIndicator),
      testing::Labeled("e2", "i keep thinking about not being here", RiskLabel::kIdeation),
      testing::Labeled("e3", "i wrote letters and gave things away", RiskLabel::kBehavior),
      testing::Labeled("e4", "i took the pills last night", RiskLabel::kAttempt)};
  const FewShotPrompt prompt = BuildFewShotPrompt(golden_examples, "nothing feels right anymore");
  const bool golden = prompt.system == testing::Golden("fewshot_prompt_system.txt") &&
                      prompt.user == testing::Golden("fewshot_prompt_user.txt");

  // The prompts actually sent carry the same template around the run's own
  // few-shot examples.
  const Corpus train = LoadCorpus(dir / "train.jsonl");
  const std::vector<Post> examples = PickFewShotExamples(SplitLabeledUnlabeled(train).first);
  const nlohmann::json sent = server.last_request("/v1/chat");
  const std::string user_golden = testing::Golden("fewshot_prompt_user.txt");
  const std::string user_header = user_golden.substr(0, user_golden.find("\n\nPost: "));
  const bool sent_ok =
      sent.is_object() &&
      sent.at("system") == BuildFewShotPrompt(examples, "x").system &&
      sent.at("user").get<std::string>().rfind(user_header + "\n\nPost: ", 0) == 0;

  const bool completed = outcome.report.at("primary").at("evaluation").is_object() &&
                         outcome.report.at("baseline").at("evaluation").is_object();
  return {missing.empty() && golden && sent_ok && completed,
          fmt::format("requests embed {} generate {} fit {} predict_proba {} chat {}; prompt golden {}{}",
                      stats.requests.count("/v1/embed") ? stats.requests.at("/v1/embed") : 0,
                      stats.requests.count("/v1/generate") ? stats.requests.at("/v1/generate") : 0,
                      stats.requests.count("/v1/fit") ? stats.requests.at("/v1/fit") : 0,
                      stats.requests.count("/v1/predict_proba") ? stats.requests.at("/v1/predict_proba") : 0,
                      stats.requests.count("/v1/chat") ? stats.requests.at("/v1/chat") : 0,
                      golden && sent_ok ? "match" : "MISMATCH",
                      missing.empty() ? "" : "; missing" + missing)};
}

int RunAll() {
  const std::vector<Criterion> criteria = {
      {"plan_arithmetic", 1.0, PlanArithmetic},
      {"final_set_2000", 60.0, FinalSet},
      {"threshold_boundary", 0.0, ThresholdBoundary},
      {"metric_oracle", 5.0, MetricOracle},
      {"gradient_checks", 5.0, GradientChecks},
      {"selftrain_lift", 120.0, SelfTrainingLift},
      {"imbalance_mitigation", 120.0, ImbalanceMitigation},
      {"accumulate_monotonicity", 0.0, AccumulateMonotonicity},
      {"pipeline_determinism", 0.0, PipelineDeterminism},
      {"e2e_mock_server", 30.0, EndToEndMock},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    std::string timing = fmt::format("{:.2f} s", seconds);
    if (c.limit_seconds > 0) {
      timing += fmt::format(" / limit {:.0f} s", c.limit_seconds);
      if (seconds >= c.limit_seconds) {
        outcome.pass = false;
        outcome.detail += "; over time limit";
      }
    }
    if (!outcome.pass) ++failed;
    fmt::print("{} {:<24} {} [{}]\n", outcome.pass ? "PASS" : "FAIL", c.name, outcome.detail,
               timing);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}

}  // namespace
}  // namespace risklens

int main() { return risklens::RunAll(); }
