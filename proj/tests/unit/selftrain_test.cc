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

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "risklens/error.h"
#include "risklens/features.h"
#include "risklens/rng.h"
#include "risklens/selftrain.h"
#include "risklens/synthetic.h"
#include "support/test_support.h"

namespace risklens {
namespace {

using testing::Dist;
using testing::FunctionModel;
using testing::Labeled;
using testing::RecordingFactory;
using testing::Unlabeled;

TEST_CASE("threshold is strict") {
  const std::vector<ProbDistribution> dists = {
      Dist(0.33, 0.33, 0.33, 0.01),
      Dist(0.33 + 1e-9, 0.33, 0.33 - 1e-9, 0.01),
      Dist(0.01, 0.33, 0.33, 0.33),
      Dist(0.1, 0.1, 0.1, 0.7),
  };
  const auto selected = SelectConfident(dists, 0.33);
  REQUIRE(selected.size() == 2);
  CHECK(selected[0] == std::make_pair(size_t{1}, RiskLabel::kIndicator));
  CHECK(selected[1] == std::make_pair(size_t{3}, RiskLabel::kAttempt));

  Corpus pool;
  for (int i = 0; i < 4; ++i) pool.Add(Unlabeled("u" + std::to_string(i), "t"));
  const PseudoLabelResult r = PseudoLabelPool(dists, pool, 0.33);
  CHECK(r.record.accepted_count == 2);
  CHECK(r.record.accepted_ids == std::vector<std::string>{"u1", "u3"});
  CHECK(r.rejected_ids == std::vector<std::string>{"u0", "u2"});
  CHECK(r.pseudo[0].origin == Origin::kPseudo);
  CHECK(r.pseudo[0].label == RiskLabel::kIndicator);
  CHECK(r.record.pseudo_counts == std::array<int64_t, kNumLabels>{1, 0, 0, 1});
}

TEST_CASE("confidence histogram bins") {
  const std::vector<ProbDistribution> dists = {Dist(1.0, 0, 0, 0), Dist(0.25, 0.25, 0.25, 0.25),
                                               Dist(0.33, 0.33, 0.33, 0.01),
                                               Dist(0.0, 0.0, 0.3, 0.7)};
  const auto h = ConfidenceHistogram(dists);
  CHECK(h[9] == 1);
  CHECK(h[2] == 1);
  CHECK(h[3] == 1);
  CHECK(h[7] == 1);
  int64_t total = 0;
  for (int64_t b : h) total += b;
  CHECK(total == 4);
}

Corpus LabeledSet(size_t per_class, bool with_synthetic) {
  Corpus c;
  for (RiskLabel label : kAllLabels) {
    for (size_t i = 0; i < per_class; ++i) {
      c.Add(Labeled(std::string(LabelName(label)) + std::to_string(i), "x", label));
    }
  }
  if (with_synthetic) {
    c.Add(Post{"syn-attempt-0", "x", RiskLabel::kAttempt, Origin::kSynthetic});
    c.Add(Post{"syn-attempt-1", "x", RiskLabel::kAttempt, Origin::kSynthetic});
  }
  return c;
}

Corpus Pool(size_t n) {
  Corpus pool;
  for (size_t i = 0; i < n; ++i) pool.Add(Unlabeled("u" + std::to_string(i), std::to_string(i)));
  return pool;
}

// Fit k accepts pool items whose number is below 2 * (k + 1); label by parity.
FunctionModel::Fn Staircase(size_t fit) {
  return [fit](const std::string& text) {
    const int n = std::stoi(text);
    const RiskLabel label = n % 2 == 0 ? RiskLabel::kIdeation : RiskLabel::kAttempt;
    ProbDistribution p;
    const double top = n < 2 * static_cast<int>(fit + 1) ? 0.9 : 0.3;
    for (size_t c = 0; c < kNumLabels; ++c) p.p[c] = (1.0 - top) / 3.0;
    p.p[Index(label)] = top;
    return p;
  };
}

TEST_CASE("refresh mode records, seeds and training sets") {
  RecordingFactory factory([](size_t fit, auto) { return Staircase(fit); });
  SelfTrainConfig config;
  config.seed = 123;
  const Corpus labeled = LabeledSet(3, /*with_synthetic=*/true);
  const SelfTrainResult result = RunSelfTraining(labeled, Pool(10), factory, config);

  const auto& records = result.report.records;
  REQUIRE(records.size() == 4);
  CHECK(records[0].kind == "initial");
  CHECK(records[0].training_set_size == 14);
  CHECK(records[1].kind == "pseudo");
  CHECK(records[1].accepted_ids == std::vector<std::string>{"u0", "u1"});
  CHECK(records[1].training_set_size == 12 + 2);
  CHECK(records[2].accepted_ids == std::vector<std::string>{"u0", "u1", "u2", "u3"});
  CHECK(records[2].training_set_size == 12 + 4);
  CHECK(records[3].kind == "final_assign");
  CHECK(records[3].accepted_count == 10);
  CHECK(records[3].training_set_size == 22);
  CHECK(result.report.final_training_set_size == 22);
  CHECK(result.pseudo_labels.size() == 10);
  CHECK(records[3].pseudo_counts[Index(RiskLabel::kIdeation)] == 5);
  CHECK(records[3].pseudo_counts[Index(RiskLabel::kAttempt)] == 5);
  for (const IterationRecord& r : records) CHECK(r.pool_size == 10);
  for (size_t i = 0; i < records.size(); ++i) CHECK(records[i].iteration == static_cast<int64_t>(i));

  REQUIRE(factory.seeds.size() == 4);
  for (size_t i = 0; i < 4; ++i) CHECK(factory.seeds[i] == DeriveSeed(123, "selftrain.fit", i));
  // Synthetic posts only in the initial fit.
  auto synthetic_in = [](const std::vector<LabeledText>& items) {
    return std::count_if(items.begin(), items.end(),
                         [](const LabeledText& t) { return t.label == RiskLabel::kAttempt; });
  };
  CHECK(synthetic_in(factory.fits[0]) == 5);
  CHECK(synthetic_in(factory.fits[1]) == 3 + 1);
}

TEST_CASE("iteration and final-assign knobs") {
  SelfTrainConfig config;
  config.final_full_assign = false;
  RecordingFactory factory([](size_t fit, auto) { return Staircase(fit); });
  const auto no_final = RunSelfTraining(LabeledSet(2, false), Pool(10), factory, config);
  CHECK(no_final.report.records.size() == 3);
  CHECK(no_final.report.final_training_set_size == 8 + 4);

  config.iterations = 0;
  config.final_full_assign = true;
  const auto direct = RunSelfTraining(LabeledSet(2, false), Pool(10), factory, config);
  REQUIRE(direct.report.records.size() == 2);
  CHECK(direct.report.records[1].kind == "final_assign");
  CHECK(direct.report.final_training_set_size == 18);

  config.drop_synthetic_after_round0 = false;
  config.iterations = 1;
  RecordingFactory keep([](size_t fit, auto) { return Staircase(fit); });
  RunSelfTraining(LabeledSet(2, true), Pool(4), keep, config);
  CHECK(keep.fits[1].size() == 10 + 2);

  // Nothing left to assign: no terminal fit.
  RecordingFactory sure([](size_t, auto) { return Staircase(100); });
  config.iterations = 2;
  const auto all = RunSelfTraining(LabeledSet(2, false), Pool(6), sure, config);
  CHECK(all.report.records.size() == 3);
  CHECK(all.report.final_training_set_size == 14);
}

TEST_CASE("accumulate mode keeps earlier acceptances") {
  SelfTrainConfig config;
  config.mode = SelfTrainMode::kAccumulate;
  config.final_full_assign = false;
  config.iterations = 3;
  // Fit k is confident only about items numbered k (mod 5); earlier items
  // stay accepted even though later fits are unsure about them.
  RecordingFactory factory([](size_t fit, auto) {
    return [fit](const std::string& text) {
      const int n = std::stoi(text);
      return n % 5 == static_cast<int>(fit) ? Dist(0.1, 0.7, 0.1, 0.1) : Dist(0.25, 0.25, 0.25, 0.25);
    };
  });
  const auto result = RunSelfTraining(LabeledSet(2, false), Pool(10), factory, config);
  const auto& r = result.report.records;
  REQUIRE(r.size() == 4);
  CHECK(r[1].accepted_ids == std::vector<std::string>{"u0", "u5"});
  CHECK(r[2].accepted_ids == std::vector<std::string>{"u0", "u1", "u5", "u6"});
  CHECK(r[3].accepted_count == 6);
}

TEST_CASE("accumulate mode acceptance sets never shrink", "[property]") {
  for (uint64_t trial = 0; trial < 50; ++trial) {
    Rng rng(trial);
    const size_t pool_size = 5 + rng.UniformIndex(40);
    SelfTrainConfig config;
    config.mode = SelfTrainMode::kAccumulate;
    config.iterations = rng.UniformInt(1, 5);
    config.threshold = 0.3 + 0.6 * rng.Uniform01();
    config.final_full_assign = rng.Bernoulli(0.5);
    const uint64_t salt = rng.Next();
    RecordingFactory factory([salt](size_t fit, auto) {
      return [salt, fit](const std::string& text) {
        Rng r(DeriveSeed(salt, text, fit));
        std::array<double, kNumLabels> logits{};
        for (double& z : logits) z = 4.0 * r.Uniform01();
        return Softmax(logits);
      };
    });
    const auto result =
        RunSelfTraining(LabeledSet(1 + rng.UniformIndex(3), rng.Bernoulli(0.5)), Pool(pool_size),
                        factory, config);
    std::set<std::string> previous;
    for (const IterationRecord& record : result.report.records) {
      const std::set<std::string> ids(record.accepted_ids.begin(), record.accepted_ids.end());
      CHECK(std::includes(ids.begin(), ids.end(), previous.begin(), previous.end()));
      previous = ids;
    }
  }
}

TEST_CASE("500 labeled plus 1500 unlabeled ends with a 2000-item fit") {
  SyntheticSpec spec;
  const BenchmarkSplits splits =
      MakeBenchmark(spec, {129, 190, 140, 41}, {375, 375, 375, 375}, {1, 1, 1, 1}, 4);
  RecordingFactory factory([](size_t, auto) {
    return [](const std::string&) { return Dist(0.3, 0.3, 0.2, 0.2); };
  });
  const auto result = RunSelfTraining(splits.labeled, splits.unlabeled, factory, SelfTrainConfig{});
  CHECK(result.report.final_training_set_size == 2000);
  CHECK(result.report.records.back().kind == "final_assign");
}

TEST_CASE("native self-training is reproducible") {
  SyntheticSpec spec;
  const BenchmarkSplits splits =
      MakeBenchmark(spec, {10, 10, 10, 10}, {30, 30, 30, 30}, {1, 1, 1, 1}, 9);
  std::vector<std::string> texts = Texts(splits.labeled);
  for (const Post& p : splits.unlabeled) texts.push_back(p.text);
  auto featurizer = std::make_shared<TfIdfFeaturizer>(FitTfIdf(texts, {}));
  NativeClassifierFactory factory(featurizer);
  SelfTrainConfig config;
  config.classifier.epochs = 5;
  config.seed = 77;
  const auto a = RunSelfTraining(splits.labeled, splits.unlabeled, factory, config);
  const auto b = RunSelfTraining(splits.labeled, splits.unlabeled, factory, config);
  CHECK(a.report.ToJson().dump() == b.report.ToJson().dump());
  CHECK(a.model->ToJson() == b.model->ToJson());
  CHECK(a.pseudo_labels.SamePosts(b.pseudo_labels));
}

TEST_CASE("self-training preconditions") {
  RecordingFactory factory([](size_t fit, auto) { return Staircase(fit); });
  Corpus one_class;
  one_class.Add(Labeled("a", "x", RiskLabel::kIdeation));
  CHECK_THROWS_AS(RunSelfTraining(one_class, Pool(3), factory, {}), TrainingError);
  CHECK_THROWS_AS(RunSelfTraining(Corpus{}, Pool(3), factory, {}), TrainingError);
  Corpus overlap = LabeledSet(1, false);
  Corpus pool;
  pool.Add(Unlabeled("indicator0", "1"));
  CHECK_THROWS_AS(RunSelfTraining(overlap, pool, factory, {}), DataError);
  SelfTrainConfig bad;
  bad.threshold = 1.0;
  CHECK_THROWS_AS(RunSelfTraining(LabeledSet(1, false), Pool(3), factory, bad), ConfigError);
  const auto empty_pool = RunSelfTraining(LabeledSet(1, false), Corpus{}, factory, {});
  CHECK(empty_pool.report.final_training_set_size == 4);
}

TEST_CASE("report JSON shape") {
  RecordingFactory factory([](size_t fit, auto) { return Staircase(fit); });
  const auto result = RunSelfTraining(LabeledSet(1, false), Pool(4), factory, {});
  const nlohmann::json j = result.report.ToJson();
  CHECK(j["final_training_set_size"] == result.report.final_training_set_size);
  CHECK(j["classifier"] == "recording");
  CHECK(j["records"].size() == result.report.records.size());
  const nlohmann::json& first = j["records"][0];
  for (const char* key : {"iteration", "kind", "pool_size", "accepted_count", "pseudo_counts",
                          "confidence_histogram", "training_set_size"}) {
    CHECK(first.contains(key));
  }
  CHECK(j["config"]["threshold"] == 0.33);
  CHECK(j["config"]["mode"] == "refresh");
}

}  // namespace
}  // namespace risklens
