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

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include <catch_amalgamated.hpp>

#include "risklens/classifier.h"
#include "risklens/error.h"
#include "risklens/rng.h"
#include "support/oracles.h"

namespace risklens {
namespace {

using Catch::Matchers::WithinAbs;

TEST_CASE("softmax is stable and sums to one") {
  const ProbDistribution p = Softmax({1000.0, 1000.0, -1000.0, 0.0});
  CHECK_THAT(p.p[0], WithinAbs(0.5, 1e-15));
  CHECK_THAT(p.p[1], WithinAbs(0.5, 1e-15));
  CHECK(p.IsValid());
  CHECK(Softmax({0, 0, 0, 0}) == ProbDistribution::Uniform());
}

TEST_CASE("argmax breaks ties toward the canonical order") {
  ProbDistribution p;
  p.p = {0.1, 0.4, 0.4, 0.1};
  CHECK(p.Argmax() == RiskLabel::kIdeation);
  CHECK(ProbDistribution::Uniform().Argmax() == RiskLabel::kIndicator);
  p.p = {0.5, 0.6, 0.0, 0.0};
  CHECK_FALSE(p.IsValid());
  p.p = {-0.1, 1.1, 0.0, 0.0};
  CHECK_FALSE(p.IsValid());
}

TEST_CASE("sample losses by hand") {
  // Cross-entropy at equal logits is ln 4.
  CHECK_THAT(SampleLoss(LossKind::kCrossEntropy, {0, 0, 0, 0}, RiskLabel::kAttempt, nullptr),
             WithinAbs(std::log(4.0), 1e-15));
  // Hinge at zero logits: four unit slacks squared.
  CHECK_THAT(SampleLoss(LossKind::kHingeOvr, {0, 0, 0, 0}, RiskLabel::kAttempt, nullptr),
             WithinAbs(4.0, 1e-15));
  // Margins satisfied: zero loss.
  CHECK(SampleLoss(LossKind::kHingeOvr, {-2, -1, 3, -5}, RiskLabel::kBehavior, nullptr) == 0.0);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(2718);
  int checked = 0;
  for (LossKind loss : {LossKind::kCrossEntropy, LossKind::kHingeOvr}) {
    for (int instance = 0; instance < 15; ++instance) {
      INFO("loss " << LossName(loss) << " instance " << instance);
      CHECK(testing::WorstGradientError(rng, loss) <= 1e-4);
      ++checked;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("AdamW step matches the update rule") {
  ClassifierConfig config;
  config.learning_rate = 0.1;
  config.beta1 = 0.9;
  config.beta2 = 0.999;
  config.epsilon = 1e-8;
  std::vector<double> params = {1.0, -2.0};
  AdamWState state;
  double m[2] = {0, 0}, v[2] = {0, 0};
  double p[2] = {1.0, -2.0};
  const std::vector<std::vector<double>> grads = {{0.5, -1.0}, {0.25, 0.0}, {-3.0, 2.0}};
  for (size_t t = 0; t < grads.size(); ++t) {
    REQUIRE(AdamWStep(params, grads[t], state, config, 0.01) == StepOutcome::kApplied);
    for (int k = 0; k < 2; ++k) {
      m[k] = 0.9 * m[k] + 0.1 * grads[t][k];
      v[k] = 0.999 * v[k] + 0.001 * grads[t][k] * grads[t][k];
      const double mh = m[k] / (1 - std::pow(0.9, t + 1));
      const double vh = v[k] / (1 - std::pow(0.999, t + 1));
      p[k] -= 0.1 * (mh / (std::sqrt(vh) + 1e-8) + 0.01 * p[k]);
      CHECK_THAT(params[k], WithinAbs(p[k], 1e-14));
    }
  }
  CHECK(state.step == 3);
  // First step, by hand: 1 - 0.1 * (1 + 0.01) to within eps.
  std::vector<double> single = {1.0};
  AdamWState fresh;
  const std::vector<double> g = {0.5};
  AdamWStep(single, g, fresh, config, 0.01);
  CHECK_THAT(single[0], WithinAbs(0.899, 1e-7));
}

TEST_CASE("non-finite gradients leave parameters untouched") {
  ClassifierConfig config;
  std::vector<double> params = {1.0, 2.0};
  AdamWState state;
  const std::vector<double> bad = {std::numeric_limits<double>::quiet_NaN(), 1.0};
  CHECK(AdamWStep(params, bad, state, config) == StepOutcome::kSkippedNonFinite);
  CHECK(params == std::vector<double>{1.0, 2.0});
  CHECK(state.step == 0);
}

struct Toy {
  std::vector<FeatureVector> xs;
  std::vector<RiskLabel> ys;
};

// Four well-separated clusters in 8 dimensions.
Toy MakeToy(uint64_t seed, size_t per_class) {
  Rng rng(seed);
  Toy toy;
  for (size_t c = 0; c < kNumLabels; ++c) {
    for (size_t i = 0; i < per_class; ++i) {
      std::vector<double> x(8);
      for (double& v : x) v = 0.2 * (rng.Uniform01() - 0.5);
      x[2 * c] += 1.0;
      x[2 * c + 1] += 0.5;
      toy.xs.push_back(FeatureVector::Dense(x));
      toy.ys.push_back(LabelAt(c));
    }
  }
  return toy;
}

TEST_CASE("fit separates clusters with both losses") {
  const Toy toy = MakeToy(3, 20);
  for (LossKind loss : {LossKind::kCrossEntropy, LossKind::kHingeOvr}) {
    ClassifierConfig config;
    config.loss = loss;
    config.epochs = 30;
    config.seed = 11;
    const auto [model, report] = Fit(toy.xs, toy.ys, config);
    CHECK(report.train_accuracy == 1.0);
    CHECK(report.epoch_loss.size() == 30);
    CHECK(report.epoch_loss.back() < report.epoch_loss.front());
    CHECK(report.skipped_steps == 0);
    for (size_t i = 0; i < toy.xs.size(); ++i) {
      const ProbDistribution p = PredictProba(model, toy.xs[i]);
      CHECK(p.IsValid(1e-9));
      CHECK(p.Argmax() == toy.ys[i]);
    }
  }
}

TEST_CASE("fit is deterministic in its seed") {
  const Toy toy = MakeToy(4, 10);
  ClassifierConfig config;
  config.epochs = 5;
  config.seed = 1;
  const auto a = Fit(toy.xs, toy.ys, config);
  const auto b = Fit(toy.xs, toy.ys, config);
  CHECK(a.first == b.first);
  config.seed = 2;
  const auto c = Fit(toy.xs, toy.ys, config);
  CHECK_FALSE(a.first == c.first);
}

TEST_CASE("fit preconditions") {
  ClassifierConfig config;
  std::vector<FeatureVector> xs = {FeatureVector::Dense({1.0}), FeatureVector::Dense({2.0})};
  std::vector<RiskLabel> same = {RiskLabel::kIdeation, RiskLabel::kIdeation};
  CHECK_THROWS_AS(Fit(xs, same, config), TrainingError);
  CHECK_THROWS_AS(Fit({}, {}, config), TrainingError);
  std::vector<FeatureVector> mixed = {FeatureVector::Dense({1.0}), FeatureVector::Dense({1.0, 2.0})};
  std::vector<RiskLabel> two = {RiskLabel::kIdeation, RiskLabel::kAttempt};
  CHECK_THROWS_AS(Fit(mixed, two, config), TrainingError);
  config.batch_size = 0;
  CHECK_THROWS_AS(config.Validate(), ConfigError);
}

TEST_CASE("diverging inputs are skipped, not applied") {
  std::vector<FeatureVector> xs = {FeatureVector::Dense({std::numeric_limits<double>::infinity()}),
                                   FeatureVector::Dense({1.0})};
  std::vector<RiskLabel> ys = {RiskLabel::kIdeation, RiskLabel::kAttempt};
  ClassifierConfig config;
  config.batch_size = 1;
  config.epochs = 2;
  const auto [model, report] = Fit(xs, ys, config);
  CHECK(report.skipped_steps > 0);
  for (double w : model.weights) CHECK(std::isfinite(w));
}

TEST_CASE("linear model and config JSON round-trip") {
  const Toy toy = MakeToy(5, 5);
  ClassifierConfig config;
  config.epochs = 3;
  config.loss = LossKind::kHingeOvr;
  const auto [model, report] = Fit(toy.xs, toy.ys, config);
  CHECK(LinearModel::FromJson(model.ToJson()) == model);
  CHECK(ClassifierConfig::FromJson(config.ToJson()) == config);
  nlohmann::json broken = model.ToJson();
  broken["weights"].erase(0);
  CHECK_THROWS_AS(LinearModel::FromJson(broken), DataError);
}

TEST_CASE("remote defaults") {
  const ClassifierConfig remote = ClassifierConfig::RemoteDefaults();
  CHECK(remote.batch_size == 8);
  CHECK(remote.epochs == 10);
  CHECK_NOTHROW(remote.Validate());
}

}  // namespace
}  // namespace risklens
