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

#include "risklens/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "risklens/error.h"
#include "risklens/rng.h"

namespace risklens {
namespace {

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

void CheckConfig(bool ok, const char* message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

RiskLabel ProbDistribution::Argmax() const {
  size_t best = 0;
  for (size_t i = 1; i < kNumLabels; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return LabelAt(best);
}

double ProbDistribution::Max() const { return *std::max_element(p.begin(), p.end()); }

bool ProbDistribution::IsValid(double tolerance) const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

ProbDistribution ProbDistribution::Uniform() {
  ProbDistribution d;
  d.p.fill(1.0 / static_cast<double>(kNumLabels));
  return d;
}

ProbDistribution Softmax(const std::array<double, kNumLabels>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  ProbDistribution d;
  double sum = 0.0;
  for (size_t i = 0; i < kNumLabels; ++i) {
    d.p[i] = std::exp(logits[i] - top);
    sum += d.p[i];
  }
  for (double& v : d.p) v /= sum;
  return d;
}

std::string_view LossName(LossKind loss) {
  return loss == LossKind::kCrossEntropy ? "cross_entropy" : "hinge_ovr";
}

std::optional<LossKind> ParseLoss(std::string_view name) {
  if (name == "cross_entropy") return LossKind::kCrossEntropy;
  if (name == "hinge_ovr") return LossKind::kHingeOvr;
  return std::nullopt;
}

ClassifierConfig ClassifierConfig::RemoteDefaults() {
  ClassifierConfig config;
  config.learning_rate = 2e-5;
  config.batch_size = 8;
  config.epochs = 10;
  config.weight_decay = 0.01;
  return config;
}

void ClassifierConfig::Validate() const {
  CheckConfig(learning_rate > 0.0 && std::isfinite(learning_rate),
              "learning_rate must be > 0");
  CheckConfig(batch_size >= 1, "batch_size must be >= 1");
  CheckConfig(epochs >= 1, "epochs must be >= 1");
  CheckConfig(weight_decay >= 0.0, "weight_decay must be >= 0");
  CheckConfig(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  CheckConfig(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  CheckConfig(epsilon > 0.0, "epsilon must be > 0");
}

nlohmann::json ClassifierConfig::ToJson() const {
  return {{"learning_rate", learning_rate}, {"batch_size", batch_size},
          {"epochs", epochs},               {"weight_decay", weight_decay},
          {"beta1", beta1},                 {"beta2", beta2},
          {"epsilon", epsilon},             {"seed", seed},
          {"loss", std::string(LossName(loss))}};
}

ClassifierConfig ClassifierConfig::FromJson(const nlohmann::json& j) {
  ClassifierConfig c;
  try {
    c.learning_rate = j.at("learning_rate").get<double>();
    c.batch_size = j.at("batch_size").get<int64_t>();
    c.epochs = j.at("epochs").get<int64_t>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    auto loss = ParseLoss(j.at("loss").get<std::string>());
    if (!loss) throw DataError("unknown loss");
    c.loss = *loss;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed classifier config: ") + e.what());
  }
  return c;
}

StepOutcome AdamWStep(std::span<double> params, std::span<const double> grad,
                      AdamWState& state, const ClassifierConfig& config,
                      double weight_decay) {
  if (params.size() != grad.size()) {
    throw TrainingError("parameter and gradient sizes differ");
  }
  if (!AllFinite(grad)) return StepOutcome::kSkippedNonFinite;
  if (state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw TrainingError("optimizer state does not match parameter size");
  }
  ++state.step;
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double lr = config.learning_rate;
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params[i] -= lr * (m_hat / (std::sqrt(v_hat) + config.epsilon) +
                       weight_decay * params[i]);
  }
  return StepOutcome::kApplied;
}

StepOutcome AdamWStep(std::span<double> params, std::span<const double> grad,
                      AdamWState& state, const ClassifierConfig& config) {
  return AdamWStep(params, grad, state, config, config.weight_decay);
}

LinearModel LinearModel::Zeros(size_t dimension, LossKind loss) {
  LinearModel model;
  model.dimension = dimension;
  model.weights.assign(kNumLabels * dimension, 0.0);
  model.loss = loss;
  model.config.loss = loss;
  return model;
}

std::array<double, kNumLabels> LinearModel::Logits(const FeatureVector& x) const {
  if (x.dimension() != dimension) {
    throw TrainingError("feature dimension " + std::to_string(x.dimension()) +
                        " does not match model dimension " +
                        std::to_string(dimension));
  }
  std::array<double, kNumLabels> z{};
  for (size_t c = 0; c < kNumLabels; ++c) z[c] = x.Dot(Row(c)) + bias[c];
  return z;
}

nlohmann::json LinearModel::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t c = 0; c < kNumLabels; ++c) {
    auto row = Row(c);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"format", "risklens.linear"},
          {"version", 1},
          {"loss", std::string(LossName(loss))},
          {"dimension", dimension},
          {"labels", {"indicator", "ideation", "behavior", "attempt"}},
          {"weights", rows},
          {"bias", bias},
          {"config", config.ToJson()}};
}

LinearModel LinearModel::FromJson(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "risklens.linear" ||
        j.at("version").get<int>() != 1) {
      throw DataError("unsupported linear model format");
    }
    LinearModel model;
    auto loss = ParseLoss(j.at("loss").get<std::string>());
    if (!loss) throw DataError("unknown loss in model");
    model.loss = *loss;
    model.dimension = j.at("dimension").get<size_t>();
    const auto& rows = j.at("weights");
    if (!rows.is_array() || rows.size() != kNumLabels) {
      throw DataError("model needs one weight row per label");
    }
    for (const auto& row : rows) {
      auto values = row.get<std::vector<double>>();
      if (values.size() != model.dimension) {
        throw DataError("weight row length does not match dimension");
      }
      model.weights.insert(model.weights.end(), values.begin(), values.end());
    }
    model.bias = j.at("bias").get<std::array<double, kNumLabels>>();
    model.config = ClassifierConfig::FromJson(j.at("config"));
    if (!AllFinite(model.weights) || !AllFinite(model.bias)) {
      throw DataError("model contains non-finite parameters");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed linear model: ") + e.what());
  }
}

nlohmann::json TrainReport::ToJson() const {
  return {{"epoch_loss", epoch_loss},
          {"train_accuracy", train_accuracy},
          {"skipped_steps", skipped_steps}};
}

double SampleLoss(LossKind loss, const std::array<double, kNumLabels>& logits,
                  RiskLabel label, std::array<double, kNumLabels>* dlogits) {
  const size_t y = Index(label);
  if (loss == LossKind::kCrossEntropy) {
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - top);
    const double log_normalizer = top + std::log(sum);
    if (dlogits != nullptr) {
      for (size_t k = 0; k < kNumLabels; ++k) {
        (*dlogits)[k] = std::exp(logits[k] - log_normalizer) - (k == y ? 1.0 : 0.0);
      }
    }
    return log_normalizer - logits[y];
  }
  double total = 0.0;
  for (size_t k = 0; k < kNumLabels; ++k) {
    const double target = k == y ? 1.0 : -1.0;
    const double slack = std::max(0.0, 1.0 - target * logits[k]);
    total += slack * slack;
    if (dlogits != nullptr) (*dlogits)[k] = -2.0 * target * slack;
  }
  return total;
}

double LossAndGradient(const LinearModel& model,
                       std::span<const FeatureVector> features,
                       std::span<const RiskLabel> labels,
                       std::span<const size_t> batch, Gradient* gradient) {
  if (gradient != nullptr) {
    gradient->weights.assign(model.weights.size(), 0.0);
    gradient->bias.fill(0.0);
  }
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  std::array<double, kNumLabels> dz{};
  for (size_t i : batch) {
    const auto logits = model.Logits(features[i]);
    total += SampleLoss(model.loss, logits, labels[i],
                        gradient != nullptr ? &dz : nullptr);
    if (gradient == nullptr) continue;
    for (size_t k = 0; k < kNumLabels; ++k) {
      if (dz[k] == 0.0) continue;
      features[i].AddScaledTo(
          std::span<double>(gradient->weights).subspan(k * model.dimension,
                                                       model.dimension),
          dz[k] * scale);
      gradient->bias[k] += dz[k] * scale;
    }
  }
  return total * scale;
}

double MeanLoss(const LinearModel& model, std::span<const FeatureVector> features,
                std::span<const RiskLabel> labels) {
  std::vector<size_t> all(features.size());
  std::iota(all.begin(), all.end(), 0);
  return LossAndGradient(model, features, labels, all, nullptr);
}

std::pair<LinearModel, TrainReport> Fit(std::span<const FeatureVector> features,
                                        std::span<const RiskLabel> labels,
                                        const ClassifierConfig& config) {
  config.Validate();
  if (features.empty()) throw TrainingError("cannot fit on an empty training set");
  if (features.size() != labels.size()) {
    throw TrainingError("features and labels differ in length");
  }
  const size_t dimension = features.front().dimension();
  for (const FeatureVector& x : features) {
    if (x.dimension() != dimension) {
      throw TrainingError("training features have mixed dimensions");
    }
  }
  if (std::set<RiskLabel>(labels.begin(), labels.end()).size() < 2) {
    throw TrainingError("training set needs at least two distinct labels");
  }

  LinearModel model = LinearModel::Zeros(dimension, config.loss);
  model.config = config;
  AdamWState weight_state;
  AdamWState bias_state;
  TrainReport report;
  Gradient gradient;
  const size_t n = features.size();
  const auto batch_size = static_cast<size_t>(config.batch_size);
  std::vector<size_t> order(n);

  for (int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(DeriveSeed(config.seed, "classifier.epoch",
                       static_cast<uint64_t>(epoch)));
    rng.Shuffle(std::span<size_t>(order));
    for (size_t start = 0; start < n; start += batch_size) {
      const size_t count = std::min(batch_size, n - start);
      LossAndGradient(model, features, labels,
                      std::span<const size_t>(order).subspan(start, count),
                      &gradient);
      if (!AllFinite(gradient.weights) || !AllFinite(gradient.bias)) {
        ++report.skipped_steps;
        continue;
      }
      AdamWStep(model.weights, gradient.weights, weight_state, config,
                config.weight_decay);
      AdamWStep(model.bias, gradient.bias, bias_state, config, 0.0);
    }
    report.epoch_loss.push_back(MeanLoss(model, features, labels));
  }

  size_t correct = 0;
  for (size_t i = 0; i < n; ++i) {
    if (PredictProba(model, features[i]).Argmax() == labels[i]) ++correct;
  }
  report.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return {std::move(model), std::move(report)};
}

LinearModel FitHingeOvr(std::span<const FeatureVector> features,
                        std::span<const RiskLabel> labels,
                        ClassifierConfig config) {
  config.loss = LossKind::kHingeOvr;
  return Fit(features, labels, config).first;
}

ProbDistribution PredictProba(const LinearModel& model, const FeatureVector& x) {
  return Softmax(model.Logits(x));
}

NativeLinearModel::NativeLinearModel(std::shared_ptr<const Featurizer> featurizer,
                                     LinearModel model, TrainReport report)
    : featurizer_(std::move(featurizer)),
      model_(std::move(model)),
      report_(std::move(report)) {}

std::vector<ProbDistribution> NativeLinearModel::PredictProba(
    std::span<const std::string> texts) const {
  std::vector<FeatureVector> features = featurizer_->Transform(texts);
  std::vector<ProbDistribution> out;
  out.reserve(features.size());
  for (const FeatureVector& x : features) out.push_back(risklens::PredictProba(model_, x));
  return out;
}

nlohmann::json NativeLinearModel::ToJson() const {
  return {{"kind", "native_linear"},
          {"featurizer", featurizer_->ToJson()},
          {"linear", model_.ToJson()},
          {"train_report", report_.ToJson()}};
}

NativeClassifierFactory::NativeClassifierFactory(
    std::shared_ptr<const Featurizer> featurizer)
    : featurizer_(std::move(featurizer)) {
  if (!featurizer_) throw ConfigError("native classifier needs a featurizer");
}

std::unique_ptr<ProbabilisticModel> NativeClassifierFactory::Fit(
    std::span<const LabeledText> data, const ClassifierConfig& config) const {
  std::vector<std::string> texts;
  std::vector<RiskLabel> labels;
  texts.reserve(data.size());
  labels.reserve(data.size());
  for (const LabeledText& item : data) {
    texts.push_back(item.text);
    labels.push_back(item.label);
  }
  std::vector<FeatureVector> features = featurizer_->Transform(texts);
  auto [model, report] = risklens::Fit(features, labels, config);
  return std::make_unique<NativeLinearModel>(featurizer_, std::move(model),
                                             std::move(report));
}

}  // namespace risklens
