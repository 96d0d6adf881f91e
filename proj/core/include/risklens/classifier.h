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

#ifndef RISKLENS_CLASSIFIER_H_
#define RISKLENS_CLASSIFIER_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/features.h"
#include "risklens/label.h"

namespace risklens {

// Probability vector over the four labels in canonical order.
struct ProbDistribution {
  std::array<double, kNumLabels> p{};

  // Lowest canonical index wins ties.
  RiskLabel Argmax() const;
  double Max() const;
  // Non-negative entries summing to 1 within `tolerance`.
  bool IsValid(double tolerance = 1e-9) const;

  static ProbDistribution Uniform();

  bool operator==(const ProbDistribution&) const = default;
};

// Numerically stable softmax (max-shifted).
ProbDistribution Softmax(const std::array<double, kNumLabels>& logits);

enum class LossKind { kCrossEntropy, kHingeOvr };

std::string_view LossName(LossKind loss);
std::optional<LossKind> ParseLoss(std::string_view name);

struct ClassifierConfig {
  double learning_rate = 0.05;
  int64_t batch_size = 8;
  int64_t epochs = 50;
  double weight_decay = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 0;
  LossKind loss = LossKind::kCrossEntropy;

  // Defaults sent to a remote transformer fine-tune: batch 8, 10 epochs.
  static ClassifierConfig RemoteDefaults();

  // Throws ConfigError on out-of-range hyperparameters.
  void Validate() const;

  nlohmann::json ToJson() const;
  static ClassifierConfig FromJson(const nlohmann::json& j);

  bool operator==(const ClassifierConfig&) const = default;
};

struct AdamWState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t step = 0;
};

enum class StepOutcome { kApplied, kSkippedNonFinite };

// One decoupled-weight-decay Adam update:
//   m <- b1 m + (1 - b1) g;  v <- b2 v + (1 - b2) g^2
//   p <- p - lr (m_hat / (sqrt(v_hat) + eps) + weight_decay p)
// with bias-corrected m_hat, v_hat. State vectors are sized on first use. A
// gradient with any non-finite entry leaves params and state untouched.
StepOutcome AdamWStep(std::span<double> params, std::span<const double> grad,
                      AdamWState& state, const ClassifierConfig& config,
                      double weight_decay);
StepOutcome AdamWStep(std::span<double> params, std::span<const double> grad,
                      AdamWState& state, const ClassifierConfig& config);

// Four rows of weights (row-major, one per label) plus a bias per label.
struct LinearModel {
  size_t dimension = 0;
  std::vector<double> weights;
  std::array<double, kNumLabels> bias{};
  LossKind loss = LossKind::kCrossEntropy;
  ClassifierConfig config;

  static LinearModel Zeros(size_t dimension, LossKind loss);

  std::span<const double> Row(size_t label) const {
    return std::span<const double>(weights).subspan(label * dimension, dimension);
  }

  // Throws TrainingError when the vector dimension differs.
  std::array<double, kNumLabels> Logits(const FeatureVector& x) const;

  nlohmann::json ToJson() const;
  static LinearModel FromJson(const nlohmann::json& j);

  bool operator==(const LinearModel&) const = default;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // full-data mean loss after each epoch
  double train_accuracy = 0.0;
  int64_t skipped_steps = 0;

  nlohmann::json ToJson() const;
};

struct Gradient {
  std::vector<double> weights;
  std::array<double, kNumLabels> bias{};
};

// Per-sample loss for a logit vector. Cross-entropy: -ln softmax(z)[y].
// Squared one-vs-rest hinge: sum_k max(0, 1 - t_k z_k)^2 with t_k = +1 for
// the true class and -1 otherwise. Fills d loss / d z when dlogits != null.
double SampleLoss(LossKind loss, const std::array<double, kNumLabels>& logits,
                  RiskLabel label, std::array<double, kNumLabels>* dlogits);

// Mean loss over `batch` (indices into features/labels) and its gradient.
// Weight decay is not part of the objective; AdamW applies it separately.
double LossAndGradient(const LinearModel& model,
                       std::span<const FeatureVector> features,
                       std::span<const RiskLabel> labels,
                       std::span<const size_t> batch, Gradient* gradient);

double MeanLoss(const LinearModel& model, std::span<const FeatureVector> features,
                std::span<const RiskLabel> labels);

// Mini-batch AdamW from zero weights for config.loss. Each epoch visits the
// samples in a Fisher-Yates order drawn from DeriveSeed(seed, epoch).
// Weight decay applies to the weights, not the bias. Throws TrainingError
// on empty input, mixed dimensions, or fewer than two distinct labels.
std::pair<LinearModel, TrainReport> Fit(std::span<const FeatureVector> features,
                                        std::span<const RiskLabel> labels,
                                        const ClassifierConfig& config);

// Fit with the squared one-vs-rest hinge loss.
LinearModel FitHingeOvr(std::span<const FeatureVector> features,
                        std::span<const RiskLabel> labels,
                        ClassifierConfig config);

// softmax(Wx + b); for hinge models the softmax is taken over the raw
// one-vs-rest margins.
ProbDistribution PredictProba(const LinearModel& model, const FeatureVector& x);

struct LabeledText {
  std::string text;
  RiskLabel label;
};

// A fitted text classifier, native or remote.
class ProbabilisticModel {
 public:
  virtual ~ProbabilisticModel() = default;
  virtual std::vector<ProbDistribution> PredictProba(
      std::span<const std::string> texts) const = 0;
  // Self-contained artifact description.
  virtual nlohmann::json ToJson() const = 0;
};

// Fits a fresh model (new parameters, new optimizer state) per call.
class ClassifierFactory {
 public:
  virtual ~ClassifierFactory() = default;
  virtual std::unique_ptr<ProbabilisticModel> Fit(
      std::span<const LabeledText> data, const ClassifierConfig& config) const = 0;
  virtual std::string name() const = 0;
};

class NativeLinearModel : public ProbabilisticModel {
 public:
  NativeLinearModel(std::shared_ptr<const Featurizer> featurizer,
                    LinearModel model, TrainReport report);

  std::vector<ProbDistribution> PredictProba(
      std::span<const std::string> texts) const override;
  nlohmann::json ToJson() const override;

  const LinearModel& linear() const { return model_; }
  const TrainReport& report() const { return report_; }
  const Featurizer& featurizer() const { return *featurizer_; }

 private:
  std::shared_ptr<const Featurizer> featurizer_;
  LinearModel model_;
  TrainReport report_;
};

// Featurizes with a fixed featurizer and fits a LinearModel.
class NativeClassifierFactory : public ClassifierFactory {
 public:
  explicit NativeClassifierFactory(std::shared_ptr<const Featurizer> featurizer);

  std::unique_ptr<ProbabilisticModel> Fit(
      std::span<const LabeledText> data,
      const ClassifierConfig& config) const override;
  std::string name() const override { return "native"; }

 private:
  std::shared_ptr<const Featurizer> featurizer_;
};

}  // namespace risklens

#endif  // RISKLENS_CLASSIFIER_H_
