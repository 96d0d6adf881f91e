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

#ifndef RISKLENS_SELFTRAIN_H_
#define RISKLENS_SELFTRAIN_H_

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

#include "risklens/classifier.h"
#include "risklens/corpus.h"

namespace risklens {

enum class SelfTrainMode { kRefresh, kAccumulate };

std::string_view ModeName(SelfTrainMode mode);
std::optional<SelfTrainMode> ParseMode(std::string_view name);

struct SelfTrainConfig {
  double threshold = 0.33;
  int64_t iterations = 2;
  SelfTrainMode mode = SelfTrainMode::kRefresh;
  bool final_full_assign = true;
  bool drop_synthetic_after_round0 = true;
  ClassifierConfig classifier;
  uint64_t seed = 0;

  // Throws ConfigError unless 0 < threshold < 1 and iterations >= 0.
  void Validate() const;
  nlohmann::json ToJson() const;
};

inline constexpr size_t kHistogramBins = 10;

// Bin b counts max probabilities in [b/10, (b+1)/10); 1.0 goes in the last.
std::array<int64_t, kHistogramBins> ConfidenceHistogram(
    std::span<const ProbDistribution> dists);

// One record per fit. Fit 0 trains on the labeled set alone; fit i >= 1
// trains on the base set plus the pseudo-labels counted here; the optional
// terminal fit adds the argmax labels of every remaining pool item. The
// histogram describes this fit's model over the whole unlabeled pool.
struct IterationRecord {
  int64_t iteration = 0;
  std::string kind;  // "initial", "pseudo", "final_assign"
  int64_t pool_size = 0;
  int64_t accepted_count = 0;
  std::array<int64_t, kNumLabels> pseudo_counts{};
  std::array<int64_t, kHistogramBins> histogram{};
  int64_t training_set_size = 0;
  // Ids of the pseudo-labeled pool items in this fit, pool order.
  std::vector<std::string> accepted_ids;

  nlohmann::json ToJson() const;
};

struct SelfTrainReport {
  std::vector<IterationRecord> records;
  int64_t final_training_set_size = 0;
  std::string classifier;  // factory name
  SelfTrainConfig config;

  nlohmann::json ToJson() const;
};

// (index, argmax label) for every distribution whose maximum probability is
// strictly greater than the threshold, in input order.
std::vector<std::pair<size_t, RiskLabel>> SelectConfident(
    std::span<const ProbDistribution> dists, double threshold);

struct PseudoLabelResult {
  Corpus pseudo;  // accepted posts, origin pseudo, pool order
  std::vector<std::string> rejected_ids;
  IterationRecord record;  // pool_size, accepted_count, pseudo_counts, histogram
};

// Predicts the pool with `model` and keeps the confident items.
PseudoLabelResult PseudoLabelPool(const ProbabilisticModel& model,
                                  const Corpus& unlabeled, double threshold);
// Same, from precomputed distributions (one per pool post).
PseudoLabelResult PseudoLabelPool(std::span<const ProbDistribution> dists,
                                  const Corpus& unlabeled, double threshold);

struct SelfTrainResult {
  std::unique_ptr<ProbabilisticModel> model;
  SelfTrainReport report;
  // Pseudo-labeled posts of the last fit.
  Corpus pseudo_labels;
};

// Iterative pseudo-labeling.
//
// Fit 0 uses every labeled post, synthetic ones included. Each of the
// `iterations` rounds then predicts the pool with the latest model, selects
// confident items, and fits a fresh model on the base set (labeled posts,
// minus synthetic ones when drop_synthetic_after_round0) plus the
// pseudo-labels. Refresh mode re-derives the pseudo-labels from the whole
// pool every round; accumulate mode predicts only pool items not yet
// accepted and keeps earlier acceptances for good. With final_full_assign,
// pool items still unaccepted after the last round take the last model's
// argmax and one more fit runs on base plus all of them.
//
// Fit i uses classifier seed DeriveSeed(config.seed, "selftrain.fit", i).
// Throws TrainingError when the labeled set is empty or has one class.
SelfTrainResult RunSelfTraining(const Corpus& labeled, const Corpus& unlabeled,
                                const ClassifierFactory& factory,
                                const SelfTrainConfig& config);

// Labeled posts as classifier input, in corpus order. Unlabeled posts are
// skipped.
std::vector<LabeledText> ToLabeledTexts(const Corpus& corpus);

std::vector<std::string> Texts(const Corpus& corpus);

}  // namespace risklens

#endif  // RISKLENS_SELFTRAIN_H_
