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

#include "risklens/selftrain.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "risklens/error.h"
#include "risklens/rng.h"

namespace risklens {
namespace {

nlohmann::json PerClass(const std::array<int64_t, kNumLabels>& counts) {
  nlohmann::json out = nlohmann::json::object();
  for (RiskLabel label : kAllLabels) out[std::string(LabelName(label))] = counts[Index(label)];
  return out;
}

Post PseudoPost(const Post& source, RiskLabel label) {
  return Post{source.id, source.text, label, Origin::kPseudo};
}

}  // namespace

std::string_view ModeName(SelfTrainMode mode) {
  return mode == SelfTrainMode::kRefresh ? "refresh" : "accumulate";
}

std::optional<SelfTrainMode> ParseMode(std::string_view name) {
  if (name == "refresh") return SelfTrainMode::kRefresh;
  if (name == "accumulate") return SelfTrainMode::kAccumulate;
  return std::nullopt;
}

void SelfTrainConfig::Validate() const {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError(fmt::format("selftrain threshold must lie in (0, 1), got {}", threshold));
  }
  if (iterations < 0) throw ConfigError("selftrain iterations must be >= 0");
  classifier.Validate();
}

nlohmann::json SelfTrainConfig::ToJson() const {
  return {{"threshold", threshold},
          {"iterations", iterations},
          {"mode", std::string(ModeName(mode))},
          {"final_full_assign", final_full_assign},
          {"drop_synthetic_after_round0", drop_synthetic_after_round0},
          {"classifier", classifier.ToJson()},
          {"seed", seed}};
}

std::array<int64_t, kHistogramBins> ConfidenceHistogram(
    std::span<const ProbDistribution> dists) {
  std::array<int64_t, kHistogramBins> bins{};
  for (const ProbDistribution& d : dists) {
    const double m = std::clamp(d.Max(), 0.0, 1.0);
    const auto bin = std::min<size_t>(kHistogramBins - 1,
                                      static_cast<size_t>(std::floor(m * kHistogramBins)));
    ++bins[bin];
  }
  return bins;
}

nlohmann::json IterationRecord::ToJson() const {
  return {{"iteration", iteration},
          {"kind", kind},
          {"pool_size", pool_size},
          {"accepted_count", accepted_count},
          {"pseudo_counts", PerClass(pseudo_counts)},
          {"confidence_histogram", histogram},
          {"training_set_size", training_set_size}};
}

nlohmann::json SelfTrainReport::ToJson() const {
  nlohmann::json records_json = nlohmann::json::array();
  for (const IterationRecord& r : records) records_json.push_back(r.ToJson());
  return {{"records", records_json},
          {"final_training_set_size", final_training_set_size},
          {"final_fit", records.empty() ? -1 : records.back().iteration},
          {"classifier", classifier},
          {"config", config.ToJson()}};
}

std::vector<std::pair<size_t, RiskLabel>> SelectConfident(
    std::span<const ProbDistribution> dists, double threshold) {
  std::vector<std::pair<size_t, RiskLabel>> out;
  for (size_t i = 0; i < dists.size(); ++i) {
    if (dists[i].Max() > threshold) out.emplace_back(i, dists[i].Argmax());
  }
  return out;
}

PseudoLabelResult PseudoLabelPool(std::span<const ProbDistribution> dists,
                                  const Corpus& unlabeled, double threshold) {
  if (dists.size() != unlabeled.size()) {
    throw TrainingError(fmt::format("{} distributions for a pool of {}", dists.size(),
                                    unlabeled.size()));
  }
  PseudoLabelResult result;
  result.record.pool_size = static_cast<int64_t>(unlabeled.size());
  result.record.histogram = ConfidenceHistogram(dists);
  std::vector<bool> accepted(unlabeled.size(), false);
  for (auto [index, label] : SelectConfident(dists, threshold)) {
    accepted[index] = true;
    result.pseudo.Add(PseudoPost(unlabeled[index], label));
    ++result.record.pseudo_counts[Index(label)];
    result.record.accepted_ids.push_back(unlabeled[index].id);
  }
  for (size_t i = 0; i < unlabeled.size(); ++i) {
    if (!accepted[i]) result.rejected_ids.push_back(unlabeled[i].id);
  }
  result.record.accepted_count = static_cast<int64_t>(result.pseudo.size());
  return result;
}

PseudoLabelResult PseudoLabelPool(const ProbabilisticModel& model,
                                  const Corpus& unlabeled, double threshold) {
  const std::vector<std::string> texts = Texts(unlabeled);
  const std::vector<ProbDistribution> dists = model.PredictProba(texts);
  return PseudoLabelPool(dists, unlabeled, threshold);
}

std::vector<LabeledText> ToLabeledTexts(const Corpus& corpus) {
  std::vector<LabeledText> out;
  out.reserve(corpus.size());
  for (const Post& post : corpus) {
    if (post.label) out.push_back({post.text, *post.label});
  }
  return out;
}

std::vector<std::string> Texts(const Corpus& corpus) {
  std::vector<std::string> out;
  out.reserve(corpus.size());
  for (const Post& post : corpus) out.push_back(post.text);
  return out;
}

SelfTrainResult RunSelfTraining(const Corpus& labeled, const Corpus& unlabeled,
                                const ClassifierFactory& factory,
                                const SelfTrainConfig& config) {
  config.Validate();
  const Corpus labeled_only = SplitLabeledUnlabeled(labeled).first;
  if (labeled_only.empty()) throw TrainingError("self-training needs labeled posts");
  {
    std::set<RiskLabel> classes;
    for (const Post& post : labeled_only) classes.insert(*post.label);
    if (classes.size() < 2) {
      throw TrainingError("self-training needs at least two labeled classes");
    }
  }
  for (const Post& post : unlabeled) {
    if (labeled_only.Contains(post.id)) {
      throw DataError("unlabeled post id '" + post.id + "' also appears in the labeled set");
    }
  }

  const Corpus base = config.drop_synthetic_after_round0
                          ? WithoutOrigin(labeled_only, Origin::kSynthetic)
                          : labeled_only;
  const std::vector<std::string> pool_texts = Texts(unlabeled);
  const size_t pool = unlabeled.size();

  SelfTrainResult result;
  result.report.config = config;
  result.report.classifier = factory.name();

  std::vector<ProbDistribution> dists;
  auto fit = [&](const Corpus& training, int64_t index, IterationRecord record) {
    ClassifierConfig classifier = config.classifier;
    classifier.seed = DeriveSeed(config.seed, "selftrain.fit", static_cast<uint64_t>(index));
    const std::vector<LabeledText> items = ToLabeledTexts(training);
    result.model = factory.Fit(items, classifier);
    dists = pool > 0 ? result.model->PredictProba(pool_texts)
                     : std::vector<ProbDistribution>{};
    if (dists.size() != pool) {
      throw TrainingError("model returned the wrong number of pool predictions");
    }
    record.iteration = index;
    record.pool_size = static_cast<int64_t>(pool);
    record.histogram = ConfidenceHistogram(dists);
    record.training_set_size = static_cast<int64_t>(items.size());
    result.report.records.push_back(std::move(record));
    result.report.final_training_set_size = static_cast<int64_t>(items.size());
  };

  IterationRecord initial;
  initial.kind = "initial";
  fit(labeled_only, 0, std::move(initial));

  // Pseudo labels in the latest fit, indexed by pool position.
  std::vector<std::optional<RiskLabel>> assigned(pool);
  for (int64_t i = 1; i <= config.iterations; ++i) {
    if (config.mode == SelfTrainMode::kRefresh) {
      std::fill(assigned.begin(), assigned.end(), std::nullopt);
    }
    for (size_t k = 0; k < pool; ++k) {
      if (assigned[k]) continue;
      if (dists[k].Max() > config.threshold) assigned[k] = dists[k].Argmax();
    }
    IterationRecord record;
    record.kind = "pseudo";
    Corpus training = base;
    Corpus pseudo;
    for (size_t k = 0; k < pool; ++k) {
      if (!assigned[k]) continue;
      Post post = PseudoPost(unlabeled[k], *assigned[k]);
      ++record.pseudo_counts[Index(*assigned[k])];
      record.accepted_ids.push_back(post.id);
      training.Add(post);
      pseudo.Add(std::move(post));
    }
    record.accepted_count = static_cast<int64_t>(pseudo.size());
    fit(training, i, std::move(record));
    result.pseudo_labels = std::move(pseudo);
  }

  const bool any_unassigned =
      std::any_of(assigned.begin(), assigned.end(), [](const auto& a) { return !a; });
  if (config.final_full_assign && any_unassigned) {
    for (size_t k = 0; k < pool; ++k) {
      if (!assigned[k]) assigned[k] = dists[k].Argmax();
    }
    IterationRecord record;
    record.kind = "final_assign";
    Corpus training = base;
    Corpus pseudo;
    for (size_t k = 0; k < pool; ++k) {
      Post post = PseudoPost(unlabeled[k], *assigned[k]);
      ++record.pseudo_counts[Index(*assigned[k])];
      record.accepted_ids.push_back(post.id);
      training.Add(post);
      pseudo.Add(std::move(post));
    }
    record.accepted_count = static_cast<int64_t>(pseudo.size());
    fit(training, config.iterations + 1, std::move(record));
    result.pseudo_labels = std::move(pseudo);
  }
  return result;
}

}  // namespace risklens
