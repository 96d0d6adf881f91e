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

#include "risklens/augment.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "risklens/rng.h"
#include "risklens/text.h"

namespace risklens {
namespace {

int64_t CappedCount(double cap_factor, int64_t original) {
  const double scaled = cap_factor * static_cast<double>(original);
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, scaled)) {
    return static_cast<int64_t>(nearest);
  }
  return static_cast<int64_t>(std::floor(scaled));
}

enum class Edit { kDelete, kDuplicate, kSwap, kSubstitute };

void ApplyEdit(Edit edit, std::vector<std::string>& tokens,
               const std::vector<std::string>& vocabulary, Rng& rng) {
  const size_t n = tokens.size();
  switch (edit) {
    case Edit::kDelete:
      if (n < 2) return;
      tokens.erase(tokens.begin() + static_cast<ptrdiff_t>(rng.UniformIndex(n)));
      return;
    case Edit::kDuplicate: {
      const size_t pos = rng.UniformIndex(n);
      tokens.insert(tokens.begin() + static_cast<ptrdiff_t>(pos) + 1, tokens[pos]);
      return;
    }
    case Edit::kSwap: {
      if (n < 2) return;
      const size_t pos = rng.UniformIndex(n - 1);
      std::swap(tokens[pos], tokens[pos + 1]);
      return;
    }
    case Edit::kSubstitute: {
      const size_t pos = rng.UniformIndex(n);
      tokens[pos] = vocabulary[rng.UniformIndex(vocabulary.size())];
      return;
    }
  }
}

}  // namespace

int64_t AugmentationPlan::total_target() const {
  int64_t total = 0;
  for (const ClassPlan& c : classes) total += c.target;
  return total;
}

int64_t AugmentationPlan::total_to_generate() const {
  int64_t total = 0;
  for (const ClassPlan& c : classes) total += c.to_generate;
  return total;
}

nlohmann::json AugmentationPlan::ToJson() const {
  nlohmann::json per_class = nlohmann::json::object();
  for (RiskLabel label : kAllLabels) {
    const ClassPlan& c = (*this)[label];
    per_class[std::string(LabelName(label))] = {
        {"original", c.original}, {"target", c.target}, {"to_generate", c.to_generate}};
  }
  return {{"cap_factor", cap_factor},
          {"classes", per_class},
          {"total_target", total_target()},
          {"total_to_generate", total_to_generate()}};
}

AugmentationPlan PlanAugmentation(const ClassCounts& counts, double cap_factor) {
  if (!(cap_factor >= 1.0) || !std::isfinite(cap_factor)) {
    throw ConfigError(fmt::format("cap_factor must be >= 1, got {}", cap_factor));
  }
  int64_t majority = 0;
  for (int64_t c : counts.counts) {
    if (c < 0) throw DataError("negative class count");
    majority = std::max(majority, c);
  }
  if (majority == 0) throw DataError("cannot plan augmentation: all class counts are zero");

  AugmentationPlan plan;
  plan.cap_factor = cap_factor;
  for (size_t i = 0; i < kNumLabels; ++i) {
    ClassPlan& c = plan.classes[i];
    c.original = counts.counts[i];
    c.target = c.original == majority
                   ? c.original
                   : std::max(c.original, std::min(majority, CappedCount(cap_factor, c.original)));
    c.to_generate = c.target - c.original;
  }
  return plan;
}

std::vector<std::string> NativeEditGenerator::Generate(RiskLabel label,
                                                       std::span<const Post> seeds,
                                                       int64_t n,
                                                       uint64_t seed) const {
  if (n < 1) throw ConfigError("generator needs n >= 1");
  if (config_.min_edits < 1 || config_.max_edits < config_.min_edits) {
    throw ConfigError("invalid edit count range");
  }
  std::vector<std::vector<std::string>> seed_tokens;
  std::unordered_set<std::string> seen;
  std::set<std::string> vocabulary_set;
  for (const Post& post : seeds) {
    auto tokens = SplitOnSpaces(post.text);
    if (tokens.empty()) continue;
    seen.insert(post.text);
    seen.insert(JoinWithSpaces(tokens));
    vocabulary_set.insert(tokens.begin(), tokens.end());
    seed_tokens.push_back(std::move(tokens));
  }
  if (seed_tokens.empty()) {
    throw GenerationError(
        fmt::format("no usable seed posts for class {}", LabelName(label)), 0);
  }
  const std::vector<std::string> vocabulary(vocabulary_set.begin(),
                                            vocabulary_set.end());

  Rng rng(seed);
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(n));
  const int64_t budget = config_.attempts_per_output * n;
  for (int64_t attempt = 0; attempt < budget && static_cast<int64_t>(out.size()) < n;
       ++attempt) {
    std::vector<std::string> tokens = seed_tokens[rng.UniformIndex(seed_tokens.size())];
    const int64_t edits = rng.UniformInt(config_.min_edits, config_.max_edits);
    for (int64_t e = 0; e < edits; ++e) {
      ApplyEdit(static_cast<Edit>(rng.UniformIndex(4)), tokens, vocabulary, rng);
    }
    std::string candidate = JoinWithSpaces(tokens);
    if (seen.insert(candidate).second) out.push_back(std::move(candidate));
  }
  if (static_cast<int64_t>(out.size()) < n) {
    throw GenerationError(
        fmt::format("native generator produced {} of {} distinct texts for class {} "
                    "within {} attempts",
                    out.size(), n, LabelName(label), budget),
        static_cast<int64_t>(out.size()));
  }
  return out;
}

Corpus ApplyPlan(const Corpus& corpus, const AugmentationPlan& plan,
                 const TextGenerator& generator, uint64_t seed) {
  const ClassCounts counts = CountClasses(corpus);
  for (RiskLabel label : kAllLabels) {
    if (counts[label] != plan[label].original) {
      throw DataError(fmt::format(
          "corpus has {} {} posts but the plan expects {}", counts[label],
          LabelName(label), plan[label].original));
    }
  }
  Corpus out = corpus;
  for (RiskLabel label : kAllLabels) {
    const int64_t quota = plan[label].to_generate;
    if (quota == 0) continue;
    std::vector<Post> seeds;
    for (const Post& post : corpus) {
      if (post.label == label) seeds.push_back(post);
    }
    const std::string context =
        fmt::format("generating {} {} posts with the {} generator: ", quota,
                    LabelName(label), generator.name());
    std::vector<std::string> texts;
    const uint64_t class_seed = DeriveSeed(seed, "augment.generate", Index(label));
    try {
      texts = generator.Generate(label, seeds, quota, class_seed);
    } catch (const GenerationError& e) {
      throw GenerationError(context + e.what(), e.achieved());
    } catch (const TransportError& e) {
      throw TransportError(context + e.what());
    } catch (const RemoteError& e) {
      throw RemoteError(e.status(), e.code(), context + e.remote_message());
    }
    if (static_cast<int64_t>(texts.size()) != quota) {
      throw GenerationError(
          fmt::format("{}generator returned {} texts", context, texts.size()),
          static_cast<int64_t>(texts.size()));
    }
    std::unordered_set<std::string> distinct;
    for (size_t k = 0; k < texts.size(); ++k) {
      if (IsBlank(texts[k])) throw DataError(context + "generator returned an empty text");
      if (!distinct.insert(texts[k]).second) {
        throw DataError(context + "generator returned duplicate texts");
      }
      out.Add(Post{fmt::format("syn-{}-{}", LabelName(label), k), texts[k], label,
                   Origin::kSynthetic});
    }
  }
  return out;
}

}  // namespace risklens
