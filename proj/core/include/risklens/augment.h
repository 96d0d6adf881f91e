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

#ifndef RISKLENS_AUGMENT_H_
#define RISKLENS_AUGMENT_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/corpus.h"
#include "risklens/error.h"
#include "risklens/label.h"

namespace risklens {

struct ClassPlan {
  int64_t original = 0;
  int64_t target = 0;
  int64_t to_generate = 0;

  bool operator==(const ClassPlan&) const = default;
};

struct AugmentationPlan {
  std::array<ClassPlan, kNumLabels> classes{};
  double cap_factor = 2.0;

  const ClassPlan& operator[](RiskLabel label) const {
    return classes[Index(label)];
  }
  int64_t total_target() const;
  int64_t total_to_generate() const;
  bool nothing_to_do() const { return total_to_generate() == 0; }

  nlohmann::json ToJson() const;
};

// Majority classes keep their count. Every other class is raised to
// min(majority, floor(cap_factor * original)), never below original.
// cap_factor * original is snapped to the nearest integer when it lies
// within 1e-9 of one, so decimal caps such as 1.15 floor as written.
// Throws ConfigError for cap_factor < 1 and DataError when all counts are 0.
AugmentationPlan PlanAugmentation(const ClassCounts& counts,
                                  double cap_factor = 2.0);

// The generator could not produce the requested number of texts.
class GenerationError : public DataError {
 public:
  GenerationError(const std::string& what, int64_t achieved)
      : DataError(what), achieved_(achieved) {}
  int64_t achieved() const { return achieved_; }

 private:
  int64_t achieved_;
};

// Produces n distinct non-empty texts for a class from its seed posts.
// Deterministic given (label, seeds, n, seed).
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::vector<std::string> Generate(RiskLabel label,
                                            std::span<const Post> seeds,
                                            int64_t n, uint64_t seed) const = 0;
  virtual std::string name() const = 0;
};

struct NativeGeneratorConfig {
  int64_t min_edits = 1;
  int64_t max_edits = 3;
  // Attempts allowed per requested output before giving up.
  int64_t attempts_per_output = 50;
};

// Samples a seed post and applies 1..3 random token edits: deletion,
// duplication, adjacent swap, or substitution by a token from the seeds'
// own vocabulary. Tokens are space-separated pieces of the seed text.
// Outputs equal to a seed or to an earlier output are discarded.
class NativeEditGenerator : public TextGenerator {
 public:
  NativeEditGenerator() = default;
  explicit NativeEditGenerator(NativeGeneratorConfig config) : config_(config) {}

  std::vector<std::string> Generate(RiskLabel label, std::span<const Post> seeds,
                                    int64_t n, uint64_t seed) const override;
  std::string name() const override { return "native"; }

 private:
  NativeGeneratorConfig config_;
};

// Appends to_generate synthetic posts per class ("syn-<class>-<k>", origin
// synthetic) after the original posts. Seeds for a class are its labeled
// posts in corpus order; the generator seed for class c is
// DeriveSeed(seed, "augment.generate", c). Throws DataError when the corpus
// counts differ from plan.original or the generator returns the wrong
// number of texts; generator errors are rethrown with the class and quota.
Corpus ApplyPlan(const Corpus& corpus, const AugmentationPlan& plan,
                 const TextGenerator& generator, uint64_t seed);

}  // namespace risklens

#endif  // RISKLENS_AUGMENT_H_
