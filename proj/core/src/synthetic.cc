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

#include "risklens/synthetic.h"

#include <vector>

#include "risklens/error.h"
#include "risklens/rng.h"
#include "risklens/text.h"

namespace risklens {

std::string MarkerToken(RiskLabel label, int64_t j) {
  return "m" + std::to_string(Index(label)) + "x" + std::to_string(j);
}

bool ContainsMarker(const std::string& text, RiskLabel label) {
  const std::string prefix = "m" + std::to_string(Index(label)) + "x";
  for (const std::string& token : SplitOnSpaces(text)) {
    if (token.size() > prefix.size() && token.compare(0, prefix.size(), prefix) == 0) {
      return true;
    }
  }
  return false;
}

Corpus MakeSyntheticCorpus(const SyntheticSpec& spec, uint64_t seed) {
  if (spec.background_vocab_size <= 0 || spec.markers_per_class <= 0) {
    throw ConfigError("synthetic corpus needs a non-empty vocabulary");
  }
  if (spec.min_background_tokens < 0 ||
      spec.max_background_tokens < spec.min_background_tokens ||
      spec.markers_per_post < 1) {
    throw ConfigError("inconsistent synthetic token counts");
  }
  if (spec.max_background_tokens == 0) {
    throw ConfigError("synthetic posts need at least one background token");
  }
  if (!(spec.marker_probability >= 0.0 && spec.marker_probability <= 1.0)) {
    throw ConfigError("marker_probability must lie in [0, 1]");
  }
  for (int64_t size : spec.class_sizes) {
    if (size < 0) throw ConfigError("class sizes must be non-negative");
  }

  struct Draft {
    std::string text;
    RiskLabel label;
  };
  std::vector<Draft> drafts;
  Rng rng(DeriveSeed(seed, "synthetic.posts"));
  for (RiskLabel label : kAllLabels) {
    for (int64_t n = 0; n < spec.class_sizes[Index(label)]; ++n) {
      std::vector<std::string> tokens;
      int64_t length =
          rng.UniformInt(spec.min_background_tokens, spec.max_background_tokens);
      if (length == 0) length = 1;
      for (int64_t t = 0; t < length; ++t) {
        tokens.push_back(
            "w" + std::to_string(rng.UniformIndex(
                      static_cast<uint64_t>(spec.background_vocab_size))));
      }
      if (rng.Bernoulli(spec.marker_probability)) {
        for (int64_t m = 0; m < spec.markers_per_post; ++m) {
          const auto j = static_cast<int64_t>(
              rng.UniformIndex(static_cast<uint64_t>(spec.markers_per_class)));
          const auto at = rng.UniformIndex(tokens.size() + 1);
          tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at),
                        MarkerToken(label, j));
        }
      }
      drafts.push_back({JoinWithSpaces(tokens), label});
    }
  }
  Rng order_rng(DeriveSeed(seed, "synthetic.order"));
  order_rng.Shuffle(std::span<Draft>(drafts));

  Corpus corpus("synthetic:seed=" + std::to_string(seed));
  for (size_t i = 0; i < drafts.size(); ++i) {
    corpus.Add(Post{spec.id_prefix + "-" + std::to_string(i),
                    std::move(drafts[i].text), drafts[i].label,
                    Origin::kOriginal});
  }
  return corpus;
}

BenchmarkSplits MakeBenchmark(SyntheticSpec vocabulary,
                              const std::array<int64_t, kNumLabels>& labeled,
                              const std::array<int64_t, kNumLabels>& unlabeled,
                              const std::array<int64_t, kNumLabels>& test,
                              uint64_t seed) {
  BenchmarkSplits splits;
  vocabulary.class_sizes = labeled;
  vocabulary.id_prefix = "lab";
  splits.labeled =
      MakeSyntheticCorpus(vocabulary, DeriveSeed(seed, "benchmark.labeled"));
  vocabulary.class_sizes = unlabeled;
  vocabulary.id_prefix = "unl";
  splits.unlabeled_truth =
      MakeSyntheticCorpus(vocabulary, DeriveSeed(seed, "benchmark.unlabeled"));
  splits.unlabeled = StripLabels(splits.unlabeled_truth);
  vocabulary.class_sizes = test;
  vocabulary.id_prefix = "tst";
  splits.test = MakeSyntheticCorpus(vocabulary, DeriveSeed(seed, "benchmark.test"));
  return splits;
}

}  // namespace risklens
