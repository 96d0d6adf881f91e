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

#ifndef RISKLENS_SYNTHETIC_H_
#define RISKLENS_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <string>

#include "risklens/corpus.h"
#include "risklens/label.h"

namespace risklens {

// Class-marker Bernoulli mixture. Every post carries a run of background
// tokens drawn uniformly from a shared vocabulary ("w0", "w1", ...). With
// probability marker_probability it also carries markers_per_post tokens
// drawn uniformly from its class's marker set ("m<class>x<j>"), inserted at
// random positions. Posts without markers carry no class signal at all.
struct SyntheticSpec {
  std::array<int64_t, kNumLabels> class_sizes{};
  int64_t background_vocab_size = 100;
  int64_t markers_per_class = 40;
  double marker_probability = 0.7;
  int64_t markers_per_post = 2;
  int64_t min_background_tokens = 6;
  int64_t max_background_tokens = 12;
  std::string id_prefix = "s";
};

// Deterministic given (spec, seed). Posts are shuffled so classes are
// interleaved; ids are "<prefix>-<position>". Throws ConfigError on an empty
// vocabulary or inconsistent parameters.
Corpus MakeSyntheticCorpus(const SyntheticSpec& spec, uint64_t seed);

// Marker token j of a class, as emitted by MakeSyntheticCorpus.
std::string MarkerToken(RiskLabel label, int64_t j);

// True when the text contains at least one marker of `label`.
bool ContainsMarker(const std::string& text, RiskLabel label);

// Labeled / unlabeled / test splits drawn from one vocabulary with
// independent seeds. `unlabeled` has its labels stripped; `unlabeled_truth`
// keeps them for scoring pseudo-labels.
struct BenchmarkSplits {
  Corpus labeled;
  Corpus unlabeled;
  Corpus unlabeled_truth;
  Corpus test;
};

BenchmarkSplits MakeBenchmark(SyntheticSpec vocabulary,
                              const std::array<int64_t, kNumLabels>& labeled,
                              const std::array<int64_t, kNumLabels>& unlabeled,
                              const std::array<int64_t, kNumLabels>& test,
                              uint64_t seed);

}  // namespace risklens

#endif  // RISKLENS_SYNTHETIC_H_
