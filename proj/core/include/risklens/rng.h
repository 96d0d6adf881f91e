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

#ifndef RISKLENS_RNG_H_
#define RISKLENS_RNG_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace risklens {

// Derives an independent seed for a named component. Every seeded piece of
// the toolkit draws from DeriveSeed(top_level_seed, "<component>", index), so
// reruns of one stage see the same stream regardless of what ran before it.
uint64_t DeriveSeed(uint64_t seed, std::string_view component,
                    uint64_t index = 0);

// Counter-based generator (SplitMix64 over an incrementing counter). The
// output sequence is fully specified here, unlike the std:: distributions,
// so results match across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : counter_(seed) {}

  uint64_t Next();

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform integer in [0, n). n must be > 0.
  uint64_t UniformIndex(uint64_t n);

  // Uniform integer in [lo, hi].
  int64_t UniformInt(int64_t lo, int64_t hi);

  bool Bernoulli(double p) { return Uniform01() < p; }

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformIndex(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  uint64_t counter_;
};

}  // namespace risklens

#endif  // RISKLENS_RNG_H_
