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

#ifndef RISKLENS_LABEL_H_
#define RISKLENS_LABEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace risklens {

// The four-level risk taxonomy. The enumerator order is the canonical order
// used for tie-breaking, matrix axes and every per-class array.
enum class RiskLabel : uint8_t {
  kIndicator = 0,
  kIdeation = 1,
  kBehavior = 2,
  kAttempt = 3,
};

inline constexpr size_t kNumLabels = 4;

inline constexpr std::array<RiskLabel, kNumLabels> kAllLabels = {
    RiskLabel::kIndicator, RiskLabel::kIdeation, RiskLabel::kBehavior,
    RiskLabel::kAttempt};

constexpr size_t Index(RiskLabel label) { return static_cast<size_t>(label); }

constexpr RiskLabel LabelAt(size_t index) {
  return static_cast<RiskLabel>(index);
}

// Canonical lowercase name ("indicator", "ideation", "behavior", "attempt").
std::string_view LabelName(RiskLabel label);

// Case-insensitive; accepts "behaviour" for kBehavior. Surrounding
// whitespace is ignored.
std::optional<RiskLabel> ParseLabel(std::string_view text);

// Same as ParseLabel but throws DataError naming the bad string.
RiskLabel ParseLabelOrThrow(std::string_view text);

}  // namespace risklens

#endif  // RISKLENS_LABEL_H_
