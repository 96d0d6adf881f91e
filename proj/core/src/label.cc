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

#include "risklens/label.h"

#include <string>

#include "risklens/error.h"

namespace risklens {
namespace {

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    char ca = a[i];
    if (ca >= 'A' && ca <= 'Z') ca = static_cast<char>(ca - 'A' + 'a');
    if (ca != b[i]) return false;
  }
  return true;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view LabelName(RiskLabel label) {
  switch (label) {
    case RiskLabel::kIndicator:
      return "indicator";
    case RiskLabel::kIdeation:
      return "ideation";
    case RiskLabel::kBehavior:
      return "behavior";
    case RiskLabel::kAttempt:
      return "attempt";
  }
  return "unknown";
}

std::optional<RiskLabel> ParseLabel(std::string_view text) {
  text = Trim(text);
  for (RiskLabel label : kAllLabels) {
    if (EqualsIgnoreCase(text, LabelName(label))) return label;
  }
  if (EqualsIgnoreCase(text, "behaviour")) return RiskLabel::kBehavior;
  return std::nullopt;
}

RiskLabel ParseLabelOrThrow(std::string_view text) {
  if (auto label = ParseLabel(text)) return *label;
  throw DataError("unknown label '" + std::string(text) + "'");
}

}  // namespace risklens
