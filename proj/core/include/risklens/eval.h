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

#ifndef RISKLENS_EVAL_H_
#define RISKLENS_EVAL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "risklens/corpus.h"
#include "risklens/label.h"

namespace risklens {

// Rows are the reference class, columns the predicted class.
struct ConfusionMatrix {
  std::array<std::array<int64_t, kNumLabels>, kNumLabels> cells{};

  int64_t operator()(RiskLabel reference, RiskLabel predicted) const {
    return cells[Index(reference)][Index(predicted)];
  }
  int64_t total() const;
  int64_t trace() const;
  int64_t row_sum(size_t r) const;
  int64_t column_sum(size_t c) const;

  nlohmann::json ToJson() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

// Throws EvalInputError on empty input or different lengths.
ConfusionMatrix ComputeConfusionMatrix(std::span<const RiskLabel> reference,
                                       std::span<const RiskLabel> predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
};

struct MetricsReport {
  std::array<ClassMetrics, kNumLabels> classes{};
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  int64_t total = 0;
  ConfusionMatrix matrix;

  nlohmann::json ToJson() const;
};

// Undefined precision, recall or F1 count as 0. Weighted and macro F1
// average over classes with non-zero reference support only. Throws
// EvalInputError on an empty matrix.
MetricsReport ComputeMetrics(const ConfusionMatrix& matrix);

struct AgreementReport {
  double agreement_rate = 0.0;
  int64_t compared = 0;
  ConfusionMatrix matrix;
  MetricsReport metrics;
  // One line per reference class with disagreements, e.g.
  // "ideation: 3 of 10 predicted otherwise (behavior 2, attempt 1)".
  std::vector<std::string> notes;

  nlohmann::json ToJson() const;
};

// Pairs by id. Reference posts must be labeled; prediction ids absent from
// the reference are ignored. Throws EvalInputError naming the first
// reference id that has no prediction.
AgreementReport ComputeAgreement(const Corpus& reference,
                                 const std::map<std::string, RiskLabel, std::less<>>& predictions);

enum class ReportFormat { kText, kCsv, kJson, kSvg };

std::optional<ReportFormat> ParseReportFormat(std::string_view name);
std::string_view ReportFormatExtension(ReportFormat format);

// text: aligned table, 4 decimals. csv: header class,precision,recall,f1,
// support, one row per class, then name,value summary rows at full
// precision. json: sorted keys, byte-stable. svg: standalone 4x4 heatmap of
// the confusion matrix.
std::string RenderReport(const MetricsReport& report, ReportFormat format);
std::string RenderReport(const AgreementReport& report, ReportFormat format);

// Label files: CSV with header id,label.
std::map<std::string, RiskLabel, std::less<>> LoadLabelFile(const std::filesystem::path& path);
void WriteLabelFile(const std::vector<std::pair<std::string, RiskLabel>>& labels,
                    std::ostream& out);

}  // namespace risklens

#endif  // RISKLENS_EVAL_H_
