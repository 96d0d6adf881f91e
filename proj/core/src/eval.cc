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

#include "risklens/eval.h"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "risklens/csv.h"
#include "risklens/error.h"

namespace risklens {
namespace {

double Ratio(int64_t num, int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Shortest round-trip form with a decimal point ("1.0", "0.7866666666666666").
std::string FullPrecision(double v) { return nlohmann::json(v).dump(); }

std::string MatrixText(const ConfusionMatrix& m) {
  std::string out = fmt::format("{:<12}", "ref \\ pred");
  for (RiskLabel p : kAllLabels) out += fmt::format(" {:>10}", LabelName(p));
  out += '\n';
  for (RiskLabel r : kAllLabels) {
    out += fmt::format("{:<12}", LabelName(r));
    for (RiskLabel p : kAllLabels) out += fmt::format(" {:>10}", m(r, p));
    out += '\n';
  }
  return out;
}

std::string MetricsText(const MetricsReport& r) {
  std::string out = fmt::format("{:<12} {:>9} {:>9} {:>9} {:>9}\n", "class", "precision",
                                "recall", "f1", "support");
  for (RiskLabel label : kAllLabels) {
    const ClassMetrics& c = r.classes[Index(label)];
    out += fmt::format("{:<12} {:>9.4f} {:>9.4f} {:>9.4f} {:>9}\n", LabelName(label),
                       c.precision, c.recall, c.f1, c.support);
  }
  out += '\n';
  out += fmt::format("{:<12} {:>9.4f}\n", "weighted_f1", r.weighted_f1);
  out += fmt::format("{:<12} {:>9.4f}\n", "macro_f1", r.macro_f1);
  out += fmt::format("{:<12} {:>9.4f}\n", "accuracy", r.accuracy);
  out += fmt::format("{:<12} {:>9}\n", "total", r.total);
  out += '\n';
  out += MatrixText(r.matrix);
  return out;
}

std::string MetricsCsv(const MetricsReport& r) {
  std::string out = "class,precision,recall,f1,support\n";
  for (RiskLabel label : kAllLabels) {
    const ClassMetrics& c = r.classes[Index(label)];
    out += fmt::format("{},{},{},{},{}\n", LabelName(label), FullPrecision(c.precision),
                       FullPrecision(c.recall), FullPrecision(c.f1), c.support);
  }
  out += fmt::format("weighted_f1,{}\n", FullPrecision(r.weighted_f1));
  out += fmt::format("macro_f1,{}\n", FullPrecision(r.macro_f1));
  out += fmt::format("accuracy,{}\n", FullPrecision(r.accuracy));
  out += fmt::format("total,{}\n", r.total);
  return out;
}

std::string HeatmapSvg(const ConfusionMatrix& m, const std::string& title) {
  constexpr int kCell = 70;
  constexpr int kLeft = 110;
  constexpr int kTop = 70;
  const int width = kLeft + kCell * static_cast<int>(kNumLabels) + 20;
  const int height = kTop + kCell * static_cast<int>(kNumLabels) + 40;
  int64_t peak = 0;
  for (const auto& row : m.cells) {
    for (int64_t v : row) peak = std::max(peak, v);
  }
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
  out += fmt::format("<text x=\"{}\" y=\"20\" font-size=\"14\">{}</text>\n", kLeft, title);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">predicted</text>\n",
                     kLeft + kCell * 2, kTop - 28);
  out += fmt::format("<text x=\"12\" y=\"{}\">reference</text>\n", kTop - 8);
  for (size_t c = 0; c < kNumLabels; ++c) {
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                       kLeft + kCell * static_cast<int>(c) + kCell / 2, kTop - 8,
                       LabelName(LabelAt(c)));
  }
  for (size_t r = 0; r < kNumLabels; ++r) {
    const int y = kTop + kCell * static_cast<int>(r);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLeft - 8,
                       y + kCell / 2 + 4, LabelName(LabelAt(r)));
    for (size_t c = 0; c < kNumLabels; ++c) {
      const int64_t v = m.cells[r][c];
      const double shade = peak == 0 ? 0.0 : static_cast<double>(v) / static_cast<double>(peak);
      const int red = static_cast<int>(255.0 - shade * (255.0 - 33.0));
      const int green = static_cast<int>(255.0 - shade * (255.0 - 102.0));
      const int blue = static_cast<int>(255.0 - shade * (255.0 - 172.0));
      const int x = kLeft + kCell * static_cast<int>(c);
      out += fmt::format(
          "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#{:02x}{:02x}{:02x}\" "
          "stroke=\"#888888\"/>\n",
          x, y, kCell, kCell, red, green, blue);
      out += fmt::format(
          "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"{}\">{}</text>\n",
          x + kCell / 2, y + kCell / 2 + 4, shade > 0.55 ? "#ffffff" : "#000000", v);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (const auto& row : cells) {
    for (int64_t v : row) t += v;
  }
  return t;
}

int64_t ConfusionMatrix::trace() const {
  int64_t t = 0;
  for (size_t i = 0; i < kNumLabels; ++i) t += cells[i][i];
  return t;
}

int64_t ConfusionMatrix::row_sum(size_t r) const {
  int64_t t = 0;
  for (int64_t v : cells[r]) t += v;
  return t;
}

int64_t ConfusionMatrix::column_sum(size_t c) const {
  int64_t t = 0;
  for (const auto& row : cells) t += row[c];
  return t;
}

nlohmann::json ConfusionMatrix::ToJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : cells) rows.push_back(row);
  return {{"labels", {"indicator", "ideation", "behavior", "attempt"}}, {"rows", rows}};
}

ConfusionMatrix ComputeConfusionMatrix(std::span<const RiskLabel> reference,
                                       std::span<const RiskLabel> predicted) {
  if (reference.size() != predicted.size()) {
    throw EvalInputError(fmt::format("{} reference labels but {} predictions",
                                     reference.size(), predicted.size()));
  }
  if (reference.empty()) throw EvalInputError("nothing to evaluate");
  ConfusionMatrix m;
  for (size_t i = 0; i < reference.size(); ++i) {
    ++m.cells[Index(reference[i])][Index(predicted[i])];
  }
  return m;
}

MetricsReport ComputeMetrics(const ConfusionMatrix& matrix) {
  MetricsReport r;
  r.matrix = matrix;
  r.total = matrix.total();
  if (r.total <= 0) throw EvalInputError("confusion matrix is empty");
  int64_t represented = 0;
  double f1_sum = 0.0;
  double weighted_sum = 0.0;
  for (size_t c = 0; c < kNumLabels; ++c) {
    ClassMetrics& m = r.classes[c];
    const int64_t tp = matrix.cells[c][c];
    m.support = matrix.row_sum(c);
    m.precision = Ratio(tp, matrix.column_sum(c));
    m.recall = Ratio(tp, m.support);
    const double denom = m.precision + m.recall;
    m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
    if (m.support > 0) {
      ++represented;
      f1_sum += m.f1;
      weighted_sum += static_cast<double>(m.support) * m.f1;
    }
  }
  r.weighted_f1 = weighted_sum / static_cast<double>(r.total);
  r.macro_f1 = f1_sum / static_cast<double>(represented);
  r.accuracy = Ratio(matrix.trace(), r.total);
  return r;
}

nlohmann::json MetricsReport::ToJson() const {
  nlohmann::json per_class = nlohmann::json::object();
  for (RiskLabel label : kAllLabels) {
    const ClassMetrics& c = classes[Index(label)];
    per_class[std::string(LabelName(label))] = {{"precision", c.precision},
                                                {"recall", c.recall},
                                                {"f1", c.f1},
                                                {"support", c.support}};
  }
  return {{"classes", per_class},   {"weighted_f1", weighted_f1},
          {"macro_f1", macro_f1},   {"accuracy", accuracy},
          {"total", total},         {"confusion_matrix", matrix.ToJson()}};
}

AgreementReport ComputeAgreement(
    const Corpus& reference, const std::map<std::string, RiskLabel, std::less<>>& predictions) {
  std::vector<RiskLabel> ref;
  std::vector<RiskLabel> pred;
  for (const Post& post : reference) {
    if (!post.label) {
      throw EvalInputError("reference post '" + post.id + "' has no label");
    }
    auto it = predictions.find(post.id);
    if (it == predictions.end()) {
      throw EvalInputError("no prediction for reference id '" + post.id + "'");
    }
    ref.push_back(*post.label);
    pred.push_back(it->second);
  }
  AgreementReport report;
  report.matrix = ComputeConfusionMatrix(ref, pred);
  report.metrics = ComputeMetrics(report.matrix);
  report.compared = report.matrix.total();
  report.agreement_rate = Ratio(report.matrix.trace(), report.compared);
  for (size_t r = 0; r < kNumLabels; ++r) {
    const int64_t row = report.matrix.row_sum(r);
    const int64_t off = row - report.matrix.cells[r][r];
    if (off == 0) continue;
    std::string detail;
    for (size_t c = 0; c < kNumLabels; ++c) {
      if (c == r || report.matrix.cells[r][c] == 0) continue;
      if (!detail.empty()) detail += ", ";
      detail += fmt::format("{} {}", LabelName(LabelAt(c)), report.matrix.cells[r][c]);
    }
    report.notes.push_back(fmt::format("{}: {} of {} predicted otherwise ({})",
                                       LabelName(LabelAt(r)), off, row, detail));
  }
  return report;
}

nlohmann::json AgreementReport::ToJson() const {
  return {{"agreement_rate", agreement_rate},
          {"compared", compared},
          {"confusion_matrix", matrix.ToJson()},
          {"metrics", metrics.ToJson()},
          {"notes", notes}};
}

std::optional<ReportFormat> ParseReportFormat(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "svg") return ReportFormat::kSvg;
  return std::nullopt;
}

std::string_view ReportFormatExtension(ReportFormat format) {
  switch (format) {
    case ReportFormat::kText:
      return ".txt";
    case ReportFormat::kCsv:
      return ".csv";
    case ReportFormat::kJson:
      return ".json";
    case ReportFormat::kSvg:
      return ".svg";
  }
  return "";
}

std::string RenderReport(const MetricsReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kText:
      return MetricsText(report);
    case ReportFormat::kCsv:
      return MetricsCsv(report);
    case ReportFormat::kJson:
      return report.ToJson().dump(2) + "\n";
    case ReportFormat::kSvg:
      return HeatmapSvg(report.matrix,
                        fmt::format("weighted F1 {:.4f}, accuracy {:.4f}",
                                    report.weighted_f1, report.accuracy));
  }
  return {};
}

std::string RenderReport(const AgreementReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kText: {
      std::string out = fmt::format("{:<12} {:>9.4f}\n{:<12} {:>9}\n\n", "agreement",
                                    report.agreement_rate, "compared", report.compared);
      out += MetricsText(report.metrics);
      if (!report.notes.empty()) out += '\n';
      for (const std::string& note : report.notes) out += note + '\n';
      return out;
    }
    case ReportFormat::kCsv:
      return MetricsCsv(report.metrics) +
             fmt::format("agreement_rate,{}\n", FullPrecision(report.agreement_rate));
    case ReportFormat::kJson:
      return report.ToJson().dump(2) + "\n";
    case ReportFormat::kSvg:
      return HeatmapSvg(report.matrix,
                        fmt::format("agreement {:.4f} over {} posts", report.agreement_rate,
                                    report.compared));
  }
  return {};
}

std::map<std::string, RiskLabel, std::less<>> LoadLabelFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open label file " + path.string());
  const std::string source = path.string();
  std::vector<csv::Record> records = csv::ReadAll(in, source);
  if (records.empty()) throw DataError(source + ": empty label file");
  if (records[0].fields != std::vector<std::string>{"id", "label"}) {
    throw RecordError(source, records[0].line, "expected header id,label");
  }
  std::map<std::string, RiskLabel, std::less<>> labels;
  for (size_t i = 1; i < records.size(); ++i) {
    const csv::Record& r = records[i];
    if (r.fields.size() != 2) throw RecordError(source, r.line, "expected 2 fields");
    auto label = ParseLabel(r.fields[1]);
    if (!label) throw RecordError(source, r.line, "unknown label '" + r.fields[1] + "'");
    if (!labels.emplace(r.fields[0], *label).second) {
      throw RecordError(source, r.line, "duplicate id '" + r.fields[0] + "'");
    }
  }
  return labels;
}

void WriteLabelFile(const std::vector<std::pair<std::string, RiskLabel>>& labels,
                    std::ostream& out) {
  csv::WriteRow(out, {"id", "label"});
  for (const auto& [id, label] : labels) csv::WriteRow(out, {id, std::string(LabelName(label))});
}

}  // namespace risklens
