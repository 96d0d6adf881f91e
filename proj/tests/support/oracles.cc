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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>

namespace risklens::testing {

ScoreOracle BruteForceScores(const std::vector<RiskLabel>& ref,
                             const std::vector<RiskLabel>& pred) {
  ScoreOracle o;
  const size_t n = ref.size();
  int64_t correct = 0, represented = 0;
  for (size_t i = 0; i < n; ++i) {
    correct += ref[i] == pred[i];
    ++o.cells[Index(ref[i])][Index(pred[i])];
  }
  for (RiskLabel c : kAllLabels) {
    int64_t tp = 0, fp = 0, fn = 0, support = 0;
    for (size_t i = 0; i < n; ++i) {
      if (ref[i] == c && pred[i] == c) ++tp;
      if (ref[i] != c && pred[i] == c) ++fp;
      if (ref[i] == c && pred[i] != c) ++fn;
      if (ref[i] == c) ++support;
    }
    const size_t k = Index(c);
    o.precision[k] = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    o.recall[k] = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double s = o.precision[k] + o.recall[k];
    o.f1[k] = s == 0.0 ? 0.0 : 2.0 * o.precision[k] * o.recall[k] / s;
    if (support > 0) {
      o.weighted_f1 += static_cast<double>(support) / static_cast<double>(n) * o.f1[k];
      o.macro_f1 += o.f1[k];
      ++represented;
    }
  }
  o.macro_f1 /= static_cast<double>(represented);
  o.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return o;
}

double RelativeError(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

FeatureVector RandomSparse(Rng& rng, size_t dim) {
  std::vector<uint32_t> idx;
  std::vector<double> val;
  for (uint32_t i = 0; i < dim; ++i) {
    if (rng.Bernoulli(0.5)) {
      idx.push_back(i);
      val.push_back(rng.Uniform01() * 2.0 - 1.0);
    }
  }
  return FeatureVector::Sparse(dim, idx, val);
}

double WorstGradientError(Rng& rng, LossKind loss) {
  const size_t dim = 3 + rng.UniformIndex(6);
  LinearModel model = LinearModel::Zeros(dim, loss);
  for (double& w : model.weights) w = rng.Uniform01() * 2.0 - 1.0;
  for (double& b : model.bias) b = rng.Uniform01() - 0.5;
  std::vector<FeatureVector> xs;
  std::vector<RiskLabel> ys;
  const size_t n = 1 + rng.UniformIndex(6);
  for (size_t i = 0; i < n; ++i) {
    xs.push_back(RandomSparse(rng, dim));
    ys.push_back(LabelAt(rng.UniformIndex(kNumLabels)));
  }
  std::vector<size_t> batch(n);
  for (size_t i = 0; i < n; ++i) batch[i] = i;

  Gradient g;
  LossAndGradient(model, xs, ys, batch, &g);
  const double h = 1e-5;
  auto numeric = [&](auto&& perturb) {
    LinearModel plus = model, minus = model;
    perturb(plus, h);
    perturb(minus, -h);
    return (LossAndGradient(plus, xs, ys, batch, nullptr) -
            LossAndGradient(minus, xs, ys, batch, nullptr)) /
           (2 * h);
  };
  double worst = 0.0;
  for (size_t k = 0; k < model.weights.size(); ++k) {
    const double d = numeric([k](LinearModel& m, double step) { m.weights[k] += step; });
    worst = std::max(worst, RelativeError(g.weights[k], d));
  }
  for (size_t c = 0; c < kNumLabels; ++c) {
    const double d = numeric([c](LinearModel& m, double step) { m.bias[c] += step; });
    worst = std::max(worst, RelativeError(g.bias[c], d));
  }
  return worst;
}

}  // namespace risklens::testing
