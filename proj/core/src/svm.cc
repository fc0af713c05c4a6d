// Copyright 2026 The pointloc Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pointloc/svm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointloc/error.h"
#include "pointloc/random.h"

namespace pointloc {

FeatureMatrix::FeatureMatrix(size_t rows, size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0f) {}

FeatureMatrix::FeatureMatrix(size_t rows, size_t dim, std::vector<float> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (values_.size() != rows_ * dim_)
    throw Error("feature matrix holds " + std::to_string(values_.size()) +
                " values, expected " + std::to_string(rows_ * dim_));
}

void FeatureMatrix::normalize_rows() {
  for (size_t i = 0; i < rows_; ++i) {
    std::span<float> r = row(i);
    double sq = 0.0;
    for (float v : r) sq += static_cast<double>(v) * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0 || std::abs(norm - 1.0) <= 1e-6) continue;
    for (float& v : r) v = static_cast<float>(v / norm);
  }
}

FeatureMatrix FeatureMatrix::select(std::span<const size_t> indices) const {
  FeatureMatrix out(indices.size(), dim_);
  for (size_t i = 0; i < indices.size(); ++i) {
    std::span<const float> src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

double LinearModel::decision(std::span<const float> x) const {
  double sum = bias;
  const size_t n = std::min(x.size(), weights.size());
  for (size_t i = 0; i < n; ++i) sum += weights[i] * x[i];
  return sum;
}

namespace {

size_t check_dims(std::span<const std::span<const float>> positives,
                  std::span<const std::span<const float>> negatives) {
  if (positives.empty()) throw Error("svm training needs at least one positive");
  if (negatives.empty()) throw Error("svm training needs at least one negative");
  const size_t dim = positives.front().size();
  auto same = [dim](std::span<const float> x) { return x.size() == dim; };
  if (!std::all_of(positives.begin(), positives.end(), same) ||
      !std::all_of(negatives.begin(), negatives.end(), same)) {
    throw Error("svm training samples differ in feature dimension");
  }
  return dim;
}

}  // namespace

LinearModel train_linear_svm(std::span<const std::span<const float>> positives,
                             std::span<const std::span<const float>> negatives,
                             const SvmOptions& options, uint64_t seed) {
  const size_t dim = check_dims(positives, negatives);
  if (!(options.lambda_reg > 0.0)) throw Error("lambda_reg must be positive");

  const size_t n = positives.size() + negatives.size();
  auto sample = [&](size_t i) {
    return i < positives.size() ? positives[i] : negatives[i - positives.size()];
  };
  auto label = [&](size_t i) { return i < positives.size() ? 1.0 : -1.0; };

  // Dual coordinate descent for the hinge loss with box constraint
  // 0 <= alpha_i <= lambda_reg. The bias is the last weight, on a constant
  // feature.
  const double upper = options.lambda_reg;
  const double bias_feature = options.bias_feature;
  std::vector<double> w(dim + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (size_t i = 0; i < n; ++i) {
    double sq = bias_feature * bias_feature;
    for (float v : sample(i)) sq += static_cast<double>(v) * v;
    qii[i] = sq;
  }

  Rng rng(seed);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t i : order) {
      std::span<const float> x = sample(i);
      const double y = label(i);
      double wx = w[dim] * bias_feature;
      for (size_t d = 0; d < dim; ++d) wx += w[d] * x[d];
      const double grad = y * wx - 1.0;
      double projected = grad;
      if (alpha[i] == 0.0) {
        projected = std::min(grad, 0.0);
      } else if (alpha[i] == upper) {
        projected = std::max(grad, 0.0);
      }
      if (projected == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - grad / qii[i], 0.0, upper);
      const double step = (alpha[i] - old) * y;
      for (size_t d = 0; d < dim; ++d) w[d] += step * x[d];
      w[dim] += step * bias_feature;
    }
  }

  LinearModel model;
  model.bias = w[dim] * bias_feature;
  w.pop_back();
  model.weights = std::move(w);
  return model;
}

double hinge_objective(const LinearModel& model,
                       std::span<const std::span<const float>> positives,
                       std::span<const std::span<const float>> negatives,
                       double lambda_reg) {
  double reg = 0.0;
  for (double v : model.weights) reg += v * v;
  double loss = 0.0;
  for (auto x : positives) loss += std::max(0.0, 1.0 - model.decision(x));
  for (auto x : negatives) loss += std::max(0.0, 1.0 + model.decision(x));
  return 0.5 * reg + lambda_reg * loss;
}

}  // namespace pointloc
