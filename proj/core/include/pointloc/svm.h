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

#ifndef POINTLOC_SVM_H_
#define POINTLOC_SVM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pointloc {

// Row-major matrix of per-proposal features, one row per proposal.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(size_t rows, size_t dim);
  FeatureMatrix(size_t rows, size_t dim, std::vector<float> values);

  size_t rows() const { return rows_; }
  size_t dim() const { return dim_; }
  std::span<const float> row(size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<float> row(size_t i) { return {values_.data() + i * dim_, dim_}; }
  const std::vector<float>& values() const { return values_; }

  // Rescales every row to unit L2 norm. Rows whose norm is already within
  // 1e-6 of one are left untouched so that reloading stays bit-exact; all-zero
  // rows stay zero.
  void normalize_rows();

  // New matrix with the given rows, in the given order.
  FeatureMatrix select(std::span<const size_t> indices) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  size_t rows_ = 0;
  size_t dim_ = 0;
  std::vector<float> values_;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  static LinearModel zero(size_t dim) { return {std::vector<double>(dim), 0.0}; }
  size_t dim() const { return weights.size(); }
  double decision(std::span<const float> x) const;

  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct SvmOptions {
  // Weight of the summed hinge losses against 0.5 * ||w||^2.
  double lambda_reg = 10.0;
  int epochs = 60;
  // The bias is learned as the weight of a constant feature of this value.
  double bias_feature = 1.0;
};

// Deterministic L2-regularized hinge-loss solver (dual coordinate descent,
// seeded visiting order, fixed epoch budget). Identical inputs and seed give
// bit-identical models. Throws pointloc::Error on an empty class or on a
// dimension mismatch.
LinearModel train_linear_svm(std::span<const std::span<const float>> positives,
                             std::span<const std::span<const float>> negatives,
                             const SvmOptions& options, uint64_t seed);

// 0.5 * ||w||^2 + lambda_reg * sum of hinge losses (positives labelled +1).
double hinge_objective(const LinearModel& model,
                       std::span<const std::span<const float>> positives,
                       std::span<const std::span<const float>> negatives,
                       double lambda_reg);

}  // namespace pointloc

#endif  // POINTLOC_SVM_H_
