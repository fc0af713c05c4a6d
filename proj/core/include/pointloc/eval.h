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

#ifndef POINTLOC_EVAL_H_
#define POINTLOC_EVAL_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/video.h"

namespace pointloc {

struct Detection {
  std::string video_id;
  int action = 0;
  double score = 0.0;
  Tube tube;
  size_t proposal = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Ground-truth instances per test video. Every evaluated video must be
// present, even with an empty instance list.
struct GroundTruth {
  std::map<std::string, std::vector<GroundTruthInstance>, std::less<>> videos;

  static GroundTruth from_videos(std::span<const Video* const> videos);
  size_t instance_count(int action) const;
  const std::vector<GroundTruthInstance>& at(std::string_view video_id) const;
};

struct LabeledDetection {
  std::string video_id;
  double score = 0.0;
  bool positive = false;
};

inline const std::vector<double> kDefaultTauGrid = {0.1, 0.2, 0.3,
                                                    0.4, 0.5, 0.6};

// A detection is positive when it reaches IoU >= tau with a ground-truth
// instance of its action in its video that no higher-ranked detection has
// already claimed. Ranking is by descending score, ties by video id. The
// output keeps the input order. Throws pointloc::Error for unknown videos.
std::vector<LabeledDetection> label_detections(
    std::span<const Detection> detections, const GroundTruth& gt, double tau);

// Descending score order with ties broken by ascending video id.
std::vector<size_t> ranking(std::span<const LabeledDetection> labeled);

// Non-interpolated AP: sum of precision at each positive rank over n_gt.
double average_precision(std::span<const LabeledDetection> labeled,
                         size_t n_gt);

// Mann-Whitney AUC with ties counted as one half; nullopt with a single class.
std::optional<double> roc_auc(std::span<const LabeledDetection> labeled);

struct ActionMetrics {
  int action = 0;
  double tau = 0.0;
  double ap = 0.0;
  std::optional<double> auc;
  size_t n_gt = 0;
  size_t n_detections = 0;
};

struct ThresholdMetrics {
  double tau = 0.0;
  double map = 0.0;
  std::optional<double> mean_auc;
};

struct EvalReport {
  std::vector<ActionMetrics> per_action;    // tau-major
  std::vector<ThresholdMetrics> per_tau;
};

// AP/AUC per action with at least one ground-truth instance, averaged per
// tau. Actions without ground truth are skipped.
EvalReport evaluate(std::span<const Detection> detections, const GroundTruth& gt,
                    std::span<const double> taus);

std::vector<std::pair<double, double>> map_over_thresholds(
    std::span<const Detection> detections, const GroundTruth& gt,
    std::span<const double> taus);

enum class ErrorType {
  kCorrect = 0,
  kLocalization = 1,
  kConfusion = 2,
  kBackgroundOwn = 3,
  kBackgroundOther = 4,
};

inline constexpr double kDiagnosisInnerIou = 0.1;

// The default grid restricted to thresholds above the inner IoU.
inline const std::vector<double> kDefaultDiagnosisTauGrid = {0.2, 0.3, 0.4,
                                                             0.5, 0.6};

std::string_view to_string(ErrorType type);

// Positive video (has ground truth of the detection's action): correct at
// IoU >= tau, localization in [0.1, tau), background_own below 0.1.
// Negative video: confusion at IoU >= 0.1 with any other action's ground
// truth, background_other otherwise.
ErrorType classify_detection(const Detection& detection, const GroundTruth& gt,
                             double tau);

struct ErrorCounts {
  std::array<size_t, 5> counts{};

  size_t& operator[](ErrorType t) { return counts[static_cast<size_t>(t)]; }
  size_t operator[](ErrorType t) const {
    return counts[static_cast<size_t>(t)];
  }
  size_t total() const;
};

struct DiagnosisRow {
  int action = 0;
  size_t r = 0;  // ground-truth instances of the action
  ErrorCounts counts;
};

// Top-R detections per action, R = ground-truth instance count, classified
// into the five error types. Requires tau > 0.1.
std::vector<DiagnosisRow> diagnose(std::span<const Detection> detections,
                                   const GroundTruth& gt, double tau);

}  // namespace pointloc

#endif  // POINTLOC_EVAL_H_
