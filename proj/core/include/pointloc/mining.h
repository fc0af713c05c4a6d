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

#ifndef POINTLOC_MINING_H_
#define POINTLOC_MINING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/svm.h"
#include "pointloc/video.h"

namespace pointloc {

struct MiningConfig {
  double lambda_reg = 10.0;
  int iterations = 5;
  int folds = 3;
  int negatives_per_video = 100;
  // 1 enables the point prior, 0 reduces mining to plain MIL on video labels.
  double prior_weight = 1.0;
  uint64_t seed = 0;
  int svm_epochs = 60;
  CenterMatchOptions center_match;

  void validate() const;
  SvmOptions svm() const { return {lambda_reg, svm_epochs, 1.0}; }
};

// Model decision value plus prior_weight times the point overlap.
double mining_score(const LinearModel& model, std::span<const float> feature,
                    const Tube& tube, const PointTrack& points,
                    const VideoMeta& video, double prior_weight,
                    const CenterMatchOptions& options = {});

// Proposal index with the highest mining score; ties go to the lowest index.
size_t mine_best_proposal(const LinearModel& model, const Video& video,
                          double prior_weight,
                          const CenterMatchOptions& options = {});

struct MilResult {
  LinearModel model;
  // Positive training videos in the order used for mining.
  std::vector<const Video*> positives;
  // Fold of each positive video.
  std::vector<int> fold_of;
  // mined[r][i]: proposal mined for positives[i] in round r.
  std::vector<std::vector<size_t>> mined;
  // Feature rows drawn from other-action videos, as (video, proposal).
  std::vector<std::pair<const Video*, size_t>> negatives;

  const std::vector<size_t>& final_selection() const { return mined.back(); }
};

// Point-guided multiple instance learning for one action.
//
// Random draws come from one generator seeded with config.seed, in this
// order: fold assignment (shuffle of the positive videos, folds dealt
// round-robin), then negative sampling for each other-action video in input
// order. Round 0 mines with the zero model, so the selection is driven by the
// prior alone. Each later round trains one model per fold on the other folds'
// current selections and re-mines that fold with it. The returned model is
// trained on the last round's selections against the same negative sample.
//
// Throws pointloc::Error without positive or negative videos.
MilResult mil_train(int action, std::span<const Video* const> videos,
                    const MiningConfig& config);

// Per-video split of proposals under box supervision.
struct BoxSupervision {
  std::vector<size_t> threshold_positives;  // tube IoU > 0.6
  size_t best_proposal = 0;                 // stands in for the GT feature
  std::vector<size_t> hard_negatives;       // tube IoU < 0.1
};

inline constexpr double kBoxPositiveIou = 0.6;
inline constexpr double kBoxNegativeIou = 0.1;

BoxSupervision box_supervision(const Video& video, int action);

// Highest-IoU proposal to the action's ground truth; ties to the lowest index.
size_t best_proposal_index(const Video& video, int action);

struct SupervisedResult {
  LinearModel model;
  std::vector<std::pair<const Video*, size_t>> positives;
  std::vector<std::pair<const Video*, size_t>> negatives;
};

// Box-supervised baseline: positives are proposals above the IoU threshold
// plus the best proposal of each positive video; negatives are in-video
// proposals below 0.1 and sampled other-action proposals.
SupervisedResult box_supervised_train(int action,
                                      std::span<const Video* const> videos,
                                      const MiningConfig& config);

// Best-proposal baseline: one positive per video, the max-IoU proposal.
SupervisedResult best_proposal_train(int action,
                                     std::span<const Video* const> videos,
                                     const MiningConfig& config);

// Mean tube IoU of the chosen proposals to their videos' ground truth.
double mean_selection_iou(std::span<const Video* const> videos,
                          std::span<const size_t> selection, int action);

}  // namespace pointloc

#endif  // POINTLOC_MINING_H_
