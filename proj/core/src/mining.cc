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

#include "pointloc/mining.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointloc/error.h"
#include "pointloc/random.h"

namespace pointloc {

void MiningConfig::validate() const {
  if (!(lambda_reg > 0.0)) throw Error("lambda_reg must be positive");
  if (iterations < 1) throw Error("iterations must be at least 1");
  if (folds < 2) throw Error("folds must be at least 2");
  if (negatives_per_video < 1)
    throw Error("negatives_per_video must be at least 1");
  if (!std::isfinite(prior_weight)) throw Error("prior_weight must be finite");
  if (svm_epochs < 1) throw Error("svm_epochs must be at least 1");
}

double mining_score(const LinearModel& model, std::span<const float> feature,
                    const Tube& tube, const PointTrack& points,
                    const VideoMeta& video, double prior_weight,
                    const CenterMatchOptions& options) {
  const double model_score = model.decision(feature);
  if (prior_weight == 0.0) return model_score;
  return model_score + prior_weight * overlap(tube, points, video, options);
}

size_t mine_best_proposal(const LinearModel& model, const Video& video,
                          double prior_weight,
                          const CenterMatchOptions& options) {
  size_t best = 0;
  double best_score = -INFINITY;
  for (size_t i = 0; i < video.proposals.size(); ++i) {
    const double s =
        mining_score(model, video.features.row(i), video.proposals[i],
                     video.points, video.meta, prior_weight, options);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

namespace {

using Sample = std::pair<const Video*, size_t>;

void split_videos(int action, std::span<const Video* const> videos,
                  std::vector<const Video*>& positives,
                  std::vector<const Video*>& negatives) {
  for (const Video* v : videos) {
    if (v->proposals.empty())
      throw Error("video " + v->id + " has no proposals");
    if (v->proposals.size() != v->features.rows())
      throw Error("video " + v->id + " has " +
                  std::to_string(v->proposals.size()) + " proposals but " +
                  std::to_string(v->features.rows()) + " feature rows");
    (v->has_label(action) ? positives : negatives).push_back(v);
  }
  if (positives.empty())
    throw Error("no positive training videos for action " +
                std::to_string(action));
}

std::vector<Sample> sample_negatives(std::span<const Video* const> negatives,
                                     int per_video, Rng& rng) {
  std::vector<Sample> out;
  for (const Video* v : negatives) {
    const auto picks = rng.sample_without_replacement(
        v->proposals.size(), static_cast<size_t>(per_video));
    for (size_t p : picks) out.emplace_back(v, p);
  }
  return out;
}

std::vector<std::span<const float>> rows_of(std::span<const Sample> samples) {
  std::vector<std::span<const float>> out;
  out.reserve(samples.size());
  for (const auto& [v, p] : samples) out.push_back(v->features.row(p));
  return out;
}

uint64_t solver_seed(uint64_t seed, uint64_t round, uint64_t fold) {
  return splitmix64(seed ^ splitmix64((round << 16) ^ fold ^ 0xa5a5ULL));
}

}  // namespace

MilResult mil_train(int action, std::span<const Video* const> videos,
                    const MiningConfig& config) {
  config.validate();
  std::vector<const Video*> positives, negative_videos;
  split_videos(action, videos, positives, negative_videos);
  if (negative_videos.empty())
    throw Error("no negative training videos for action " +
                std::to_string(action));

  MilResult result;
  result.positives = positives;
  const size_t n_pos = positives.size();

  Rng rng(config.seed);
  std::vector<size_t> order(n_pos);
  for (size_t i = 0; i < n_pos; ++i) order[i] = i;
  rng.shuffle(order);
  result.fold_of.assign(n_pos, 0);
  for (size_t k = 0; k < n_pos; ++k)
    result.fold_of[order[k]] = static_cast<int>(k % config.folds);

  result.negatives =
      sample_negatives(negative_videos, config.negatives_per_video, rng);
  const auto negative_rows = rows_of(result.negatives);
  const SvmOptions svm = config.svm();

  std::vector<size_t> selection(n_pos);
  const LinearModel zero = LinearModel::zero(positives.front()->features.dim());
  for (size_t i = 0; i < n_pos; ++i) {
    selection[i] = mine_best_proposal(zero, *positives[i], config.prior_weight,
                                      config.center_match);
  }
  result.mined.push_back(selection);

  for (int round = 1; round < config.iterations; ++round) {
    std::vector<size_t> next = selection;
    for (int fold = 0; fold < config.folds; ++fold) {
      std::vector<std::span<const float>> train_pos;
      bool fold_has_videos = false;
      for (size_t i = 0; i < n_pos; ++i) {
        if (result.fold_of[i] == fold) {
          fold_has_videos = true;
        } else {
          train_pos.push_back(positives[i]->features.row(selection[i]));
        }
      }
      if (!fold_has_videos) continue;
      if (train_pos.empty()) {
        // Too few positives to hold a fold out.
        for (size_t i = 0; i < n_pos; ++i)
          train_pos.push_back(positives[i]->features.row(selection[i]));
      }
      const LinearModel model =
          train_linear_svm(train_pos, negative_rows, svm,
                           solver_seed(config.seed, round, fold));
      for (size_t i = 0; i < n_pos; ++i) {
        if (result.fold_of[i] != fold) continue;
        next[i] = mine_best_proposal(model, *positives[i], config.prior_weight,
                                     config.center_match);
      }
    }
    selection = std::move(next);
    result.mined.push_back(selection);
  }

  std::vector<std::span<const float>> final_pos;
  for (size_t i = 0; i < n_pos; ++i)
    final_pos.push_back(positives[i]->features.row(selection[i]));
  result.model = train_linear_svm(
      final_pos, negative_rows, svm,
      solver_seed(config.seed, static_cast<uint64_t>(config.iterations), 0));
  return result;
}

BoxSupervision box_supervision(const Video& video, int action) {
  const auto gts = video.ground_truth_for(action);
  if (gts.empty())
    throw Error("video " + video.id + " has no ground truth for action " +
                std::to_string(action));
  BoxSupervision out;
  double best = -1.0;
  for (size_t i = 0; i < video.proposals.size(); ++i) {
    double iou = 0.0;
    for (const Tube* gt : gts) iou = std::max(iou, tube_iou(video.proposals[i], *gt));
    if (iou > kBoxPositiveIou) out.threshold_positives.push_back(i);
    if (iou < kBoxNegativeIou) out.hard_negatives.push_back(i);
    if (iou > best) {
      best = iou;
      out.best_proposal = i;
    }
  }
  return out;
}

size_t best_proposal_index(const Video& video, int action) {
  return box_supervision(video, action).best_proposal;
}

namespace {

SupervisedResult supervised_train(int action,
                                  std::span<const Video* const> videos,
                                  const MiningConfig& config,
                                  bool threshold_positives) {
  config.validate();
  std::vector<const Video*> positives, negative_videos;
  split_videos(action, videos, positives, negative_videos);

  SupervisedResult result;
  for (const Video* v : positives) {
    const BoxSupervision sup = box_supervision(*v, action);
    if (threshold_positives) {
      for (size_t p : sup.threshold_positives) result.positives.emplace_back(v, p);
      if (std::find(sup.threshold_positives.begin(),
                    sup.threshold_positives.end(),
                    sup.best_proposal) == sup.threshold_positives.end()) {
        result.positives.emplace_back(v, sup.best_proposal);
      }
    } else {
      result.positives.emplace_back(v, sup.best_proposal);
    }
    for (size_t p : sup.hard_negatives) result.negatives.emplace_back(v, p);
  }
  Rng rng(config.seed);
  const auto sampled =
      sample_negatives(negative_videos, config.negatives_per_video, rng);
  result.negatives.insert(result.negatives.end(), sampled.begin(),
                          sampled.end());
  if (result.negatives.empty())
    throw Error("no negatives available for action " + std::to_string(action));

  result.model = train_linear_svm(rows_of(result.positives),
                                  rows_of(result.negatives), config.svm(),
                                  solver_seed(config.seed, 0, 0));
  return result;
}

}  // namespace

SupervisedResult box_supervised_train(int action,
                                      std::span<const Video* const> videos,
                                      const MiningConfig& config) {
  return supervised_train(action, videos, config, true);
}

SupervisedResult best_proposal_train(int action,
                                     std::span<const Video* const> videos,
                                     const MiningConfig& config) {
  return supervised_train(action, videos, config, false);
}

double mean_selection_iou(std::span<const Video* const> videos,
                          std::span<const size_t> selection, int action) {
  if (videos.empty()) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < videos.size(); ++i)
    sum += videos[i]->best_gt_iou(videos[i]->proposals[selection[i]], action);
  return sum / static_cast<double>(videos.size());
}

}  // namespace pointloc
