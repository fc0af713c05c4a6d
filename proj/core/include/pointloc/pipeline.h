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

#ifndef POINTLOC_PIPELINE_H_
#define POINTLOC_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointloc/eval.h"
#include "pointloc/mining.h"
#include "pointloc/pseudo.h"
#include "pointloc/svm.h"
#include "pointloc/video.h"

namespace pointloc {

enum class Regime { kPoint, kVideoLabel, kBox, kBestProposal };

// point, video-label, box, best-proposal
std::string_view to_string(Regime regime);
std::optional<Regime> parse_regime(std::string_view name);

// Per-action seed derived from the run seed.
uint64_t action_seed(uint64_t seed, int action);

// One model per dataset action, trained on the train split. Actions train
// concurrently; results do not depend on scheduling.
std::vector<LinearModel> train_models(const Dataset& dataset, Regime regime,
                                      const MiningConfig& config);

struct InferOptions {
  std::optional<PseudoKind> pseudo;
  // Estimated with weight_pseudo on the train split when unset.
  std::optional<double> lambda_p;
  bool temporal = false;
  double lambda_t = 1.0;
};

struct InferResult {
  std::vector<Detection> detections;  // action-major, test videos in order
  std::optional<PseudoWeight> weight;
  size_t degenerate_frames = 0;
};

// Top-1 proposal per (action, test video). The detection score is the
// model's decision value on the selected proposal.
InferResult infer(const Dataset& dataset, std::span<const LinearModel> models,
                  const InferOptions& options);

// weight_pseudo for one kind over every training video.
PseudoWeight estimate_pseudo_weight(const Dataset& dataset, PseudoKind kind);

// Kinds whose inputs are present for every video of the dataset.
std::vector<PseudoKind> available_pseudo_kinds(const Dataset& dataset);

GroundTruth test_ground_truth(const Dataset& dataset);

// Dataset variants for the sweeps. Only the named split is modified.
Dataset with_point_stride(const Dataset& dataset, int stride);
Dataset with_point_noise(const Dataset& dataset, double sigma, uint64_t seed);
// Applies filter_low_quality to every video of both splits.
Dataset with_epsilon(const Dataset& dataset, double epsilon, uint64_t seed);

struct SweepRow {
  std::string setting;
  double value = 0.0;
  std::vector<double> map;  // aligned with the tau grid
  std::optional<double> lambda_p;
};

struct SweepPlan {
  Regime regime = Regime::kPoint;
  MiningConfig mining;
  InferOptions infer;
  std::vector<double> taus = kDefaultTauGrid;
};

std::vector<SweepRow> sweep_stride(const Dataset& dataset,
                                   std::span<const int> strides,
                                   const SweepPlan& plan);
std::vector<SweepRow> sweep_sigma(const Dataset& dataset,
                                  std::span<const double> sigmas,
                                  const SweepPlan& plan);
std::vector<SweepRow> sweep_epsilon(const Dataset& dataset,
                                    std::span<const double> epsilons,
                                    const SweepPlan& plan);
// One row without pseudo-points, one per available kind (weights estimated),
// and one with temporal rescoring alone.
std::vector<SweepRow> sweep_pseudo(const Dataset& dataset,
                                   const SweepPlan& plan);

std::string sweep_to_csv(std::string_view parameter,
                         std::span<const SweepRow> rows,
                         std::span<const double> taus);

}  // namespace pointloc

#endif  // POINTLOC_PIPELINE_H_
