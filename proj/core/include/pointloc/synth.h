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

#ifndef POINTLOC_SYNTH_H_
#define POINTLOC_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/video.h"

namespace pointloc {

// Desk-scale synthetic benchmark. Every field has a working default.
struct SynthConfig {
  uint64_t seed = 7;
  int n_actions = 3;
  int train_per_action = 20;
  int test_per_action = 20;
  int frames_per_video = 60;
  int width = 320;
  int height = 240;
  int proposals_per_video = 64;
  // Fraction of proposals drawn as jittered copies of the ground truth.
  double overlap_mixture = 0.15;
  int feature_dim = 32;
  double feature_noise = 0.15;
  int point_stride = 1;
  double point_sigma = 0.0;
  // Fraction of low-overlap proposals removed after generation.
  double epsilon = 0.0;
  bool include_oracle = false;
  // Keeps ground-truth centers in the left or right quarter of the frame.
  bool off_center = false;
  bool include_detections = true;
  double person_sigma = 3.0;
  bool include_mass_maps = true;
  int mass_downsample = 16;

  void validate() const;
};

// Throws pointloc::Error on an invalid or unsatisfiable configuration.
Dataset synth_generate(const SynthConfig& config);

// Unit-norm feature prototype of each action.
std::vector<std::vector<double>> synth_prototypes(const SynthConfig& config);

// Adds seeded N(0, sigma^2 I) noise to every point (Box-Muller pair per
// point, frames in ascending order) and clamps to the frame.
PointTrack perturb_points(const PointTrack& track, double sigma,
                          const VideoMeta& meta, uint64_t seed);

// Keeps frames whose offset from the first annotated frame is a multiple of
// stride.
PointTrack subsample_points(const PointTrack& track, int stride);

inline constexpr double kLowQualityIou = 0.5;

// Indices (ascending) of the proposals kept after removing a seeded uniform
// floor(epsilon * n_low) of the proposals whose best ground-truth IoU is at
// most 0.5.
std::vector<size_t> filter_low_quality(const Video& video, double epsilon,
                                       uint64_t seed);

// Restricts proposals and feature rows to the given indices.
void keep_proposals(Video& video, const std::vector<size_t>& indices);

}  // namespace pointloc

#endif  // POINTLOC_SYNTH_H_
