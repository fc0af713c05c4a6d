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

#ifndef POINTLOC_VIDEO_H_
#define POINTLOC_VIDEO_H_

#include <optional>
#include <string>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/svm.h"

namespace pointloc {

enum class Split { kTrain, kTest };

struct GroundTruthInstance {
  int action = 0;
  Tube tube;

  friend bool operator==(const GroundTruthInstance&,
                         const GroundTruthInstance&) = default;
};

struct DetectionBox {
  Box box;
  double confidence = 0.0;

  friend bool operator==(const DetectionBox&, const DetectionBox&) = default;
};

// Per-frame person detections, indexed by frame - 1.
using FrameDetections = std::vector<std::vector<DetectionBox>>;

// Down-sampled per-frame mass grids. Cell (gx, gy) of frame f covers the
// pixels [gx * factor, (gx + 1) * factor) x [gy * factor, (gy + 1) * factor).
struct MassMaps {
  int frame_count = 0;
  int grid_width = 0;
  int grid_height = 0;
  int downsample = 1;
  std::vector<float> values;  // frame-major, then row-major

  size_t cells_per_frame() const {
    return static_cast<size_t>(grid_width) * static_cast<size_t>(grid_height);
  }
  const float* frame(int f) const {
    return values.data() + static_cast<size_t>(f - 1) * cells_per_frame();
  }

  friend bool operator==(const MassMaps&, const MassMaps&) = default;
};

// One video with everything the pipeline may consume. Actions are indices
// into the dataset's action list.
struct Video {
  std::string id;
  VideoMeta meta;
  Split split = Split::kTrain;
  std::vector<int> labels;
  std::vector<Tube> proposals;
  FeatureMatrix features;
  PointTrack points;
  std::vector<GroundTruthInstance> ground_truth;
  std::optional<FrameDetections> detections;
  std::optional<MassMaps> mass_maps;

  bool has_label(int action) const;
  std::vector<const Tube*> ground_truth_for(int action) const;
  // Max tube IoU of the given tube to any ground-truth instance of `action`,
  // or of any action when `action` is negative. Zero without ground truth.
  double best_gt_iou(const Tube& tube, int action = -1) const;

  friend bool operator==(const Video&, const Video&) = default;
};

struct Dataset {
  std::vector<std::string> actions;
  std::vector<Video> videos;

  int action_index(const std::string& name) const;  // -1 when absent
  std::vector<const Video*> split(Split s) const;
  size_t feature_dim() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace pointloc

#endif  // POINTLOC_VIDEO_H_
