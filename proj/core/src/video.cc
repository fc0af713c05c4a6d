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

#include "pointloc/video.h"

#include <algorithm>

namespace pointloc {

bool Video::has_label(int action) const {
  return std::find(labels.begin(), labels.end(), action) != labels.end();
}

std::vector<const Tube*> Video::ground_truth_for(int action) const {
  std::vector<const Tube*> out;
  for (const auto& inst : ground_truth) {
    if (inst.action == action) out.push_back(&inst.tube);
  }
  return out;
}

double Video::best_gt_iou(const Tube& tube, int action) const {
  double best = 0.0;
  for (const auto& inst : ground_truth) {
    if (action >= 0 && inst.action != action) continue;
    best = std::max(best, tube_iou(tube, inst.tube));
  }
  return best;
}

int Dataset::action_index(const std::string& name) const {
  auto it = std::find(actions.begin(), actions.end(), name);
  return it == actions.end() ? -1 : static_cast<int>(it - actions.begin());
}

std::vector<const Video*> Dataset::split(Split s) const {
  std::vector<const Video*> out;
  for (const Video& v : videos) {
    if (v.split == s) out.push_back(&v);
  }
  return out;
}

size_t Dataset::feature_dim() const {
  for (const Video& v : videos) {
    if (v.features.rows() > 0) return v.features.dim();
  }
  return 0;
}

}  // namespace pointloc
