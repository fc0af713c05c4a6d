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

#include "pointloc/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointloc/error.h"

namespace pointloc {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool Box::valid() const {
  return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
         std::isfinite(ymax) && xmin < xmax && ymin < ymax;
}

bool Tube::valid_in(const VideoMeta& meta) const {
  if (boxes.empty() || start_frame < 1 || end_frame() > meta.frame_count)
    return false;
  return std::all_of(boxes.begin(), boxes.end(),
                     [](const Box& b) { return b.valid(); });
}

void check_tube(const Tube& tube, const VideoMeta& meta) {
  if (tube.boxes.empty()) throw Error("tube has no boxes");
  if (tube.start_frame < 1 || tube.end_frame() > meta.frame_count) {
    throw Error("tube frames [" + std::to_string(tube.start_frame) + ", " +
                std::to_string(tube.end_frame()) + "] outside video of " +
                std::to_string(meta.frame_count) + " frames");
  }
  for (const Box& b : tube.boxes) {
    if (!b.valid()) throw Error("tube contains a degenerate box");
  }
}

void check_points(const PointTrack& points, const VideoMeta& meta) {
  for (const auto& [frame, p] : points) {
    if (frame < 1 || frame > meta.frame_count)
      throw Error("point annotation on frame " + std::to_string(frame) +
                  " outside video");
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error("non-finite point annotation");
  }
}

double box_iou(const Box& a, const Box& b) {
  const double iw = std::min(a.xmax, b.xmax) - std::max(a.xmin, b.xmin);
  const double ih = std::min(a.ymax, b.ymax) - std::max(a.ymin, b.ymin);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

double tube_iou(const Tube& a, const Tube& b) {
  const int first = std::max(a.start_frame, b.start_frame);
  const int last = std::min(a.end_frame(), b.end_frame());
  const int shared = std::max(0, last - first + 1);
  const int union_frames = a.length() + b.length() - shared;
  if (union_frames <= 0) return 0.0;
  double sum = 0.0;
  for (int f = first; f <= last; ++f) sum += box_iou(*a.at(f), *b.at(f));
  return sum / union_frames;
}

double center_match_term(const Box& box, const Point& point,
                         const CenterMatchOptions& options) {
  if (options.containment_clamp && !box.contains(point)) return 0.0;
  // Edge midpoints sit at half-width and half-height from the center.
  const double reach = 0.5 * std::max(box.width(), box.height());
  return std::max(0.0, 1.0 - distance(point, box.center()) / reach);
}

double center_match(const Tube& tube, const PointTrack& points,
                    const CenterMatchOptions& options) {
  if (points.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [frame, p] : points) {
    if (const Box* box = tube.at(frame)) sum += center_match_term(*box, p, options);
  }
  return sum / static_cast<double>(points.size());
}

double size_regularizer(const Tube& tube, const VideoMeta& video) {
  double covered = 0.0;
  for (const Box& b : tube.boxes) covered += b.area();
  const double total = video.frame_area() * video.frame_count;
  const double ratio = covered / total;
  return ratio * ratio;
}

double overlap(const Tube& tube, const PointTrack& points,
               const VideoMeta& video, const CenterMatchOptions& options) {
  return center_match(tube, points, options) - size_regularizer(tube, video);
}

double relative_extent(const Tube& tube, const VideoMeta& video) {
  return static_cast<double>(tube.length()) / video.frame_count;
}

Point clamp_to_frame(const Point& p, const VideoMeta& meta) {
  return {std::clamp(p.x, 0.0, static_cast<double>(meta.width)),
          std::clamp(p.y, 0.0, static_cast<double>(meta.height))};
}

}  // namespace pointloc
