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

#ifndef POINTLOC_GEOMETRY_H_
#define POINTLOC_GEOMETRY_H_

#include <map>
#include <optional>
#include <vector>

namespace pointloc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

// Axis-aligned box in pixel coordinates, origin top-left.
struct Box {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  Point center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  // Closed containment: points on the boundary are inside.
  bool contains(const Point& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  bool valid() const;

  friend bool operator==(const Box&, const Box&) = default;
};

struct VideoMeta {
  int frame_count = 0;
  int width = 0;
  int height = 0;

  double frame_area() const {
    return static_cast<double>(width) * static_cast<double>(height);
  }
  Point frame_center() const { return {0.5 * width, 0.5 * height}; }
  bool valid() const { return frame_count > 0 && width > 0 && height > 0; }

  friend bool operator==(const VideoMeta&, const VideoMeta&) = default;
};

// Temporally contiguous sequence of boxes starting at a 1-based frame.
struct Tube {
  int start_frame = 1;
  std::vector<Box> boxes;

  int length() const { return static_cast<int>(boxes.size()); }
  int end_frame() const { return start_frame + length() - 1; }
  bool covers(int frame) const {
    return frame >= start_frame && frame <= end_frame();
  }
  // Box at an absolute frame index, or nullptr outside the temporal span.
  const Box* at(int frame) const {
    return covers(frame) ? &boxes[static_cast<size_t>(frame - start_frame)]
                         : nullptr;
  }
  bool valid_in(const VideoMeta& meta) const;

  friend bool operator==(const Tube&, const Tube&) = default;
};

// Sparse per-frame point annotations, keyed by 1-based frame index.
using PointTrack = std::map<int, Point>;

// Throws pointloc::Error when a tube or track violates its invariants.
void check_tube(const Tube& tube, const VideoMeta& meta);
void check_points(const PointTrack& points, const VideoMeta& meta);

double box_iou(const Box& a, const Box& b);

// Mean per-frame IoU over the union of both temporal spans; frames covered by
// only one tube contribute zero.
double tube_iou(const Tube& a, const Tube& b);

struct CenterMatchOptions {
  // Zero the per-frame term when the point lies outside the box. Disabling
  // it evaluates the linear fall-off formula literally.
  bool containment_clamp = true;
};

// Linear fall-off of the point-to-center distance, normalized by the largest
// center-to-edge-midpoint distance of the box.
double center_match_term(const Box& box, const Point& point,
                         const CenterMatchOptions& options = {});

// Mean of center_match_term over all annotated frames. Annotated frames that
// the tube does not cover count as zero; the normalizer is the number of
// annotations, not the number of covered ones.
double center_match(const Tube& tube, const PointTrack& points,
                    const CenterMatchOptions& options = {});

// Squared ratio of the summed box area to the summed area of every frame of
// the video.
double size_regularizer(const Tube& tube, const VideoMeta& video);

// center_match(tube, points) - size_regularizer(tube, video).
double overlap(const Tube& tube, const PointTrack& points,
               const VideoMeta& video, const CenterMatchOptions& options = {});

// Fraction of the video's frames spanned by the tube.
double relative_extent(const Tube& tube, const VideoMeta& video);

Point clamp_to_frame(const Point& p, const VideoMeta& meta);

}  // namespace pointloc

#endif  // POINTLOC_GEOMETRY_H_
