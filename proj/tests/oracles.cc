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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pointloc/pseudo.h"

namespace pointloc::oracle {

namespace {

bool cell_in(const Box& box, double cx, double cy) {
  return cx > box.xmin && cx < box.xmax && cy > box.ymin && cy < box.ymax;
}

struct Grid {
  long x0, x1, y0, y1;
};

Grid span_of(const Box& box, double pitch) {
  return {static_cast<long>(std::floor(box.xmin / pitch)),
          static_cast<long>(std::ceil(box.xmax / pitch)),
          static_cast<long>(std::floor(box.ymin / pitch)),
          static_cast<long>(std::ceil(box.ymax / pitch))};
}

}  // namespace

double raster_area(const Box& box, double pitch) {
  return raster_intersection(box, box, pitch);
}

double raster_intersection(const Box& a, const Box& b, double pitch) {
  const Grid g = span_of(a, pitch);
  long count = 0;
  for (long j = g.y0; j < g.y1; ++j) {
    const double cy = (j + 0.5) * pitch;
    for (long i = g.x0; i < g.x1; ++i) {
      const double cx = (i + 0.5) * pitch;
      if (cell_in(a, cx, cy) && cell_in(b, cx, cy)) ++count;
    }
  }
  return static_cast<double>(count) * pitch * pitch;
}

double raster_iou(const Box& a, const Box& b, double pitch) {
  const double inter = raster_intersection(a, b, pitch);
  const double uni = raster_area(a, pitch) + raster_area(b, pitch) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

double raster_tube_iou(const Tube& a, const Tube& b, double pitch) {
  std::set<int> frames;
  for (int f = a.start_frame; f <= a.end_frame(); ++f) frames.insert(f);
  for (int f = b.start_frame; f <= b.end_frame(); ++f) frames.insert(f);
  if (frames.empty()) return 0.0;
  double sum = 0.0;
  for (int f : frames) {
    const Box* ba = a.at(f);
    const Box* bb = b.at(f);
    if (ba && bb) sum += raster_iou(*ba, *bb, pitch);
  }
  return sum / static_cast<double>(frames.size());
}

double enumerated_center_term(const Box& box, const Point& p) {
  if (p.x < box.xmin || p.x > box.xmax || p.y < box.ymin || p.y > box.ymax)
    return 0.0;
  const Point c{(box.xmin + box.xmax) / 2, (box.ymin + box.ymax) / 2};
  const Point mids[4] = {{box.xmin, c.y}, {box.xmax, c.y},
                         {c.x, box.ymin}, {c.x, box.ymax}};
  double border = 0.0;
  for (const Point& m : mids)
    border = std::max(border, std::hypot(m.x - c.x, m.y - c.y));
  const double d = std::hypot(p.x - c.x, p.y - c.y);
  return std::max(0.0, 1.0 - d / border);
}

double enumerated_center_match(const Tube& tube, const PointTrack& points) {
  double sum = 0.0;
  for (const auto& [frame, p] : points) {
    for (int k = 0; k < tube.length(); ++k) {
      if (tube.start_frame + k == frame)
        sum += enumerated_center_term(tube.boxes[k], p);
    }
  }
  return points.empty() ? 0.0 : sum / static_cast<double>(points.size());
}

double raster_size_regularizer(const Tube& tube, const VideoMeta& meta,
                               double pitch) {
  double total = 0.0;
  for (const Box& b : tube.boxes) total += raster_area(b, pitch);
  const double r = total / (static_cast<double>(meta.frame_count) *
                            meta.width * meta.height);
  return r * r;
}

Point raster_centroid(std::span<const Box> boxes, const VideoMeta& meta,
                      double pitch) {
  const long nx = std::lround(meta.width / pitch);
  const long ny = std::lround(meta.height / pitch);
  double mass = 0.0, sx = 0.0, sy = 0.0;
  for (long j = 0; j < ny; ++j) {
    const double cy = (j + 0.5) * pitch;
    for (long i = 0; i < nx; ++i) {
      const double cx = (i + 0.5) * pitch;
      int cover = 0;
      for (const Box& b : boxes) cover += cell_in(b, cx, cy);
      mass += cover;
      sx += cover * cx;
      sy += cover * cy;
    }
  }
  if (mass == 0.0) return meta.frame_center();
  return {sx / mass, sy / mass};
}

Box random_box(Rng& rng, int width, int height) {
  const int x0 = static_cast<int>(rng.below(static_cast<size_t>(width)));
  const int y0 = static_cast<int>(rng.below(static_cast<size_t>(height)));
  const int x1 = x0 + 1 + static_cast<int>(rng.below(
                              static_cast<size_t>(width - x0)));
  const int y1 = y0 + 1 + static_cast<int>(rng.below(
                              static_cast<size_t>(height - y0)));
  return {double(x0), double(y0), double(x1), double(y1)};
}

Tube random_tube(Rng& rng, const VideoMeta& meta, int max_length) {
  Tube t;
  const int len = 1 + static_cast<int>(rng.below(static_cast<size_t>(
                          std::min(max_length, meta.frame_count))));
  t.start_frame =
      1 + static_cast<int>(rng.below(static_cast<size_t>(meta.frame_count -
                                                         len + 1)));
  for (int k = 0; k < len; ++k)
    t.boxes.push_back(random_box(rng, meta.width, meta.height));
  return t;
}

PointTrack random_points(Rng& rng, const VideoMeta& meta, int count) {
  PointTrack pts;
  for (int k = 0; k < count; ++k) {
    const int f = 1 + static_cast<int>(
                          rng.below(static_cast<size_t>(meta.frame_count)));
    pts[f] = {rng.uniform(0, meta.width), rng.uniform(0, meta.height)};
  }
  return pts;
}

OracleReport run_geometry_oracles(int instances, uint64_t seed) {
  OracleReport report;
  report.instances = instances;
  Rng root(seed);
  const VideoMeta meta{12, 40, 30};
  for (int i = 0; i < instances; ++i) {
    Rng rng = root.derive(static_cast<uint64_t>(i));

    const Tube a = random_tube(rng, meta, 6);
    const Tube b = random_tube(rng, meta, 6);
    report.max_tube_iou_error = std::max(
        report.max_tube_iou_error,
        std::abs(tube_iou(a, b) - raster_tube_iou(a, b, 1.0)));

    // Points near the boxes so that the clamp and fall-off both trigger.
    PointTrack pts = random_points(rng, meta, 5);
    for (int f = a.start_frame; f <= a.end_frame(); ++f) {
      if (rng.uniform() < 0.6) {
        const Box& box = *a.at(f);
        pts[f] = {rng.uniform(box.xmin - 2, box.xmax + 2),
                  rng.uniform(box.ymin - 2, box.ymax + 2)};
      }
    }
    report.max_center_match_error =
        std::max(report.max_center_match_error,
                 std::abs(center_match(a, pts) - enumerated_center_match(a, pts)));

    report.max_size_error = std::max(
        report.max_size_error, std::abs(size_regularizer(a, meta) -
                                        raster_size_regularizer(a, meta, 1.0)));

    // Boxes may spill past the frame; both sides clip to it.
    std::vector<Tube> proposals;
    const int n = 1 + static_cast<int>(rng.below(5));
    const int frame = 1 + static_cast<int>(rng.below(4));
    std::vector<Box> boxes;
    for (int k = 0; k < n; ++k) {
      Box box = random_box(rng, meta.width + 10, meta.height + 10);
      box.xmin -= 5;
      box.xmax -= 5;
      box.ymin -= 5;
      box.ymax -= 5;
      Tube t;
      t.start_frame = frame;
      t.boxes.push_back(box);
      proposals.push_back(t);
      boxes.push_back(box);
    }
    const Centroid got = pp_self_supervision(proposals, frame, meta);
    const Point want = raster_centroid(boxes, meta, 0.5);
    report.max_centroid_error =
        std::max(report.max_centroid_error, distance(got.point, want));
  }
  return report;
}

}  // namespace pointloc::oracle
