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

#include "pointloc/pseudo.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "pointloc/error.h"

namespace pointloc {

std::string_view to_string(PseudoKind kind) {
  switch (kind) {
    case PseudoKind::kTrainStats: return "train_stats";
    case PseudoKind::kSelfSupervision: return "self";
    case PseudoKind::kPerson: return "person";
    case PseudoKind::kIndependentMotion: return "imotion";
    case PseudoKind::kCenter: return "center";
  }
  return "unknown";
}

std::optional<PseudoKind> parse_pseudo_kind(std::string_view name) {
  for (PseudoKind k : kAllPseudoKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

PointTrack PseudoTrack::as_point_track() const {
  PointTrack out;
  for (size_t i = 0; i < points.size(); ++i)
    out.emplace_hint(out.end(), static_cast<int>(i) + 1, points[i]);
  return out;
}

size_t PseudoTrack::degenerate_frames() const {
  return static_cast<size_t>(
      std::count(degenerate.begin(), degenerate.end(), true));
}

Point mean_relative_point(const PointTrack& points, const VideoMeta& meta) {
  if (points.empty()) throw Error("mean of an empty point track");
  double sx = 0.0, sy = 0.0;
  for (const auto& [frame, p] : points) {
    sx += p.x / meta.width;
    sy += p.y / meta.height;
  }
  const double n = static_cast<double>(points.size());
  return {sx / n, sy / n};
}

Point train_stats_point(int action, std::span<const Video* const> training) {
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (const Video* v : training) {
    if (!v->has_label(action) || v->points.empty()) continue;
    const Point p = mean_relative_point(v->points, v->meta);
    sx += p.x;
    sy += p.y;
    ++n;
  }
  if (n == 0)
    throw Error("no annotated training videos for action " +
                std::to_string(action));
  return {sx / n, sy / n};
}

namespace {

PseudoTrack constant_track(PseudoKind kind, const Point& p,
                           const VideoMeta& meta) {
  PseudoTrack t;
  t.kind = kind;
  t.points.assign(static_cast<size_t>(meta.frame_count), p);
  t.degenerate.assign(static_cast<size_t>(meta.frame_count), false);
  return t;
}

Box clip_box(const Box& b, const VideoMeta& meta) {
  return {std::max(b.xmin, 0.0), std::max(b.ymin, 0.0),
          std::min(b.xmax, static_cast<double>(meta.width)),
          std::min(b.ymax, static_cast<double>(meta.height))};
}

}  // namespace

PseudoTrack pp_train_stats(const Point& relative, const VideoMeta& meta) {
  const Point p = clamp_to_frame(
      {relative.x * meta.width, relative.y * meta.height}, meta);
  return constant_track(PseudoKind::kTrainStats, p, meta);
}

Centroid pp_self_supervision(std::span<const Tube> proposals, int frame,
                             const VideoMeta& meta) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (const Tube& t : proposals) {
    const Box* b = t.at(frame);
    if (b == nullptr) continue;
    const Box c = clip_box(*b, meta);
    if (c.xmax <= c.xmin || c.ymax <= c.ymin) continue;
    const double a = c.area();
    const Point center = c.center();
    mass += a;
    mx += a * center.x;
    my += a * center.y;
  }
  if (mass <= 0.0) return {meta.frame_center(), true};
  return {clamp_to_frame({mx / mass, my / mass}, meta), false};
}

PseudoTrack self_supervision_track(std::span<const Tube> proposals,
                                   const VideoMeta& meta) {
  PseudoTrack t;
  t.kind = PseudoKind::kSelfSupervision;
  for (int f = 1; f <= meta.frame_count; ++f) {
    const Centroid c = pp_self_supervision(proposals, f, meta);
    t.points.push_back(c.point);
    t.degenerate.push_back(c.degenerate);
  }
  return t;
}

PseudoTrack pp_person(const FrameDetections& detections, const VideoMeta& meta) {
  PseudoTrack t;
  t.kind = PseudoKind::kPerson;
  const Point center = meta.frame_center();
  std::optional<Box> previous;
  for (int f = 1; f <= meta.frame_count; ++f) {
    const DetectionBox* top = nullptr;
    if (static_cast<size_t>(f) <= detections.size()) {
      for (const DetectionBox& d : detections[static_cast<size_t>(f - 1)]) {
        if (!d.box.valid() || !std::isfinite(d.confidence))
          throw Error("malformed person detection on frame " +
                      std::to_string(f));
        if (top == nullptr || d.confidence > top->confidence) top = &d;
      }
    }
    bool fallback = false;
    if (top != nullptr) {
      previous = top->box;
    } else if (!previous) {
      fallback = true;
    }
    const Box box = fallback ? Box{center.x - 0.5, center.y - 0.5,
                                   center.x + 0.5, center.y + 0.5}
                             : *previous;
    t.boxes.push_back(box);
    t.points.push_back(clamp_to_frame(box.center(), meta));
    t.degenerate.push_back(fallback);
  }
  return t;
}

std::optional<Point> grid_centroid(std::span<const float> grid, int grid_width,
                                   int grid_height) {
  double mass = 0.0, mx = 0.0, my = 0.0;
  for (int gy = 0; gy < grid_height; ++gy) {
    for (int gx = 0; gx < grid_width; ++gx) {
      const double m = grid[static_cast<size_t>(gy) * grid_width + gx];
      if (m <= 0.0) continue;
      mass += m;
      mx += m * gx;
      my += m * gy;
    }
  }
  if (mass <= 0.0) return std::nullopt;
  return Point{mx / mass, my / mass};
}

Centroid pp_independent_motion(const MassMaps& maps, int frame,
                               const VideoMeta& meta) {
  if (frame < 1 || frame > maps.frame_count)
    throw Error("no mass map for frame " + std::to_string(frame));
  const auto c = grid_centroid({maps.frame(frame), maps.cells_per_frame()},
                               maps.grid_width, maps.grid_height);
  if (!c) return {meta.frame_center(), true};
  const double f = maps.downsample;
  return {clamp_to_frame({(c->x + 0.5) * f, (c->y + 0.5) * f}, meta), false};
}

PseudoTrack independent_motion_track(const MassMaps& maps,
                                     const VideoMeta& meta) {
  PseudoTrack t;
  t.kind = PseudoKind::kIndependentMotion;
  for (int f = 1; f <= meta.frame_count; ++f) {
    const Centroid c = pp_independent_motion(maps, f, meta);
    t.points.push_back(c.point);
    t.degenerate.push_back(c.degenerate);
  }
  return t;
}

Point pp_center(const VideoMeta& meta) { return meta.frame_center(); }

PseudoTrack center_track(const VideoMeta& meta) {
  return constant_track(PseudoKind::kCenter, pp_center(meta), meta);
}

PseudoTrack make_pseudo_track(PseudoKind kind, const Video& video,
                              const std::optional<Point>& train_stats) {
  switch (kind) {
    case PseudoKind::kTrainStats:
      if (!train_stats) throw Error("train_stats pseudo-point needs statistics");
      return pp_train_stats(*train_stats, video.meta);
    case PseudoKind::kSelfSupervision:
      return self_supervision_track(video.proposals, video.meta);
    case PseudoKind::kPerson:
      if (!video.detections)
        throw Error("video " + video.id + " has no person detections");
      return pp_person(*video.detections, video.meta);
    case PseudoKind::kIndependentMotion:
      if (!video.mass_maps)
        throw Error("video " + video.id + " has no mass maps");
      return independent_motion_track(*video.mass_maps, video.meta);
    case PseudoKind::kCenter:
      return center_track(video.meta);
  }
  throw Error("unknown pseudo-point kind");
}

double pseudo_frame_score(const PseudoTrack& track, int frame,
                          const Point& manual, const VideoMeta& meta) {
  if (frame < 1 || frame > track.frame_count())
    throw Error("pseudo track does not cover frame " + std::to_string(frame));
  const size_t i = static_cast<size_t>(frame - 1);
  if (track.kind == PseudoKind::kPerson)
    return center_match_term(track.boxes[i], manual);
  const double border =
      std::min({manual.x, meta.width - manual.x, manual.y, meta.height - manual.y});
  const double d = distance(manual, track.points[i]);
  if (border <= 0.0) return d == 0.0 ? 1.0 : 0.0;
  return std::max(0.0, 1.0 - d / border);
}

PseudoWeight weight_pseudo(PseudoKind kind,
                           std::span<const PseudoTrack> tracks,
                           std::span<const Video* const> videos) {
  if (videos.empty()) throw Error("pseudo-point weighting needs training videos");
  if (tracks.size() != videos.size())
    throw Error("pseudo tracks and videos are misaligned");
  double total = 0.0;
  int counted = 0;
  for (size_t i = 0; i < videos.size(); ++i) {
    const Video& v = *videos[i];
    if (v.points.empty()) continue;
    double sum = 0.0;
    for (const auto& [frame, manual] : v.points)
      sum += pseudo_frame_score(tracks[i], frame, manual, v.meta);
    total += sum / static_cast<double>(v.points.size());
    ++counted;
  }
  if (counted == 0)
    throw Error("pseudo-point weighting needs annotated training videos");
  return {kind, std::clamp(total / counted, 0.0, 1.0)};
}

TemporalStats temporal_stats(int action, std::span<const Video* const> training,
                             double lambda_t) {
  double sum = 0.0;
  int n = 0;
  for (const Video* v : training) {
    if (!v->has_label(action) || v->points.empty()) continue;
    const int first = v->points.begin()->first;
    const int last = v->points.rbegin()->first;
    sum += static_cast<double>(last - first + 1) / v->meta.frame_count;
    ++n;
  }
  if (n == 0)
    throw Error("no annotated training videos for action " +
                std::to_string(action));
  return {sum / n, lambda_t};
}

double temporal_penalty(double extent, const TemporalStats& stats) {
  return stats.lambda_t * std::abs(stats.mean_extent - extent) /
         stats.mean_extent;
}

size_t argmax_first(std::span<const double> scores) {
  size_t best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

size_t rescore_select(std::span<const double> scores,
                      std::span<const Tube> proposals,
                      const PseudoTrack& track, const VideoMeta& meta,
                      double lambda_p) {
  SelectionOptions options;
  options.pseudo = &track;
  options.lambda_p = lambda_p;
  return argmax_first(adjusted_scores(scores, proposals, meta, options));
}

size_t temporal_rescore(std::span<const double> scores,
                        std::span<const double> extents,
                        const TemporalStats& stats) {
  if (!(stats.mean_extent > 0.0))
    throw Error("temporal statistics need a positive mean extent");
  std::vector<double> adjusted(scores.begin(), scores.end());
  for (size_t i = 0; i < adjusted.size(); ++i)
    adjusted[i] -= temporal_penalty(extents[i], stats);
  return argmax_first(adjusted);
}

std::vector<double> adjusted_scores(std::span<const double> scores,
                                    std::span<const Tube> proposals,
                                    const VideoMeta& meta,
                                    const SelectionOptions& options) {
  if (scores.size() != proposals.size())
    throw Error("scores and proposals are misaligned");
  std::vector<double> out(scores.begin(), scores.end());
  if (options.pseudo != nullptr && options.lambda_p != 0.0) {
    const PointTrack pts = options.pseudo->as_point_track();
    for (size_t i = 0; i < out.size(); ++i)
      out[i] += options.lambda_p * overlap(proposals[i], pts, meta);
  }
  if (options.temporal != nullptr && options.temporal->lambda_t != 0.0) {
    for (size_t i = 0; i < out.size(); ++i)
      out[i] -= temporal_penalty(relative_extent(proposals[i], meta),
                                 *options.temporal);
  }
  return out;
}

}  // namespace pointloc
