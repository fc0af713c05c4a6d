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

#ifndef POINTLOC_PSEUDO_H_
#define POINTLOC_PSEUDO_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pointloc/geometry.h"
#include "pointloc/video.h"

namespace pointloc {

enum class PseudoKind {
  kTrainStats,
  kSelfSupervision,
  kPerson,
  kIndependentMotion,
  kCenter,
};

inline constexpr PseudoKind kAllPseudoKinds[] = {
    PseudoKind::kTrainStats, PseudoKind::kSelfSupervision, PseudoKind::kPerson,
    PseudoKind::kIndependentMotion, PseudoKind::kCenter};

// Command-line names: train_stats, self, person, imotion, center.
std::string_view to_string(PseudoKind kind);
std::optional<PseudoKind> parse_pseudo_kind(std::string_view name);

// Automatic per-frame annotation covering every frame of one video.
struct PseudoTrack {
  PseudoKind kind = PseudoKind::kCenter;
  std::vector<Point> points;       // index frame - 1
  std::vector<Box> boxes;          // person kind only, index frame - 1
  std::vector<bool> degenerate;    // frame fell back to a default

  int frame_count() const { return static_cast<int>(points.size()); }
  PointTrack as_point_track() const;
  size_t degenerate_frames() const;
};

struct Centroid {
  Point point;
  bool degenerate = false;
};

// Mean relative point (x / width, y / height) of one video's annotations.
Point mean_relative_point(const PointTrack& points, const VideoMeta& meta);

// Average over the action's training videos of their mean relative point.
// Throws pointloc::Error when no training video carries the action.
Point train_stats_point(int action, std::span<const Video* const> training);

PseudoTrack pp_train_stats(const Point& relative, const VideoMeta& meta);

// Coverage-weighted center of mass of the proposals present in `frame`,
// boxes clipped to the frame. The mass of a pixel is the number of proposals
// containing it, so the centroid equals the area-weighted mean of the clipped
// box centers. Falls back to the frame center when nothing covers the frame.
Centroid pp_self_supervision(std::span<const Tube> proposals, int frame,
                             const VideoMeta& meta);
PseudoTrack self_supervision_track(std::span<const Tube> proposals,
                                   const VideoMeta& meta);

// Highest-confidence detection per frame (ties to the first record). Frames
// without detections repeat the previous frame's box, or a unit box at the
// frame center before the first detection.
PseudoTrack pp_person(const FrameDetections& detections, const VideoMeta& meta);

// Weighted mean of grid coordinates, or nullopt when all mass is zero.
std::optional<Point> grid_centroid(std::span<const float> grid, int grid_width,
                                   int grid_height);
Centroid pp_independent_motion(const MassMaps& maps, int frame,
                               const VideoMeta& meta);
PseudoTrack independent_motion_track(const MassMaps& maps,
                                     const VideoMeta& meta);

Point pp_center(const VideoMeta& meta);
PseudoTrack center_track(const VideoMeta& meta);

// Builds a track of the given kind for a video. `train_stats` is required for
// kTrainStats; person and motion kinds require the video's detections and
// mass maps respectively.
PseudoTrack make_pseudo_track(PseudoKind kind, const Video& video,
                              const std::optional<Point>& train_stats = {});

struct PseudoWeight {
  PseudoKind kind = PseudoKind::kCenter;
  double lambda_p = 0.0;
};

// Agreement between a pseudo track and one manual point. Person tracks use
// center_match_term on the full box; point tracks normalize the distance by
// the manual point's distance to the nearest frame border.
double pseudo_frame_score(const PseudoTrack& track, int frame,
                          const Point& manual, const VideoMeta& meta);

// Mean over annotated frames, then over all given videos. tracks[i] belongs
// to videos[i]. Throws pointloc::Error on an empty or misaligned input.
PseudoWeight weight_pseudo(PseudoKind kind,
                           std::span<const PseudoTrack> tracks,
                           std::span<const Video* const> videos);

struct TemporalStats {
  double mean_extent = 1.0;  // F_Y in (0, 1]
  double lambda_t = 1.0;
};

// Per-video annotation span (last - first + 1) / frame_count, averaged over
// the action's videos. Throws pointloc::Error when the action is absent.
TemporalStats temporal_stats(int action, std::span<const Video* const> training,
                             double lambda_t = 1.0);

double temporal_penalty(double extent, const TemporalStats& stats);

// Lowest index of the maximum.
size_t argmax_first(std::span<const double> scores);

// argmax of scores[i] + lambda_p * overlap(proposals[i], pseudo points).
// Person boxes enter through their centers.
size_t rescore_select(std::span<const double> scores,
                      std::span<const Tube> proposals,
                      const PseudoTrack& track, const VideoMeta& meta,
                      double lambda_p);

// argmax of scores[i] - lambda_t * |F_Y - extents[i]| / F_Y.
size_t temporal_rescore(std::span<const double> scores,
                        std::span<const double> extents,
                        const TemporalStats& stats);

struct SelectionOptions {
  const PseudoTrack* pseudo = nullptr;
  double lambda_p = 0.0;
  const TemporalStats* temporal = nullptr;
};

// Spatial and temporal adjustments applied as additive terms; either may be
// absent. Returns the adjusted score of every proposal.
std::vector<double> adjusted_scores(std::span<const double> scores,
                                    std::span<const Tube> proposals,
                                    const VideoMeta& meta,
                                    const SelectionOptions& options);

}  // namespace pointloc

#endif  // POINTLOC_PSEUDO_H_
