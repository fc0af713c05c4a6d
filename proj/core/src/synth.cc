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

#include "pointloc/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "pointloc/error.h"
#include "pointloc/random.h"

namespace pointloc {

void SynthConfig::validate() const {
  if (n_actions < 2) throw Error("synthetic data needs at least two actions");
  if (train_per_action < 1 || test_per_action < 1)
    throw Error("videos per action must be positive");
  if (frames_per_video < 2) throw Error("videos need at least two frames");
  if (width < 16 || height < 16) throw Error("frame size must be at least 16x16");
  if (proposals_per_video < 1) throw Error("proposals_per_video must be positive");
  if (!(overlap_mixture >= 0.0 && overlap_mixture <= 1.0))
    throw Error("overlap_mixture must lie in [0, 1]");
  if (feature_dim < 1) throw Error("feature_dim must be positive");
  if (!(feature_noise >= 0.0)) throw Error("feature_noise must be non-negative");
  if (point_stride < 1) throw Error("point_stride must be at least 1");
  if (!(point_sigma >= 0.0) || !(person_sigma >= 0.0))
    throw Error("noise levels must be non-negative");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
  if (mass_downsample < 1) throw Error("mass_downsample must be positive");
  const double jittered = overlap_mixture * proposals_per_video;
  if (overlap_mixture > 0.0 && std::lround(jittered) == 0)
    throw Error("unsatisfiable overlap mixture: " + std::to_string(jittered) +
                " jittered proposals rounds to none");
}

namespace {

constexpr double kMinSide = 4.0;

Box clamp_box(double cx, double cy, double w, double h, const VideoMeta& meta) {
  const double W = meta.width, H = meta.height;
  w = std::clamp(w, kMinSide, W);
  h = std::clamp(h, kMinSide, H);
  cx = std::clamp(cx, w / 2, W - w / 2);
  cy = std::clamp(cy, h / 2, H - h / 2);
  return {cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2};
}

// Box track moving as a damped random walk.
Tube random_walk_tube(int start, int length, double w, double h, double cx,
                      double cy, double speed, const VideoMeta& meta, Rng& rng,
                      double xlo, double xhi) {
  Tube t;
  t.start_frame = start;
  double vx = 0.0, vy = 0.0, scale = 1.0;
  for (int i = 0; i < length; ++i) {
    const Box b = clamp_box(cx, cy, w * scale, h * scale, meta);
    t.boxes.push_back(b);
    const auto [gx, gy] = rng.gaussian_pair();
    vx = 0.8 * vx + speed * gx;
    vy = 0.8 * vy + speed * gy;
    cx = std::clamp(b.center().x + vx, xlo, xhi);
    cy = b.center().y + vy;
    scale = std::clamp(scale * std::exp(0.02 * rng.gaussian()), 0.85, 1.15);
  }
  return t;
}

Tube make_ground_truth(const SynthConfig& c, const VideoMeta& meta, Rng rng) {
  const int F = meta.frame_count;
  const int length = std::max(2, static_cast<int>(std::lround(rng.uniform(0.4, 1.0) * F)));
  const int start = 1 + static_cast<int>(rng.below(static_cast<size_t>(F - length + 1)));
  const double w = rng.uniform(0.15, 0.3) * meta.width;
  const double h = rng.uniform(0.3, 0.55) * meta.height;
  double xlo = w / 2, xhi = meta.width - w / 2;
  if (c.off_center) {
    const bool left = rng.uniform() < 0.5;
    const double lo = left ? 0.12 : 0.75, hi = left ? 0.25 : 0.88;
    xlo = std::max(xlo, lo * meta.width);
    xhi = std::min(xhi, hi * meta.width);
    if (xlo > xhi) xlo = xhi = 0.5 * (lo + hi) * meta.width;
  }
  const double cx = rng.uniform(xlo, xhi);
  const double cy = rng.uniform(h / 2, meta.height - h / 2);
  return random_walk_tube(start, length, w, h, cx, cy, 1.5, meta, rng, xlo, xhi);
}

// Copy of the ground truth perturbed in time, position and scale. Quality q
// in [0, 1] scales the perturbation down.
Tube jitter_tube(const Tube& gt, const VideoMeta& meta, Rng& rng) {
  const double q = rng.uniform();
  const double loose = 1.0 - q;
  const int F = meta.frame_count;
  const int len = gt.length();
  int start = gt.start_frame +
              static_cast<int>(std::lround(rng.gaussian() * loose * 0.3 * len));
  int end = gt.end_frame() +
            static_cast<int>(std::lround(rng.gaussian() * loose * 0.3 * len));
  start = std::clamp(start, 1, F);
  end = std::clamp(end, 1, F);
  if (end - start < 1) {
    start = std::clamp(gt.start_frame, 1, F - 1);
    end = start + 1;
  }
  const Box& first_box = gt.boxes.front();
  const double dx = rng.gaussian() * loose * 0.5 * first_box.width();
  const double dy = rng.gaussian() * loose * 0.5 * first_box.height();
  const double sx = std::exp(rng.gaussian() * loose * 0.4);
  const double sy = std::exp(rng.gaussian() * loose * 0.4);
  Tube t;
  t.start_frame = start;
  for (int f = start; f <= end; ++f) {
    const int g = std::clamp(f, gt.start_frame, gt.end_frame());
    const Box& b = *gt.at(g);
    const auto [nx, ny] = rng.gaussian_pair();
    t.boxes.push_back(clamp_box(b.center().x + dx + 2.0 * nx,
                                b.center().y + dy + 2.0 * ny, b.width() * sx,
                                b.height() * sy, meta));
  }
  return t;
}

Tube background_tube(const VideoMeta& meta, Rng& rng) {
  const int F = meta.frame_count;
  const int length = std::max(2, static_cast<int>(std::lround(rng.uniform(0.2, 1.0) * F)));
  const int start = 1 + static_cast<int>(rng.below(static_cast<size_t>(F - length + 1)));
  const double w = rng.uniform(0.1, 0.9) * meta.width;
  const double h = rng.uniform(0.2, 0.95) * meta.height;
  const double cx = rng.uniform(0.0, meta.width);
  const double cy = rng.uniform(0.0, meta.height);
  return random_walk_tube(start, length, w, h, cx, cy, 2.0, meta, rng, 0.0,
                          meta.width);
}

std::vector<double> unit_gaussian(int dim, Rng& rng) {
  std::vector<double> v(static_cast<size_t>(dim));
  double sq = 0.0;
  for (double& x : v) {
    x = rng.gaussian();
    sq += x * x;
  }
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

FrameDetections make_detections(const Tube& gt, const SynthConfig& c,
                                const VideoMeta& meta, Rng rng) {
  FrameDetections out(static_cast<size_t>(meta.frame_count));
  for (int f = 1; f <= meta.frame_count; ++f) {
    auto& frame = out[static_cast<size_t>(f - 1)];
    if (const Box* b = gt.at(f)) {
      const auto [nx, ny] = rng.gaussian_pair();
      const double s = std::exp(0.05 * rng.gaussian());
      frame.push_back({clamp_box(b->center().x + c.person_sigma * nx,
                                 b->center().y + c.person_sigma * ny,
                                 b->width() * s, b->height() * s, meta),
                       rng.uniform(0.7, 1.0)});
    }
    const int distractors = static_cast<int>(rng.below(4));
    for (int k = 0; k < distractors; ++k) {
      const double w = rng.uniform(0.08, 0.25) * meta.width;
      const double h = rng.uniform(0.2, 0.5) * meta.height;
      frame.push_back({clamp_box(rng.uniform(0.0, meta.width),
                                 rng.uniform(0.0, meta.height), w, h, meta),
                       rng.uniform(0.05, 0.65)});
    }
  }
  return out;
}

MassMaps make_mass_maps(const Tube& gt, const SynthConfig& c,
                        const VideoMeta& meta, Rng rng) {
  MassMaps m;
  m.frame_count = meta.frame_count;
  m.downsample = c.mass_downsample;
  m.grid_width = (meta.width + c.mass_downsample - 1) / c.mass_downsample;
  m.grid_height = (meta.height + c.mass_downsample - 1) / c.mass_downsample;
  m.values.resize(m.cells_per_frame() * static_cast<size_t>(m.frame_count));
  size_t k = 0;
  for (int f = 1; f <= meta.frame_count; ++f) {
    const Box* b = gt.at(f);
    for (int gy = 0; gy < m.grid_height; ++gy) {
      for (int gx = 0; gx < m.grid_width; ++gx) {
        double v = rng.uniform(0.0, 0.05);
        const Point center{(gx + 0.5) * m.downsample, (gy + 0.5) * m.downsample};
        if (b != nullptr && b->contains(center)) v += rng.uniform(0.6, 1.0);
        m.values[k++] = static_cast<float>(v);
      }
    }
  }
  return m;
}

std::string video_id(const std::string& action, Split split, int k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%s_%03d", action.c_str(),
                split == Split::kTrain ? "train" : "test", k);
  return buf;
}

}  // namespace

std::vector<std::vector<double>> synth_prototypes(const SynthConfig& config) {
  Rng proto_rng = Rng(config.seed).derive(1);
  std::vector<std::vector<double>> prototypes;
  for (int a = 0; a < config.n_actions; ++a)
    prototypes.push_back(unit_gaussian(config.feature_dim, proto_rng));
  return prototypes;
}

Dataset synth_generate(const SynthConfig& config) {
  config.validate();
  const Rng root(config.seed);
  Dataset ds;
  for (int a = 0; a < config.n_actions; ++a)
    ds.actions.push_back("action" + std::to_string(a));

  const auto prototypes = synth_prototypes(config);

  const VideoMeta meta{config.frames_per_video, config.width, config.height};
  const int n_props = config.proposals_per_video;
  const int n_jitter = static_cast<int>(std::lround(config.overlap_mixture * n_props));

  uint64_t video_index = 0;
  for (Split split : {Split::kTrain, Split::kTest}) {
    const int per_action =
        split == Split::kTrain ? config.train_per_action : config.test_per_action;
    for (int a = 0; a < config.n_actions; ++a) {
      for (int k = 0; k < per_action; ++k) {
        const Rng vrng = root.derive(1000 + video_index++);
        Video v;
        v.id = video_id(ds.actions[static_cast<size_t>(a)], split, k);
        v.meta = meta;
        v.split = split;
        v.labels = {a};
        const Tube gt = make_ground_truth(config, meta, vrng.derive(1));
        v.ground_truth.push_back({a, gt});

        Rng prng = vrng.derive(2);
        for (int p = 0; p < n_props; ++p) {
          if (p == 0 && config.include_oracle) {
            v.proposals.push_back(gt);
          } else if (p < n_jitter) {
            v.proposals.push_back(jitter_tube(gt, meta, prng));
          } else {
            v.proposals.push_back(background_tube(meta, prng));
          }
        }
        vrng.derive(7).shuffle(v.proposals);

        Rng frng = vrng.derive(3);
        const auto& proto = prototypes[static_cast<size_t>(a)];
        v.features = FeatureMatrix(v.proposals.size(),
                                   static_cast<size_t>(config.feature_dim));
        for (size_t p = 0; p < v.proposals.size(); ++p) {
          const double iou = tube_iou(v.proposals[p], gt);
          std::vector<double> x(static_cast<size_t>(config.feature_dim));
          double sq = 0.0;
          for (size_t d = 0; d < x.size(); ++d) {
            x[d] = proto[d] * iou + config.feature_noise * frng.gaussian();
            sq += x[d] * x[d];
          }
          const double norm = sq > 0.0 ? std::sqrt(sq) : 1.0;
          auto row = v.features.row(p);
          for (size_t d = 0; d < x.size(); ++d)
            row[d] = static_cast<float>(x[d] / norm);
        }

        PointTrack dense;
        for (int f = gt.start_frame; f <= gt.end_frame(); ++f)
          dense.emplace(f, gt.at(f)->center());
        v.points = perturb_points(subsample_points(dense, config.point_stride),
                                  config.point_sigma, meta,
                                  vrng.derive(4).next_u64());

        if (config.include_detections)
          v.detections = make_detections(gt, config, meta, vrng.derive(5));
        if (config.include_mass_maps)
          v.mass_maps = make_mass_maps(gt, config, meta, vrng.derive(6));

        if (config.epsilon > 0.0)
          keep_proposals(v, filter_low_quality(v, config.epsilon,
                                               vrng.derive(8).next_u64()));
        ds.videos.push_back(std::move(v));
      }
    }
  }
  return ds;
}

PointTrack perturb_points(const PointTrack& track, double sigma,
                          const VideoMeta& meta, uint64_t seed) {
  if (!(sigma >= 0.0)) throw Error("point noise sigma must be non-negative");
  if (sigma == 0.0) return track;
  Rng rng(seed);
  PointTrack out;
  for (const auto& [frame, p] : track) {
    const auto [gx, gy] = rng.gaussian_pair();
    out.emplace_hint(out.end(), frame,
                     clamp_to_frame({p.x + sigma * gx, p.y + sigma * gy}, meta));
  }
  return out;
}

PointTrack subsample_points(const PointTrack& track, int stride) {
  if (stride < 1) throw Error("annotation stride must be at least 1");
  if (track.empty()) return track;
  const int first = track.begin()->first;
  PointTrack out;
  for (const auto& [frame, p] : track) {
    if ((frame - first) % stride == 0) out.emplace_hint(out.end(), frame, p);
  }
  return out;
}

std::vector<size_t> filter_low_quality(const Video& video, double epsilon,
                                       uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in [0, 1]");
  std::vector<size_t> low;
  for (size_t i = 0; i < video.proposals.size(); ++i) {
    if (video.best_gt_iou(video.proposals[i]) <= kLowQualityIou) low.push_back(i);
  }
  const auto n_remove = static_cast<size_t>(
      std::floor(epsilon * static_cast<double>(low.size()) + 1e-9));
  std::vector<bool> removed(video.proposals.size(), false);
  Rng rng(seed);
  for (size_t k : rng.sample_without_replacement(low.size(), n_remove))
    removed[low[k]] = true;
  std::vector<size_t> kept;
  for (size_t i = 0; i < video.proposals.size(); ++i) {
    if (!removed[i]) kept.push_back(i);
  }
  return kept;
}

void keep_proposals(Video& video, const std::vector<size_t>& indices) {
  std::vector<Tube> proposals;
  proposals.reserve(indices.size());
  for (size_t i : indices) proposals.push_back(video.proposals.at(i));
  video.features = video.features.select(indices);
  video.proposals = std::move(proposals);
}

}  // namespace pointloc
