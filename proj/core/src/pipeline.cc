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

#include "pointloc/pipeline.h"

#include <cstdio>
#include <future>
#include <map>

#include "pointloc/error.h"
#include "pointloc/random.h"
#include "pointloc/synth.h"

namespace pointloc {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kPoint: return "point";
    case Regime::kVideoLabel: return "video-label";
    case Regime::kBox: return "box";
    case Regime::kBestProposal: return "best-proposal";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (Regime r : {Regime::kPoint, Regime::kVideoLabel, Regime::kBox,
                   Regime::kBestProposal}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

uint64_t action_seed(uint64_t seed, int action) {
  return splitmix64(seed ^ splitmix64(0x1000u + static_cast<uint64_t>(action)));
}

std::vector<LinearModel> train_models(const Dataset& dataset, Regime regime,
                                      const MiningConfig& config) {
  config.validate();
  const std::vector<const Video*> train = dataset.split(Split::kTrain);
  if (train.empty()) throw Error("dataset has no training videos");
  std::vector<std::future<LinearModel>> jobs;
  for (int a = 0; a < static_cast<int>(dataset.actions.size()); ++a) {
    MiningConfig c = config;
    c.seed = action_seed(config.seed, a);
    jobs.push_back(std::async(std::launch::async, [&train, regime, c, a] {
      switch (regime) {
        case Regime::kPoint:
          return mil_train(a, train, c).model;
        case Regime::kVideoLabel: {
          MiningConfig plain = c;
          plain.prior_weight = 0.0;
          return mil_train(a, train, plain).model;
        }
        case Regime::kBox:
          return box_supervised_train(a, train, c).model;
        case Regime::kBestProposal:
          return best_proposal_train(a, train, c).model;
      }
      throw Error("unknown training regime");
    }));
  }
  std::vector<LinearModel> models;
  for (auto& j : jobs) models.push_back(j.get());
  return models;
}

PseudoWeight estimate_pseudo_weight(const Dataset& dataset, PseudoKind kind) {
  const auto train = dataset.split(Split::kTrain);
  std::map<int, Point> stats;
  std::vector<PseudoTrack> tracks;
  for (const Video* v : train) {
    std::optional<Point> ts;
    if (kind == PseudoKind::kTrainStats && !v->labels.empty()) {
      const int a = v->labels.front();
      if (!stats.count(a)) stats[a] = train_stats_point(a, train);
      ts = stats[a];
    }
    tracks.push_back(make_pseudo_track(kind, *v, ts));
  }
  return weight_pseudo(kind, tracks, train);
}

std::vector<PseudoKind> available_pseudo_kinds(const Dataset& dataset) {
  bool detections = !dataset.videos.empty(), motion = !dataset.videos.empty();
  for (const Video& v : dataset.videos) {
    detections = detections && v.detections.has_value();
    motion = motion && v.mass_maps.has_value();
  }
  std::vector<PseudoKind> out;
  for (PseudoKind k : kAllPseudoKinds) {
    if (k == PseudoKind::kPerson && !detections) continue;
    if (k == PseudoKind::kIndependentMotion && !motion) continue;
    out.push_back(k);
  }
  return out;
}

InferResult infer(const Dataset& dataset, std::span<const LinearModel> models,
                  const InferOptions& options) {
  if (models.size() != dataset.actions.size())
    throw Error("expected " + std::to_string(dataset.actions.size()) +
                " models, got " + std::to_string(models.size()));
  const size_t dim = dataset.feature_dim();
  for (const LinearModel& m : models) {
    if (m.dim() != dim)
      throw Error("model dimension " + std::to_string(m.dim()) +
                  " does not match feature dimension " + std::to_string(dim));
  }
  const auto train = dataset.split(Split::kTrain);
  const auto test = dataset.split(Split::kTest);
  InferResult result;

  double lambda_p = 0.0;
  if (options.pseudo) {
    lambda_p = options.lambda_p ? *options.lambda_p
                                : estimate_pseudo_weight(dataset, *options.pseudo).lambda_p;
    result.weight = PseudoWeight{*options.pseudo, lambda_p};
  }

  // Tracks that do not depend on the action are built once per video.
  std::vector<std::optional<PseudoTrack>> shared(test.size());
  if (options.pseudo && *options.pseudo != PseudoKind::kTrainStats) {
    for (size_t i = 0; i < test.size(); ++i) {
      shared[i] = make_pseudo_track(*options.pseudo, *test[i]);
      result.degenerate_frames += shared[i]->degenerate_frames();
    }
  }

  for (int a = 0; a < static_cast<int>(models.size()); ++a) {
    const LinearModel& model = models[static_cast<size_t>(a)];
    std::optional<Point> stats_point;
    if (options.pseudo == PseudoKind::kTrainStats)
      stats_point = train_stats_point(a, train);
    std::optional<TemporalStats> temporal;
    if (options.temporal) temporal = temporal_stats(a, train, options.lambda_t);

    for (size_t i = 0; i < test.size(); ++i) {
      const Video& v = *test[i];
      if (v.proposals.empty()) throw Error("test video " + v.id + " has no proposals");
      std::vector<double> scores(v.proposals.size());
      for (size_t p = 0; p < scores.size(); ++p)
        scores[p] = model.decision(v.features.row(p));

      std::optional<PseudoTrack> own;
      SelectionOptions sel;
      if (options.pseudo) {
        if (stats_point) own = pp_train_stats(*stats_point, v.meta);
        sel.pseudo = own ? &*own : &*shared[i];
        sel.lambda_p = lambda_p;
      }
      if (temporal) sel.temporal = &*temporal;
      const size_t best =
          argmax_first(adjusted_scores(scores, v.proposals, v.meta, sel));
      result.detections.push_back({v.id, a, scores[best], v.proposals[best], best});
    }
  }
  return result;
}

GroundTruth test_ground_truth(const Dataset& dataset) {
  const auto test = dataset.split(Split::kTest);
  return GroundTruth::from_videos(test);
}

Dataset with_point_stride(const Dataset& dataset, int stride) {
  Dataset out = dataset;
  for (Video& v : out.videos) {
    if (v.split == Split::kTrain) v.points = subsample_points(v.points, stride);
  }
  return out;
}

Dataset with_point_noise(const Dataset& dataset, double sigma, uint64_t seed) {
  Dataset out = dataset;
  uint64_t k = 0;
  for (Video& v : out.videos) {
    ++k;
    if (v.split != Split::kTrain) continue;
    v.points = perturb_points(v.points, sigma, v.meta, splitmix64(seed ^ splitmix64(k)));
  }
  return out;
}

Dataset with_epsilon(const Dataset& dataset, double epsilon, uint64_t seed) {
  Dataset out = dataset;
  uint64_t k = 0;
  for (Video& v : out.videos) {
    ++k;
    keep_proposals(v, filter_low_quality(v, epsilon, splitmix64(seed ^ splitmix64(k))));
  }
  return out;
}

namespace {

std::vector<double> run_map(const Dataset& dataset, const SweepPlan& plan,
                            const InferOptions& infer_options,
                            std::optional<double>* lambda_p = nullptr) {
  const auto models = train_models(dataset, plan.regime, plan.mining);
  const InferResult r = infer(dataset, models, infer_options);
  if (lambda_p != nullptr && r.weight) *lambda_p = r.weight->lambda_p;
  std::vector<double> maps;
  for (const auto& [tau, m] :
       map_over_thresholds(r.detections, test_ground_truth(dataset), plan.taus))
    maps.push_back(m);
  return maps;
}

std::string fmt(double v, const char* pattern = "%g") {
  char buf[32];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

std::vector<SweepRow> sweep_stride(const Dataset& dataset,
                                   std::span<const int> strides,
                                   const SweepPlan& plan) {
  std::vector<SweepRow> rows;
  for (int s : strides) {
    rows.push_back({"stride=" + std::to_string(s), static_cast<double>(s),
                    run_map(with_point_stride(dataset, s), plan, plan.infer), {}});
  }
  return rows;
}

std::vector<SweepRow> sweep_sigma(const Dataset& dataset,
                                  std::span<const double> sigmas,
                                  const SweepPlan& plan) {
  std::vector<SweepRow> rows;
  for (double s : sigmas) {
    rows.push_back({"sigma=" + fmt(s), s,
                    run_map(with_point_noise(dataset, s, plan.mining.seed), plan,
                            plan.infer),
                    {}});
  }
  return rows;
}

std::vector<SweepRow> sweep_epsilon(const Dataset& dataset,
                                    std::span<const double> epsilons,
                                    const SweepPlan& plan) {
  std::vector<SweepRow> rows;
  for (double e : epsilons) {
    rows.push_back({"epsilon=" + fmt(e), e,
                    run_map(with_epsilon(dataset, e, plan.mining.seed), plan,
                            plan.infer),
                    {}});
  }
  return rows;
}

std::vector<SweepRow> sweep_pseudo(const Dataset& dataset,
                                   const SweepPlan& plan) {
  const auto models = train_models(dataset, plan.regime, plan.mining);
  const GroundTruth gt = test_ground_truth(dataset);
  auto evaluate_with = [&](const InferOptions& o, SweepRow row) {
    const InferResult r = infer(dataset, models, o);
    if (r.weight) row.lambda_p = r.weight->lambda_p;
    for (const auto& [tau, m] : map_over_thresholds(r.detections, gt, plan.taus))
      row.map.push_back(m);
    return row;
  };
  std::vector<SweepRow> rows;
  InferOptions none;
  rows.push_back(evaluate_with(none, {"none", 0.0, {}, {}}));
  double index = 1.0;
  for (PseudoKind k : available_pseudo_kinds(dataset)) {
    InferOptions o;
    o.pseudo = k;
    rows.push_back(evaluate_with(o, {std::string(to_string(k)), index++, {}, {}}));
  }
  InferOptions temporal;
  temporal.temporal = true;
  temporal.lambda_t = plan.infer.lambda_t;
  rows.push_back(evaluate_with(temporal, {"temporal", index, {}, {}}));
  return rows;
}

std::string sweep_to_csv(std::string_view parameter,
                         std::span<const SweepRow> rows,
                         std::span<const double> taus) {
  std::string out = "# pointloc sweep v1\n";
  out += std::string(parameter) + ",setting,lambda_p";
  for (double t : taus) out += ",map@" + fmt(t);
  out += "\n";
  for (const SweepRow& r : rows) {
    out += fmt(r.value) + "," + r.setting + ",";
    if (r.lambda_p) out += fmt(*r.lambda_p, "%.6f");
    for (double m : r.map) out += "," + fmt(m, "%.6f");
    out += "\n";
  }
  return out;
}

}  // namespace pointloc
