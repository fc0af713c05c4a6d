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

#include "pointloc/eval.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "pointloc/error.h"

namespace pointloc {

GroundTruth GroundTruth::from_videos(std::span<const Video* const> videos) {
  GroundTruth gt;
  for (const Video* v : videos) gt.videos[v->id] = v->ground_truth;
  return gt;
}

size_t GroundTruth::instance_count(int action) const {
  size_t n = 0;
  for (const auto& [id, instances] : videos) {
    for (const auto& inst : instances) n += inst.action == action ? 1 : 0;
  }
  return n;
}

const std::vector<GroundTruthInstance>& GroundTruth::at(
    std::string_view video_id) const {
  auto it = videos.find(video_id);
  if (it == videos.end())
    throw Error("unknown video id '" + std::string(video_id) + "'");
  return it->second;
}

namespace {

template <typename Item, typename Score, typename Id>
std::vector<size_t> rank_by(std::span<const Item> items, Score score, Id id) {
  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double sa = score(items[a]), sb = score(items[b]);
    if (sa != sb) return sa > sb;
    return id(items[a]) < id(items[b]);
  });
  return order;
}

std::vector<size_t> rank_detections(std::span<const Detection> detections) {
  return rank_by(
      detections, [](const Detection& d) { return d.score; },
      [](const Detection& d) -> const std::string& { return d.video_id; });
}

}  // namespace

std::vector<LabeledDetection> label_detections(
    std::span<const Detection> detections, const GroundTruth& gt, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error("tau must lie in (0, 1]");
  std::vector<LabeledDetection> out(detections.size());
  for (size_t i = 0; i < detections.size(); ++i) {
    gt.at(detections[i].video_id);
    out[i] = {detections[i].video_id, detections[i].score, false};
  }
  std::set<std::pair<std::string_view, size_t>> claimed;
  for (size_t i : rank_detections(detections)) {
    const Detection& d = detections[i];
    const auto& instances = gt.at(d.video_id);
    double best = -1.0;
    size_t best_inst = 0;
    for (size_t k = 0; k < instances.size(); ++k) {
      if (instances[k].action != d.action) continue;
      if (claimed.count({d.video_id, k})) continue;
      const double iou = tube_iou(d.tube, instances[k].tube);
      if (iou > best) {
        best = iou;
        best_inst = k;
      }
    }
    if (best >= tau) {
      out[i].positive = true;
      claimed.insert({d.video_id, best_inst});
    }
  }
  return out;
}

std::vector<size_t> ranking(std::span<const LabeledDetection> labeled) {
  return rank_by(
      labeled, [](const LabeledDetection& d) { return d.score; },
      [](const LabeledDetection& d) -> const std::string& { return d.video_id; });
}

double average_precision(std::span<const LabeledDetection> labeled,
                         size_t n_gt) {
  if (n_gt == 0) throw Error("average precision needs ground truth");
  double sum = 0.0;
  size_t tp = 0, rank = 0;
  for (size_t i : ranking(labeled)) {
    ++rank;
    if (!labeled[i].positive) continue;
    ++tp;
    sum += static_cast<double>(tp) / static_cast<double>(rank);
  }
  return sum / static_cast<double>(n_gt);
}

std::optional<double> roc_auc(std::span<const LabeledDetection> labeled) {
  std::vector<double> pos, neg;
  for (const auto& d : labeled) (d.positive ? pos : neg).push_back(d.score);
  if (pos.empty() || neg.empty()) return std::nullopt;
  double wins = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) {
        wins += 1.0;
      } else if (p == n) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(pos.size()) * neg.size());
}

EvalReport evaluate(std::span<const Detection> detections, const GroundTruth& gt,
                    std::span<const double> taus) {
  std::set<int> actions;
  for (const auto& [id, instances] : gt.videos) {
    for (const auto& inst : instances) actions.insert(inst.action);
  }
  EvalReport report;
  for (double tau : taus) {
    const auto labeled = label_detections(detections, gt, tau);
    ThresholdMetrics summary{tau, 0.0, std::nullopt};
    double auc_sum = 0.0;
    int auc_count = 0;
    for (int action : actions) {
      std::vector<LabeledDetection> mine;
      for (size_t i = 0; i < detections.size(); ++i) {
        if (detections[i].action == action) mine.push_back(labeled[i]);
      }
      ActionMetrics m;
      m.action = action;
      m.tau = tau;
      m.n_gt = gt.instance_count(action);
      m.n_detections = mine.size();
      m.ap = average_precision(mine, m.n_gt);
      m.auc = roc_auc(mine);
      if (m.auc) {
        auc_sum += *m.auc;
        ++auc_count;
      }
      summary.map += m.ap;
      report.per_action.push_back(m);
    }
    if (!actions.empty()) summary.map /= static_cast<double>(actions.size());
    if (auc_count > 0) summary.mean_auc = auc_sum / auc_count;
    report.per_tau.push_back(summary);
  }
  return report;
}

std::vector<std::pair<double, double>> map_over_thresholds(
    std::span<const Detection> detections, const GroundTruth& gt,
    std::span<const double> taus) {
  std::vector<std::pair<double, double>> out;
  for (const auto& t : evaluate(detections, gt, taus).per_tau)
    out.emplace_back(t.tau, t.map);
  return out;
}

std::string_view to_string(ErrorType type) {
  switch (type) {
    case ErrorType::kCorrect: return "correct";
    case ErrorType::kLocalization: return "localization";
    case ErrorType::kConfusion: return "confusion";
    case ErrorType::kBackgroundOwn: return "background_own";
    case ErrorType::kBackgroundOther: return "background_other";
  }
  return "unknown";
}

ErrorType classify_detection(const Detection& detection, const GroundTruth& gt,
                             double tau) {
  const auto& instances = gt.at(detection.video_id);
  bool positive_video = false;
  double own = 0.0, other = 0.0;
  for (const auto& inst : instances) {
    const double iou = tube_iou(detection.tube, inst.tube);
    if (inst.action == detection.action) {
      positive_video = true;
      own = std::max(own, iou);
    } else {
      other = std::max(other, iou);
    }
  }
  if (positive_video) {
    if (own >= tau) return ErrorType::kCorrect;
    if (own >= kDiagnosisInnerIou) return ErrorType::kLocalization;
    return ErrorType::kBackgroundOwn;
  }
  return other >= kDiagnosisInnerIou ? ErrorType::kConfusion
                                     : ErrorType::kBackgroundOther;
}

size_t ErrorCounts::total() const {
  return std::accumulate(counts.begin(), counts.end(), size_t{0});
}

std::vector<DiagnosisRow> diagnose(std::span<const Detection> detections,
                                   const GroundTruth& gt, double tau) {
  if (!(tau > kDiagnosisInnerIou && tau <= 1.0))
    throw Error("diagnosis needs 0.1 < tau <= 1");
  std::set<int> actions;
  for (const auto& [id, instances] : gt.videos) {
    for (const auto& inst : instances) actions.insert(inst.action);
  }
  std::vector<DiagnosisRow> rows;
  for (int action : actions) {
    std::vector<Detection> mine;
    for (const auto& d : detections) {
      if (d.action == action) mine.push_back(d);
    }
    DiagnosisRow row;
    row.action = action;
    row.r = gt.instance_count(action);
    const auto order = rank_detections(mine);
    const size_t top = std::min(row.r, order.size());
    for (size_t k = 0; k < top; ++k)
      ++row.counts[classify_detection(mine[order[k]], gt, tau)];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pointloc
