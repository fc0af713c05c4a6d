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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "pointloc/error.h"
#include "pointloc/eval.h"
#include "pointloc/random.h"

namespace pointloc {
namespace {

using fixture::constant_tube;

const Box kGtBox{0, 0, 100, 100};

// A tube over frames 1..10 whose IoU with the 10-frame ground truth is `iou`.
Tube tube_with_iou(double iou) {
  return constant_tube(1, 10, {0, 0, 100 * iou, 100});
}

GroundTruth one_video_gt(std::vector<GroundTruthInstance> instances,
                         const std::string& id = "v") {
  GroundTruth gt;
  gt.videos[id] = std::move(instances);
  return gt;
}

std::vector<LabeledDetection> labels(std::vector<bool> in_score_order) {
  std::vector<LabeledDetection> out;
  double s = 1.0;
  for (bool b : in_score_order) {
    out.push_back({"v" + std::to_string(out.size()), s, b});
    s -= 0.1;
  }
  return out;
}

// Area under the precision/recall staircase.
double staircase_ap(std::vector<LabeledDetection> d, size_t n_gt) {
  std::stable_sort(d.begin(), d.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.video_id < b.video_id;
  });
  double ap = 0.0, prev_recall = 0.0;
  size_t tp = 0;
  for (size_t k = 0; k < d.size(); ++k) {
    tp += d[k].positive;
    const double recall = static_cast<double>(tp) / n_gt;
    const double precision = static_cast<double>(tp) / (k + 1);
    ap += (recall - prev_recall) * precision;
    prev_recall = recall;
  }
  return ap;
}

// Mann-Whitney U from average ranks.
double rank_sum_auc(const std::vector<LabeledDetection>& d) {
  std::vector<double> scores;
  for (const auto& x : d) scores.push_back(x.score);
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  double rank_sum = 0.0;
  size_t n_pos = 0;
  for (const auto& x : d) {
    if (!x.positive) continue;
    ++n_pos;
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x.score);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), x.score);
    rank_sum += 0.5 * static_cast<double>((lo - sorted.begin()) + (hi - sorted.begin()) + 1);
  }
  const double n_neg = static_cast<double>(d.size() - n_pos);
  return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg);
}

TEST(LabelDetections, Examples) {
  const GroundTruth gt = one_video_gt({{0, tube_with_iou(1.0)}});
  std::vector<Detection> d{{"v", 0, 1.0, tube_with_iou(1.0), 0}};
  EXPECT_TRUE(label_detections(d, gt, 0.5)[0].positive);

  GroundTruth two = gt;
  two.videos["w"] = {{1, tube_with_iou(1.0)}};
  std::vector<Detection> other{{"w", 0, 1.0, tube_with_iou(1.0), 0}};
  EXPECT_FALSE(label_detections(other, two, 0.5)[0].positive);

  std::vector<Detection> pair{{"v", 0, 0.3, tube_with_iou(0.6), 0},
                              {"v", 0, 0.8, tube_with_iou(0.7), 1}};
  const auto l = label_detections(pair, gt, 0.5);
  EXPECT_FALSE(l[0].positive);
  EXPECT_TRUE(l[1].positive);
}

TEST(LabelDetections, UnknownVideoThrows) {
  const GroundTruth gt = one_video_gt({});
  std::vector<Detection> d{{"nope", 0, 1.0, tube_with_iou(1.0), 0}};
  EXPECT_THROW(label_detections(d, gt, 0.5), Error);
  EXPECT_THROW(label_detections({}, gt, 0.0), Error);
}

// Each detection in score order claims the best unclaimed instance, if good
// enough. Written over flat (video, instance) records.
std::vector<bool> greedy_oracle(const std::vector<Detection>& dets,
                                const GroundTruth& gt, double tau) {
  struct Inst {
    std::string video;
    int action;
    const Tube* tube;
    bool taken = false;
  };
  std::vector<Inst> all;
  for (const auto& [id, instances] : gt.videos)
    for (const auto& i : instances) all.push_back({id, i.action, &i.tube});
  std::vector<size_t> order(dets.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    if (dets[a].video_id != dets[b].video_id) return dets[a].video_id < dets[b].video_id;
    return a < b;
  });
  std::vector<bool> out(dets.size(), false);
  for (size_t i : order) {
    Inst* best = nullptr;
    double best_iou = -1;
    for (Inst& inst : all) {
      if (inst.taken || inst.video != dets[i].video_id || inst.action != dets[i].action)
        continue;
      const double iou = tube_iou(dets[i].tube, *inst.tube);
      if (iou > best_iou) {
        best_iou = iou;
        best = &inst;
      }
    }
    if (best != nullptr && best_iou >= tau) {
      best->taken = true;
      out[i] = true;
    }
  }
  return out;
}

TEST(LabelDetections, MatchesGreedyOracle) {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    GroundTruth gt;
    for (int v = 0; v < 3; ++v) {
      auto& inst = gt.videos["v" + std::to_string(v)];
      const int n = static_cast<int>(rng.below(3));
      for (int k = 0; k < n; ++k)
        inst.push_back({static_cast<int>(rng.below(2)),
                        tube_with_iou(rng.uniform(0.3, 1.0))});
    }
    std::vector<Detection> dets;
    for (int k = 0; k < 8; ++k) {
      dets.push_back({"v" + std::to_string(rng.below(3)),
                      static_cast<int>(rng.below(2)),
                      std::round(rng.uniform() * 4) / 4,
                      tube_with_iou(rng.uniform(0.05, 1.0)), 0});
    }
    const double tau = rng.uniform(0.1, 0.9);
    const auto got = label_detections(dets, gt, tau);
    const auto want = greedy_oracle(dets, gt, tau);
    for (size_t i = 0; i < dets.size(); ++i) ASSERT_EQ(got[i].positive, want[i]);
  }
}

TEST(LabelDetections, HigherThresholdGivesSubset) {
  // One detection per (video, action), as inference produces.
  Rng rng(62);
  for (int trial = 0; trial < 200; ++trial) {
    GroundTruth gt;
    std::vector<Detection> dets;
    for (int v = 0; v < 6; ++v) {
      const std::string id = "v" + std::to_string(v);
      gt.videos[id] = {{static_cast<int>(rng.below(2)), tube_with_iou(1.0)}};
      for (int a = 0; a < 2; ++a)
        dets.push_back({id, a, rng.uniform(), tube_with_iou(rng.uniform(0.05, 1.0)), 0});
    }
    const double t1 = rng.uniform(0.05, 0.9);
    const double t2 = rng.uniform(t1, 1.0);
    const auto l1 = label_detections(dets, gt, t1);
    const auto l2 = label_detections(dets, gt, t2);
    for (size_t i = 0; i < dets.size(); ++i)
      if (l2[i].positive) EXPECT_TRUE(l1[i].positive);
  }
}

TEST(LabelDetections, DuplicateDetectionCanBeUnblockedByHigherThreshold) {
  const GroundTruth gt = one_video_gt({{0, tube_with_iou(1.0)}});
  std::vector<Detection> d{{"v", 0, 0.9, tube_with_iou(0.3), 0},
                           {"v", 0, 0.5, tube_with_iou(0.8), 1}};
  const auto low = label_detections(d, gt, 0.2);
  const auto high = label_detections(d, gt, 0.5);
  EXPECT_TRUE(low[0].positive);
  EXPECT_FALSE(low[1].positive);
  EXPECT_FALSE(high[0].positive);
  EXPECT_TRUE(high[1].positive);
}

TEST(AveragePrecision, Examples) {
  EXPECT_DOUBLE_EQ(average_precision(labels({true, true, true}), 3), 1.0);
  EXPECT_DOUBLE_EQ(average_precision(labels({false, false}), 2), 0.0);
  EXPECT_NEAR(average_precision(labels({true, false, true}), 2), 5.0 / 6.0, 1e-9);
  EXPECT_NEAR(staircase_ap(labels({true, false, true}), 2), 5.0 / 6.0, 1e-9);
  EXPECT_THROW(average_precision(labels({true}), 0), Error);
}

TEST(AveragePrecision, MatchesStaircaseOracle) {
  Rng rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LabeledDetection> d;
    const int n = 1 + static_cast<int>(rng.below(20));
    size_t pos = 0;
    for (int k = 0; k < n; ++k) {
      const bool p = rng.uniform() < 0.4;
      pos += p;
      d.push_back({"v" + std::to_string(k), std::round(rng.uniform() * 5), p});
    }
    const size_t n_gt = pos + rng.below(4) + (pos == 0);
    EXPECT_NEAR(average_precision(d, n_gt), staircase_ap(d, n_gt), 1e-12);
  }
}

TEST(AveragePrecision, SinglePositiveFirst) {
  Rng rng(72);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(15));
    std::vector<bool> l(static_cast<size_t>(n), false);
    l[0] = true;
    const size_t n_gt = 1 + rng.below(5);
    EXPECT_NEAR(average_precision(labels(l), n_gt), 1.0 / n_gt, 1e-15);
  }
}

TEST(RocAuc, Examples) {
  EXPECT_EQ(roc_auc(labels({true, true, false})), 1.0);
  std::vector<LabeledDetection> ties{{"a", 0.5, true}, {"b", 0.5, false},
                                     {"c", 0.5, true}};
  EXPECT_EQ(roc_auc(ties), 0.5);
  std::vector<LabeledDetection> mixed{{"a", 0.9, true}, {"b", 0.4, true},
                                      {"c", 0.6, false}};
  EXPECT_NEAR(*roc_auc(mixed), 0.5, 1e-9);
  EXPECT_FALSE(roc_auc(labels({true, true})));
  EXPECT_FALSE(roc_auc({}));
}

TEST(RocAuc, MatchesRankSumOracle) {
  Rng rng(73);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LabeledDetection> d;
    const int n = 2 + static_cast<int>(rng.below(25));
    for (int k = 0; k < n; ++k)
      d.push_back({"v", std::round(rng.gaussian() * 3), rng.uniform() < 0.5});
    const auto auc = roc_auc(d);
    if (!auc) continue;
    EXPECT_NEAR(*auc, rank_sum_auc(d), 1e-12);
  }
}

TEST(Metrics, InvariantUnderMonotoneTransform) {
  Rng rng(74);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabeledDetection> d, t;
    const int n = 2 + static_cast<int>(rng.below(20));
    for (int k = 0; k < n; ++k) {
      const double s = rng.uniform(-2, 2);
      const bool p = rng.uniform() < 0.5;
      d.push_back({"v" + std::to_string(k), s, p});
      t.push_back({"v" + std::to_string(k), std::exp(3 * s) + 7, p});
    }
    EXPECT_EQ(average_precision(d, n), average_precision(t, n));
    EXPECT_EQ(roc_auc(d), roc_auc(t));
  }
}

TEST(Evaluate, Examples) {
  GroundTruth gt;
  gt.videos["a"] = {{0, tube_with_iou(1.0)}};
  gt.videos["b"] = {{0, tube_with_iou(1.0)}};
  std::vector<Detection> perfect{{"a", 0, 0.9, tube_with_iou(1.0), 0},
                                 {"b", 0, 0.8, tube_with_iou(1.0), 0}};
  const EvalReport r = evaluate(perfect, gt, kDefaultTauGrid);
  ASSERT_EQ(r.per_tau.size(), kDefaultTauGrid.size());
  for (const auto& t : r.per_tau) EXPECT_EQ(t.map, 1.0);
  EXPECT_EQ(r.per_action.front().ap, r.per_tau.front().map);

  std::vector<Detection> one{{"a", 0, 0.9, tube_with_iou(0.45), 0}};
  const auto m = map_over_thresholds(one, gt, std::vector<double>{0.4, 0.5});
  EXPECT_DOUBLE_EQ(m[0].second, 0.5);
  EXPECT_DOUBLE_EQ(m[1].second, 0.0);
}

TEST(Evaluate, MatchesIndependentRecomputation) {
  Rng rng(75);
  GroundTruth gt;
  for (int v = 0; v < 12; ++v)
    gt.videos["v" + std::to_string(v)] = {{v % 3, tube_with_iou(1.0)}};
  std::vector<Detection> dets;
  for (int v = 0; v < 12; ++v)
    for (int a = 0; a < 3; ++a)
      dets.push_back({"v" + std::to_string(v), a, rng.uniform(),
                      tube_with_iou(rng.uniform(0.1, 1.0)), 0});
  const std::vector<double> taus{0.2, 0.5};
  const EvalReport r = evaluate(dets, gt, taus);
  for (size_t t = 0; t < taus.size(); ++t) {
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) {
      std::vector<LabeledDetection> l;
      for (const auto& d : dets) {
        if (d.action != a) continue;
        const bool own = std::stoi(d.video_id.substr(1)) % 3 == a;
        l.push_back({d.video_id, d.score, own && tube_iou(d.tube, tube_with_iou(1.0)) >= taus[t]});
      }
      sum += staircase_ap(l, 4);
    }
    EXPECT_NEAR(r.per_tau[t].map, sum / 3, 1e-12);
  }
}

TEST(Diagnose, Examples) {
  GroundTruth gt;
  gt.videos["pos"] = {{0, tube_with_iou(1.0)}};
  gt.videos["neg"] = {{1, tube_with_iou(1.0)}};
  auto cls = [&](const std::string& id, double iou, double tau) {
    return classify_detection({id, 0, 1.0, tube_with_iou(iou), 0}, gt, tau);
  };
  EXPECT_EQ(cls("pos", 0.25, 0.2), ErrorType::kCorrect);
  EXPECT_EQ(cls("pos", 0.15, 0.2), ErrorType::kLocalization);
  EXPECT_EQ(cls("pos", 0.05, 0.2), ErrorType::kBackgroundOwn);
  EXPECT_EQ(cls("neg", 0.05, 0.2), ErrorType::kBackgroundOther);
  EXPECT_EQ(cls("neg", 0.5, 0.2), ErrorType::kConfusion);
  GroundTruth single;
  single.videos["neg"] = {{1, constant_tube(1, 1, kGtBox)}};
  const Detection at_inner{"neg", 0, 1.0, constant_tube(1, 1, {0, 0, 10, 100}), 0};
  EXPECT_EQ(classify_detection(at_inner, single, 0.2), ErrorType::kConfusion);
  EXPECT_THROW(diagnose({}, gt, 0.1), Error);
}

TEST(Diagnose, CountsSumToR) {
  Rng rng(76);
  for (int trial = 0; trial < 100; ++trial) {
    GroundTruth gt;
    for (int v = 0; v < 10; ++v)
      gt.videos["v" + std::to_string(v)] = {
          {static_cast<int>(rng.below(3)), tube_with_iou(1.0)}};
    std::vector<Detection> dets;
    for (int v = 0; v < 10; ++v)
      for (int a = 0; a < 3; ++a)
        dets.push_back({"v" + std::to_string(v), a, rng.uniform(),
                        tube_with_iou(rng.uniform(0.01, 1.0)), 0});
    for (double tau : kDefaultDiagnosisTauGrid) {
      for (const DiagnosisRow& row : diagnose(dets, gt, tau)) {
        EXPECT_EQ(row.counts.total(), row.r);
        EXPECT_EQ(row.r, gt.instance_count(row.action));
      }
    }
  }
}

}  // namespace
}  // namespace pointloc
