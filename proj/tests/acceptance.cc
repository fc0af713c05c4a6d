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

// Acceptance checks on the seeded synthetic benchmark. One PASS/FAIL line
// per criterion; exit status 1 when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "oracles.h"
#include "pointloc/eval.h"
#include "pointloc/io.h"
#include "pointloc/pipeline.h"
#include "pointloc/pseudo.h"
#include "pointloc/synth.h"

namespace {

using namespace pointloc;
namespace fs = std::filesystem;

constexpr uint64_t kSeed = 7;

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %d %-22s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

size_t tau_index(double tau) {
  for (size_t i = 0; i < kDefaultTauGrid.size(); ++i)
    if (std::abs(kDefaultTauGrid[i] - tau) < 1e-12) return i;
  return 0;
}

MiningConfig mining() {
  MiningConfig mc;
  mc.seed = kSeed;
  return mc;
}

SweepPlan sweep_plan() {
  SweepPlan plan;
  plan.mining = mining();
  return plan;
}

void geometry() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = oracle::run_geometry_oracles(200, kSeed);
  const double t = seconds_since(t0);
  const bool pass = r.instances >= 200 && r.max_tube_iou_error <= 1e-6 &&
                    r.max_center_match_error <= 1e-6 && r.max_size_error <= 1e-6 &&
                    r.max_centroid_error <= 0.5 && t < 10;
  report(1, "geometry-oracles", pass,
         fmt("n=%d iou=%.2e center=%.2e size=%.2e centroid=%.3fpx t=%.2fs",
             r.instances, r.max_tube_iou_error, r.max_center_match_error,
             r.max_size_error, r.max_centroid_error, t));
}

// Returns point-prior test detections for reuse in the diagnosis check.
std::vector<Detection> ladder(const Dataset& ds) {
  const auto t0 = std::chrono::steady_clock::now();
  const GroundTruth gt = test_ground_truth(ds);
  const double tau = 0.5;
  std::map<Regime, double> map;
  std::vector<Detection> point_detections;
  for (Regime r : {Regime::kPoint, Regime::kBestProposal, Regime::kVideoLabel}) {
    const auto models = train_models(ds, r, mining());
    auto result = infer(ds, models, {});
    map[r] = evaluate(result.detections, gt, std::vector<double>{tau}).per_tau[0].map;
    if (r == Regime::kPoint) point_detections = std::move(result.detections);
  }
  const double t = seconds_since(t0);
  const double point = map[Regime::kPoint];
  const bool pass = point >= 0.9 * map[Regime::kBestProposal] &&
                    point - map[Regime::kVideoLabel] >= 0.10 && t < 60;
  report(2, "supervision-ladder", pass,
         fmt("mAP@0.5 point=%.4f best-proposal=%.4f video-label=%.4f t=%.2fs",
             point, map[Regime::kBestProposal], map[Regime::kVideoLabel], t));
  return point_detections;
}

void stride(const Dataset& ds) {
  const int strides[] = {1, 20};
  const auto rows = sweep_stride(ds, strides, sweep_plan());
  const size_t k = tau_index(0.2);
  const double gap = std::abs(rows[1].map[k] - rows[0].map[k]);
  report(3, "stride-flatness", gap <= 0.05,
         fmt("mAP@0.2 stride1=%.4f stride20=%.4f gap=%.4f", rows[0].map[k],
             rows[1].map[k], gap));
}

void noise(const Dataset& ds) {
  const double sigmas[] = {0, 1, 5, 50};
  const auto rows = sweep_sigma(ds, sigmas, sweep_plan());
  const size_t k = tau_index(0.2);
  const double base = rows[0].map[k];
  const bool pass = std::abs(rows[1].map[k] - base) <= 0.05 &&
                    std::abs(rows[2].map[k] - base) <= 0.05;
  report(4, "noise-robustness", pass,
         fmt("mAP@0.2 s0=%.4f s1=%.4f s5=%.4f s50=%.4f", base, rows[1].map[k],
             rows[2].map[k], rows[3].map[k]));
}

void epsilon(const SynthConfig& base) {
  SynthConfig config = base;
  config.include_oracle = true;
  const Dataset ds = synth_generate(config);
  const double eps[] = {0, 0.5, 0.9, 1.0};
  const auto rows = sweep_epsilon(ds, eps, sweep_plan());
  const size_t k = tau_index(0.5);
  bool pass = rows.back().map[k] >= 0.9;
  for (size_t i = 1; i < rows.size(); ++i)
    pass = pass && rows[i].map[k] >= rows[i - 1].map[k] - 0.02;
  report(5, "epsilon-sweep", pass,
         fmt("mAP@0.5 e0=%.4f e0.5=%.4f e0.9=%.4f e1=%.4f", rows[0].map[k],
             rows[1].map[k], rows[2].map[k], rows[3].map[k]));
}

void pseudo_weights(const SynthConfig& base) {
  SynthConfig config = base;
  config.off_center = true;
  const Dataset ds = synth_generate(config);
  const auto models = train_models(ds, Regime::kPoint, mining());
  const auto person = estimate_pseudo_weight(ds, PseudoKind::kPerson);
  const auto center = estimate_pseudo_weight(ds, PseudoKind::kCenter);
  double plain = 0, rescored = 0;
  int n = 0;
  for (const Video* v : ds.split(Split::kTest)) {
    const int a = v->labels.front();
    std::vector<double> scores;
    for (size_t p = 0; p < v->proposals.size(); ++p)
      scores.push_back(models[a].decision(v->features.row(p)));
    const auto track = make_pseudo_track(PseudoKind::kPerson, *v);
    const size_t i0 = argmax_first(scores);
    const size_t i1 = rescore_select(scores, v->proposals, track, v->meta, person.lambda_p);
    plain += v->best_gt_iou(v->proposals[i0], a);
    rescored += v->best_gt_iou(v->proposals[i1], a);
    ++n;
  }
  plain /= n;
  rescored /= n;
  const bool pass = person.lambda_p > center.lambda_p && rescored - plain >= 0.02;
  report(6, "pseudo-weight-ordering", pass,
         fmt("lambda person=%.4f center=%.4f top1-iou plain=%.4f rescored=%.4f gain=%.4f",
             person.lambda_p, center.lambda_p, plain, rescored, rescored - plain));
}

void metrics(const Dataset& ds, const std::vector<Detection>& detections) {
  const std::vector<LabeledDetection> ap_case{
      {"a", 3, true}, {"b", 2, false}, {"c", 1, true}};
  const double ap = average_precision(ap_case, 2);
  const std::vector<LabeledDetection> auc_case{
      {"a", 0.9, true}, {"b", 0.4, true}, {"c", 0.6, false}};
  const double auc = roc_auc(auc_case).value_or(-1);

  const GroundTruth gt = test_ground_truth(ds);
  bool partition = true;
  for (double tau : kDefaultDiagnosisTauGrid)
    for (const auto& row : diagnose(detections, gt, tau))
      partition = partition && row.counts.total() == row.r;

  const bool pass = std::abs(ap - 5.0 / 6.0) <= 1e-9 && std::abs(auc - 0.5) <= 1e-9 &&
                    partition;
  report(7, "metric-exactness", pass,
         fmt("ap=%.12f auc=%.12f diagnose-partition=%s", ap, auc,
             partition ? "ok" : "broken"));
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pointloc");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  if (status != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return status;
}

std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    const std::string name = e.path().string();
    if (e.is_regular_file() && (name.ends_with(".psalmodl") || name.ends_with(".csv")))
      files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  }
  return files;
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / "pointloc_acceptance";
  fs::remove_all(root);
  bool ok = true;
  for (const char* name : {"a", "b"}) {
    const std::string dir = (root / name).string();
    const std::string seed = std::to_string(kSeed);
    ok = ok && run_cli({"synth", "--out", dir + "/data", "--seed", seed}) == 0 &&
         run_cli({"train", "--dataset", dir + "/data", "--out", dir + "/models",
                  "--seed", seed}) == 0 &&
         run_cli({"infer", "--dataset", dir + "/data", "--models", dir + "/models",
                  "--out", dir + "/out"}) == 0 &&
         run_cli({"eval", "--dataset", dir + "/data", "--detections",
                  dir + "/out/detections.csv", "--out", dir + "/out"}) == 0;
  }
  size_t n = 0;
  if (ok) {
    const auto a = outputs(root / "a");
    n = a.size();
    ok = n > 0 && a == outputs(root / "b");
  }
  fs::remove_all(root);
  report(8, "determinism", ok, fmt("files-compared=%zu", n));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthConfig config;
  config.seed = kSeed;
  const Dataset ds = synth_generate(config);

  geometry();
  const auto detections = ladder(ds);
  stride(ds);
  noise(ds);
  epsilon(config);
  pseudo_weights(config);
  metrics(ds, detections);
  determinism();

  std::printf("%d of 8 criteria failed, %.1fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
