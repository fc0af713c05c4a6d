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

#include "cli.h"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "pointloc/error.h"
#include "pointloc/eval.h"
#include "pointloc/io.h"
#include "pointloc/mining.h"
#include "pointloc/pipeline.h"
#include "pointloc/pseudo.h"
#include "pointloc/synth.h"

namespace pointloc::cli {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string dataset;
  std::string out;
  std::string models;
  std::string detections;
  uint64_t seed = 7;
  MiningConfig mining;
  std::string prior = "point";
  std::string pseudo = "none";
  std::optional<double> lambda_p;
  bool temporal = false;
  double lambda_t = 1.0;
  std::vector<double> taus = kDefaultTauGrid;
  std::vector<double> diagnosis_taus = kDefaultDiagnosisTauGrid;
  std::vector<int> strides = {1, 2, 5, 10, 20};
  std::vector<double> sigmas = {0, 1, 5, 10, 50};
  std::vector<double> epsilons = {0, 0.5, 0.9, 1.0};
  std::string sweep = "stride";
  SynthConfig synth;
};

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fixed(const std::optional<double>& v) {
  return v ? fixed(*v) : std::string();
}

void require_dir(const std::string& path, std::string_view what) {
  if (path.empty()) throw Error(std::string(what) + " path is required");
  if (!fs::is_directory(path))
    throw Error(std::string(what) + " directory not found: " + path);
}

void require_out(const std::string& path) {
  if (path.empty()) throw Error("--out is required");
  fs::create_directories(path);
}

Regime regime_of(const RunConfig& config) {
  auto regime = parse_regime(config.prior);
  if (!regime) throw Error("unknown prior: " + config.prior);
  return *regime;
}

std::optional<PseudoKind> pseudo_of(const RunConfig& config) {
  if (config.pseudo == "none") return std::nullopt;
  auto kind = parse_pseudo_kind(config.pseudo);
  if (!kind) throw Error("unknown pseudo-point kind: " + config.pseudo);
  return kind;
}

MiningConfig mining_of(const RunConfig& config) {
  MiningConfig mining = config.mining;
  mining.seed = config.seed;
  mining.validate();
  return mining;
}

InferOptions infer_options_of(const RunConfig& config) {
  InferOptions options;
  options.pseudo = pseudo_of(config);
  options.lambda_p = config.lambda_p;
  options.temporal = config.temporal;
  options.lambda_t = config.lambda_t;
  if (options.lambda_p && *options.lambda_p < 0)
    throw Error("--lambda-p must be non-negative");
  if (options.lambda_t < 0) throw Error("--lambda-t must be non-negative");
  return options;
}

template <typename T>
void require_grid(const std::vector<T>& grid, std::string_view flag) {
  if (grid.empty()) throw Error(std::string(flag) + " must not be empty");
}

std::vector<Detection> load_detections(const RunConfig& config,
                                       const Dataset& dataset) {
  if (config.detections.empty()) throw Error("--detections is required");
  if (!fs::is_regular_file(config.detections))
    throw Error("detections file not found: " + config.detections);
  auto detections =
      detections_from_csv(read_file(config.detections), dataset.actions);
  if (detections.empty())
    throw Error("empty detection set in " + config.detections);
  for (const Detection& d : detections) {
    const Video* video = nullptr;
    for (const Video& v : dataset.videos)
      if (v.id == d.video_id) video = &v;
    if (video == nullptr)
      throw Error("detection refers to unknown video " + d.video_id);
    if (video->split != Split::kTest)
      throw Error("detection refers to training video " + d.video_id);
  }
  return detections;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  require_out(config.out);
  SynthConfig synth = config.synth;
  synth.seed = config.seed;
  Dataset dataset = synth_generate(synth);
  save_dataset(dataset, config.out);
  out << "wrote " << dataset.videos.size() << " videos to " << config.out
      << "\n";
  return 0;
}

int cmd_train(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  auto models = train_models(dataset, regime_of(config), mining_of(config));
  for (size_t a = 0; a < models.size(); ++a) {
    write_file_atomic(fs::path(config.out) / (dataset.actions[a] + ".psalmodl"),
                      encode_model(models[a]));
  }
  out << "trained " << models.size() << " models\n";
  return 0;
}

int cmd_infer(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_dir(config.models, "--models");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  std::vector<LinearModel> models;
  for (const std::string& action : dataset.actions) {
    fs::path path = fs::path(config.models) / (action + ".psalmodl");
    if (!fs::is_regular_file(path))
      throw Error("model file not found: " + path.string());
    models.push_back(decode_model(read_file(path)));
  }
  InferResult result = infer(dataset, models, infer_options_of(config));
  write_file_atomic(fs::path(config.out) / "detections.csv",
                    detections_to_csv(result.detections, dataset.actions));
  out << "wrote " << result.detections.size() << " detections";
  if (result.weight) out << ", lambda_p " << fixed(result.weight->lambda_p);
  if (result.degenerate_frames > 0)
    out << ", " << result.degenerate_frames << " degenerate pseudo-point frames";
  out << "\n";
  return 0;
}

int cmd_pseudo_weight(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  std::vector<PseudoKind> kinds;
  if (auto kind = pseudo_of(config)) {
    kinds.push_back(*kind);
  } else {
    kinds = available_pseudo_kinds(dataset);
  }
  std::string csv = "# pointloc pseudo-weights v1\nkind,lambda_p\n";
  for (PseudoKind kind : kinds) {
    PseudoWeight w = estimate_pseudo_weight(dataset, kind);
    csv += std::string(to_string(kind)) + "," + fixed(w.lambda_p) + "\n";
  }
  write_file_atomic(fs::path(config.out) / "pseudo_weights.csv", csv);
  out << csv.substr(csv.find('\n') + 1);
  return 0;
}

int cmd_eval(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_grid(config.taus, "--tau-grid");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  auto detections = load_detections(config, dataset);
  EvalReport report =
      evaluate(detections, test_ground_truth(dataset), config.taus);

  std::string per_action =
      "# pointloc per-action v1\ntau,action,ap,auc,n_gt,n_detections\n";
  for (const ActionMetrics& m : report.per_action) {
    per_action += fixed(m.tau) + "," + dataset.actions[m.action] + "," +
                  fixed(m.ap) + "," + fixed(m.auc) + "," +
                  std::to_string(m.n_gt) + "," +
                  std::to_string(m.n_detections) + "\n";
  }
  std::string map = "# pointloc map v1\ntau,map,mean_auc\n";
  for (const ThresholdMetrics& t : report.per_tau)
    map += fixed(t.tau) + "," + fixed(t.map) + "," + fixed(t.mean_auc) + "\n";

  write_file_atomic(fs::path(config.out) / "per_action_ap.csv", per_action);
  write_file_atomic(fs::path(config.out) / "map.csv", map);
  out << map.substr(map.find('\n') + 1);
  return 0;
}

int cmd_diagnose(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_grid(config.diagnosis_taus, "--tau-grid");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  auto detections = load_detections(config, dataset);
  GroundTruth gt = test_ground_truth(dataset);

  std::string csv = "# pointloc errors v1\ntau,action,r";
  for (int t = 0; t < 5; ++t)
    csv += "," + std::string(to_string(static_cast<ErrorType>(t)));
  csv += "\n";
  for (double tau : config.diagnosis_taus) {
    for (const DiagnosisRow& row : diagnose(detections, gt, tau)) {
      csv += fixed(tau) + "," + dataset.actions[row.action] + "," +
             std::to_string(row.r);
      for (size_t c : row.counts.counts) csv += "," + std::to_string(c);
      csv += "\n";
    }
  }
  write_file_atomic(fs::path(config.out) / "errors.csv", csv);
  out << csv.substr(csv.find('\n') + 1);
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  require_dir(config.dataset, "--dataset");
  require_grid(config.taus, "--tau-grid");
  require_out(config.out);
  Dataset dataset = load_dataset(config.dataset);
  SweepPlan plan;
  plan.regime = regime_of(config);
  plan.mining = mining_of(config);
  plan.infer = infer_options_of(config);
  plan.taus = config.taus;

  std::vector<SweepRow> rows;
  if (config.sweep == "stride") {
    require_grid(config.strides, "--stride-grid");
    rows = sweep_stride(dataset, config.strides, plan);
  } else if (config.sweep == "sigma") {
    require_grid(config.sigmas, "--sigma-grid");
    rows = sweep_sigma(dataset, config.sigmas, plan);
  } else if (config.sweep == "epsilon") {
    require_grid(config.epsilons, "--epsilon-grid");
    rows = sweep_epsilon(dataset, config.epsilons, plan);
  } else if (config.sweep == "pseudo") {
    rows = sweep_pseudo(dataset, plan);
  } else {
    throw Error("unknown sweep parameter: " + config.sweep);
  }
  std::string csv = sweep_to_csv(config.sweep, rows, config.taus);
  write_file_atomic(fs::path(config.out) / ("sweep_" + config.sweep + ".csv"),
                    csv);
  out << csv.substr(csv.find('\n') + 1);
  return 0;
}

std::string first_line(std::string text) {
  auto nl = text.find('\n');
  if (nl != std::string::npos) text.resize(nl);
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig config;
  CLI::App app{"Spatio-temporal action localization from point supervision"};
  app.name(args.empty() ? "pointloc" : args[0]);
  app.require_subcommand(1);

  auto dataset_opt = [&](CLI::App* sub) {
    sub->add_option("--dataset", config.dataset, "Dataset directory");
  };
  auto out_opt = [&](CLI::App* sub) {
    sub->add_option("--out", config.out, "Output directory");
  };
  auto seed_opt = [&](CLI::App* sub) {
    sub->add_option("--seed", config.seed, "Random seed");
  };
  auto mining_opts = [&](CLI::App* sub) {
    sub->add_option("--lambda-reg", config.mining.lambda_reg,
                    "SVM regularization constant");
    sub->add_option("--iterations", config.mining.iterations,
                    "Mining rounds");
    sub->add_option("--folds", config.mining.folds, "Cross-validation folds");
    sub->add_option("--prior", config.prior, "Training regime")
        ->check(CLI::IsMember({"point", "video-label", "box", "best-proposal"}));
  };
  auto infer_opts = [&](CLI::App* sub) {
    sub->add_option("--pseudo", config.pseudo, "Pseudo-point kind")
        ->check(CLI::IsMember(
            {"none", "train_stats", "self", "person", "imotion", "center"}));
    sub->add_option("--lambda-p", config.lambda_p,
                    "Pseudo-point weight, estimated when omitted");
    sub->add_flag("--temporal", config.temporal, "Apply the temporal prior");
    sub->add_option("--lambda-t", config.lambda_t, "Temporal prior weight");
  };
  auto tau_opt = [&](CLI::App* sub) {
    sub->add_option("--tau-grid", config.taus, "IoU thresholds")
        ->delimiter(',');
  };

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  out_opt(synth);
  seed_opt(synth);
  synth->add_option("--actions", config.synth.n_actions, "Number of actions");
  synth->add_option("--train-per-action", config.synth.train_per_action,
                    "Training videos per action");
  synth->add_option("--test-per-action", config.synth.test_per_action,
                    "Test videos per action");
  synth->add_option("--frames", config.synth.frames_per_video,
                    "Frames per video");
  synth->add_option("--proposals", config.synth.proposals_per_video,
                    "Proposals per video");
  synth->add_option("--stride", config.synth.point_stride,
                    "Annotation stride");
  synth->add_option("--sigma", config.synth.point_sigma,
                    "Annotation noise in pixels");
  synth->add_option("--epsilon", config.synth.epsilon,
                    "Fraction of low-quality proposals removed");
  synth->add_flag("--oracle", config.synth.include_oracle,
                  "Include the ground-truth tube among the proposals");
  synth->add_flag("--off-center", config.synth.off_center,
                  "Plant ground truth away from the frame center");

  CLI::App* train = app.add_subcommand("train", "Train one model per action");
  dataset_opt(train);
  out_opt(train);
  seed_opt(train);
  mining_opts(train);

  CLI::App* inf = app.add_subcommand("infer", "Localize actions in test videos");
  dataset_opt(inf);
  out_opt(inf);
  inf->add_option("--models", config.models, "Model directory");
  infer_opts(inf);

  CLI::App* pw = app.add_subcommand("pseudo-weight",
                                    "Estimate pseudo-point weights");
  dataset_opt(pw);
  out_opt(pw);
  pw->add_option("--pseudo", config.pseudo, "Pseudo-point kind")
      ->check(CLI::IsMember(
          {"none", "train_stats", "self", "person", "imotion", "center"}));

  CLI::App* ev = app.add_subcommand("eval", "Score detections");
  dataset_opt(ev);
  out_opt(ev);
  ev->add_option("--detections", config.detections, "Detections CSV");
  tau_opt(ev);

  CLI::App* diag = app.add_subcommand("diagnose", "Break down detection errors");
  dataset_opt(diag);
  out_opt(diag);
  diag->add_option("--detections", config.detections, "Detections CSV");
  diag->add_option("--tau-grid", config.diagnosis_taus,
                   "IoU thresholds, each above 0.1")
      ->delimiter(',');

  CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("parameter", config.sweep, "stride, sigma, epsilon or pseudo")
      ->check(CLI::IsMember({"stride", "sigma", "epsilon", "pseudo"}));
  dataset_opt(sweep);
  out_opt(sweep);
  seed_opt(sweep);
  mining_opts(sweep);
  infer_opts(sweep);
  tau_opt(sweep);
  sweep->add_option("--stride-grid", config.strides, "Annotation strides")
      ->delimiter(',');
  sweep->add_option("--sigma-grid", config.sigmas, "Annotation noise levels")
      ->delimiter(',');
  sweep->add_option("--epsilon-grid", config.epsilons,
                    "Low-quality removal fractions")
      ->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << first_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (synth->parsed()) return cmd_synth(config, out);
    if (train->parsed()) return cmd_train(config, out);
    if (inf->parsed()) return cmd_infer(config, out);
    if (pw->parsed()) return cmd_pseudo_weight(config, out);
    if (ev->parsed()) return cmd_eval(config, out);
    if (diag->parsed()) return cmd_diagnose(config, out);
    if (sweep->parsed()) return cmd_sweep(config, out);
  } catch (const std::exception& e) {
    err << "error: " << first_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pointloc::cli
