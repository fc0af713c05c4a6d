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

#include <span>
#include <vector>

#include <benchmark/benchmark.h>

#include "pointloc/geometry.h"
#include "pointloc/mining.h"
#include "pointloc/random.h"
#include "pointloc/svm.h"
#include "pointloc/synth.h"

namespace {

using namespace pointloc;

Tube drifting_tube(int start, int length, double offset) {
  Tube t;
  t.start_frame = start;
  for (int f = 0; f < length; ++f)
    t.boxes.push_back({10.0 + f + offset, 20.0, 60.0 + f + offset, 90.0});
  return t;
}

void BM_TubeIou(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  const Tube a = drifting_tube(1, length, 0.0);
  const Tube b = drifting_tube(1 + length / 4, length, 7.5);
  for (auto _ : state) benchmark::DoNotOptimize(tube_iou(a, b));
  state.SetItemsProcessed(state.iterations() * length);
}
BENCHMARK(BM_TubeIou)->Arg(16)->Arg(128)->Arg(1024);

void BM_LinearSvm(benchmark::State& state) {
  const size_t n = static_cast<size_t>(state.range(0));
  const size_t dim = 32;
  Rng rng(11);
  std::vector<std::vector<float>> rows(2 * n, std::vector<float>(dim));
  for (size_t i = 0; i < rows.size(); ++i)
    for (auto& x : rows[i]) x = static_cast<float>(rng.gaussian() + (i < n ? 0.5 : -0.5));
  std::vector<std::span<const float>> pos, neg;
  for (size_t i = 0; i < rows.size(); ++i) (i < n ? pos : neg).push_back(rows[i]);
  for (auto _ : state)
    benchmark::DoNotOptimize(train_linear_svm(pos, neg, SvmOptions{}, 3));
}
BENCHMARK(BM_LinearSvm)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_MilTrain(benchmark::State& state) {
  SynthConfig config;
  const Dataset ds = synth_generate(config);
  const auto train = ds.split(Split::kTrain);
  MiningConfig mining;
  mining.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(mil_train(0, train, mining));
}
BENCHMARK(BM_MilTrain)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
