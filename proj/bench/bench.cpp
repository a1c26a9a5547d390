// Copyright 2026 The qisburst Authors.
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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "qis/motion.hpp"
#include "qis/reconstruct.hpp"
#include "qis/reference.hpp"
#include "qis/scenes.hpp"
#include "qis/sensor.hpp"

namespace {

using namespace qis;

std::vector<SceneImage> moving_frames(int side) {
  return warp_sequence(textured_scene(side, side, 1), linear_trajectory({12.0, 3.0}, 8));
}

SensorConfig bench_config() {
  SensorConfig c;
  c.gain_alpha = 4.0;
  return c;
}

void BM_SimulateBurstSerial(benchmark::State& state) {
  const auto frames = moving_frames(static_cast<int>(state.range(0)));
  const auto c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::simulate_burst(frames, c, 1));
}

void BM_SimulateBurstParallel(benchmark::State& state) {
  const auto frames = moving_frames(static_cast<int>(state.range(0)));
  const auto c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_burst(frames, c, 1));
}

RealGrid noisy(int side) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> n(0.5, 0.1);
  RealGrid g(side, side);
  for (double& v : g.values()) v = n(gen);
  return g;
}

void BM_NlmSerial(benchmark::State& state) {
  const auto img = noisy(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::denoise_nlm(img, 2, 7, 0.15));
}

void BM_NlmParallel(benchmark::State& state) {
  const auto img = noisy(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(denoise_nlm(img, 2, 7, 0.15));
}

std::vector<RealGrid> grids(int side) {
  std::vector<RealGrid> out;
  for (int t = 0; t < 8; ++t) out.push_back(noisy(side));
  return out;
}

void BM_KernelMergeSerial(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto frames = grids(side);
  const auto field = KernelField::uniform(side, side, 8, 5, 0.3, KernelNormalization::kSoftmax);
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply_kernel_field(frames, field));
}

void BM_KernelMergeParallel(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto frames = grids(side);
  const auto field = KernelField::uniform(side, side, 8, 5, 0.3, KernelNormalization::kSoftmax);
  for (auto _ : state) benchmark::DoNotOptimize(apply_kernel_field(frames, field));
}

}  // namespace

BENCHMARK(BM_SimulateBurstSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateBurstParallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NlmSerial)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NlmParallel)->Arg(128)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KernelMergeSerial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelMergeParallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
