// Copyright 2026 The avseg Authors. All Rights Reserved.
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

// Microbenchmarks for the per-frame hot paths.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "avseg/assignment.hpp"
#include "avseg/avtree.hpp"
#include "avseg/mask.hpp"
#include "avseg/soao.hpp"

namespace {

using namespace avseg;

void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostMatrix cost(n, n + n / 2);
  for (std::size_t r = 0; r < cost.rows(); ++r)
    for (std::size_t c = 0; c < cost.cols(); ++c) cost(r, c) = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_TwoPhaseFilter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> pos(0, 63);
  std::vector<ScoredInstance> cands;
  for (std::size_t i = 0; i < n; ++i) {
    BinaryMask m(64, 64);
    const std::size_t r0 = pos(rng) / 2, c0 = pos(rng) / 2;
    for (std::size_t r = r0; r < r0 + 24; ++r)
      for (std::size_t c = c0; c < c0 + 24; ++c) m.set(r, c);
    cands.push_back({"label" + std::to_string(i % 10), static_cast<double>(pos(rng)) / 64.0, m});
  }
  for (auto _ : state) benchmark::DoNotOptimize(two_phase_select(cands, 0.5));
}
BENCHMARK(BM_TwoPhaseFilter)->Arg(16)->Arg(64)->Arg(256);

void BM_FocalGrad(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  SoftMask p{side, side, {}};
  BinaryMask gt(side, side);
  for (std::size_t i = 0; i < side * side; ++i) {
    p.values.push_back(u(rng));
    gt.set(i / side, i % side, u(rng) > 0.5);
  }
  for (auto _ : state) benchmark::DoNotOptimize(focal_loss_grad(p, gt, 2.0, 0.25));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}
BENCHMARK(BM_FocalGrad)->Arg(64)->Arg(256);

void BM_AggregateTags(benchmark::State& state) {
  std::vector<AudioVisualTree::Record> g, c, t;
  for (int i = 0; i < 24; ++i) g.push_back({"g" + std::to_string(i), "", 0});
  for (int i = 0; i < 156; ++i) c.push_back({"c" + std::to_string(i), "g" + std::to_string(i % 24), 0});
  for (int i = 0; i < 527; ++i) t.push_back({"t" + std::to_string(i), "c" + std::to_string(i % 156), 0});
  const auto tree = AudioVisualTree::build(g, c, t);
  TagScoreVector scores;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 527; ++i) scores["t" + std::to_string(i)] = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_tag_scores(tree, scores, 0.1));
}
BENCHMARK(BM_AggregateTags);

}  // namespace

BENCHMARK_MAIN();
