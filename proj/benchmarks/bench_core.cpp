// Copyright 2026 The bosonic-dd Authors
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

#include "bdd/dyson.hpp"
#include "bdd/evolution.hpp"
#include "bdd/schedules.hpp"
#include "bdd/symplectic.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

void BM_MatrixExponential(benchmark::State& state) {
  const bdd::ModeLayout layout(static_cast<std::size_t>(state.range(0)), 1);
  const bdd::Matrix x = bdd::random_generator(layout, 7, {}, 0).at(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdd::matrix_exponential(0.3 * x));
  }
}
BENCHMARK(BM_MatrixExponential)->Arg(1)->Arg(4)->Arg(16);

void BM_IteratedIntegral(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const bdd::PulseSchedule schedule = bdd::decoupling_schedule(N);
  const std::vector<bdd::SignFunction> functions(static_cast<std::size_t>(N), bdd::sigma_function(schedule));
  const std::vector<int> powers(functions.size(), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdd::iterated_integral(functions, powers));
  }
}
BENCHMARK(BM_IteratedIntegral)->DenseRange(2, 8, 3);

void BM_ResultingEvolution(benchmark::State& state) {
  const bdd::ModeLayout layout(2, 2);
  const bdd::AnalyticGenerator gen = bdd::random_generator(layout, 11, {}, static_cast<int>(state.range(0)));
  const bdd::PulseSchedule schedule = bdd::decoupling_schedule(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdd::resulting_evolution(gen, schedule, 0.05));
  }
}
BENCHMARK(BM_ResultingEvolution)->Arg(0)->Arg(2);

void BM_HomogenizationEvolution(benchmark::State& state) {
  const bdd::ModeLayout layout(4, 1);
  const bdd::AnalyticGenerator gen = bdd::random_generator(layout, 13, {1.0, 0.0, 1.0}, 0);
  const bdd::PulseSchedule schedule = bdd::homogenization_schedule(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdd::resulting_evolution(gen, schedule, 0.05));
  }
}
BENCHMARK(BM_HomogenizationEvolution);

}  // namespace

BENCHMARK_MAIN();
