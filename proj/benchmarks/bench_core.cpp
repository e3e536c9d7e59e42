/*
 * Copyright 2026 The hdbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Micro benchmarks for the inner loops of one BO iteration.
#include "hdbo/acquisition.hpp"
#include "hdbo/diagnostics.hpp"
#include "hdbo/gp.hpp"
#include "hdbo/otsd.hpp"
#include "hdbo/sampling.hpp"
#include "hdbo/sobol.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace hdbo;

void BM_Gram(benchmark::State& state) {
  const auto n = state.range(0), d = state.range(1);
  const Matrix X = sobol(n, d, 1);
  const GpHyperparams p = GpHyperparams::isotropic(d, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gram(X, p, KernelKind::kMatern52));
}
BENCHMARK(BM_Gram)->Args({50, 100})->Args({200, 100})->Args({200, 1000});

void BM_MllGrad(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const Eigen::Index d = state.range(1);
  const Dataset data = gp_prior_dataset(d, n, 0.5, KernelKind::kMatern52, 3);
  const GpHyperparams p = GpHyperparams::isotropic(d, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(mll_grad(data, p));
}
BENCHMARK(BM_MllGrad)->Args({50, 100})->Args({150, 100})->Unit(benchmark::kMillisecond);

void BM_LogEiWithGradient(benchmark::State& state) {
  const Eigen::Index d = state.range(0);
  const Dataset data = gp_prior_dataset(d, 100, 0.5, KernelKind::kMatern52, 4);
  const GpModel model(data, GpHyperparams::isotropic(d, 0.5));
  const Vector x = Vector::Constant(d, 0.37);
  const double best = data.y.maxCoeff();
  Vector g;
  for (auto _ : state) benchmark::DoNotOptimize(log_ei_at(model, x, best, &g));
}
BENCHMARK(BM_LogEiWithGradient)->Arg(10)->Arg(100)->Arg(1000);

void BM_ScrambledSobol(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sobol(512, state.range(0), 7));
}
BENCHMARK(BM_ScrambledSobol)->Arg(100)->Arg(1000);

void BM_Raasp(benchmark::State& state) {
  const Eigen::Index d = state.range(0);
  const Matrix top = Matrix::Constant(5, d, 0.5);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(raasp_batch(top, 256, d, ++seed));
}
BENCHMARK(BM_Raasp)->Arg(100)->Arg(1000);

void BM_OtsdExact(benchmark::State& state) {
  const Matrix P = sobol(state.range(0), 10, 2);
  for (auto _ : state) benchmark::DoNotOptimize(otsd_exact(P));
}
BENCHMARK(BM_OtsdExact)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_OtsdHeuristic(benchmark::State& state) {
  const Matrix P = sobol(state.range(0), 100, 2);
  for (auto _ : state) benchmark::DoNotOptimize(otsd_heuristic(P));
}
BENCHMARK(BM_OtsdHeuristic)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

// Defined here rather than linking benchmark_main: the distribution's
// prebuilt main archive carries LTO bytecode from a different compiler.
BENCHMARK_MAIN();
