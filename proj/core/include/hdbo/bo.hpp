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

#pragma once

#include "hdbo/acquisition.hpp"
#include "hdbo/benchmarks.hpp"
#include "hdbo/defaults.hpp"
#include "hdbo/fit.hpp"
#include "hdbo/otsd.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hdbo {

enum class MethodPreset { kMsr, kMleScaled, kMleLn2, kDsp };

std::string_view to_string(MethodPreset preset);
MethodPreset preset_from_string(std::string_view name);

/// Everything that distinguishes one BO method from another.
struct MethodConfig {
  std::string name = "custom";
  FitConfig fit;
  AcqConfig acq;
  /// Start each refit from the previous hyperparameters instead of the
  /// initialization scheme.
  bool warm_start = false;
};

/// Settings behind each preset:
///   MSR        sqrt(d)/10 init, MLE, RAASP on
///   MLE_scaled sqrt(d)/10 init, MLE, RAASP off
///   MLE_ln2    ln 2 init,       MLE, RAASP off
///   DSP        prior-mode init, dimension-scaled log-normal MAP, RAASP on
MethodConfig preset_config(MethodPreset preset, Eigen::Index d, const MethodDefaults& defaults);

nlohmann::json to_json(const MethodConfig& config);

struct RunOptions {
  int budget = 30;
  int doe_size = 10;
  std::uint64_t seed = 0;
  /// Optional resolved experiment config embedded in the trace metadata.
  nlohmann::json config_snapshot;
};

struct RunMetadata {
  std::string benchmark_id;
  std::map<std::string, std::string> benchmark_info;
  Eigen::Index dim = 0;
  std::uint64_t seed = 0;
  std::string method;
  int doe_size = 0;
  int budget = 0;
  nlohmann::json config;
};

/// One evaluation of the objective. Fit and acquisition fields are empty for
/// design-of-experiments and random-search points.
struct IterationRecord {
  int iteration = 0;
  Vector x;
  double observed = 0.0;
  double incumbent = 0.0;
  std::optional<double> mean_lengthscale;
  std::optional<double> max_gradient;
  std::optional<bool> vanished;
  std::optional<double> raasp_start_fraction;
  std::optional<double> acq_mean_travel;
  std::optional<double> acq_mean_steps;
  bool fit_failed = false;
  bool acq_degenerate = false;
  double otsd = 0.0;
  OtsdSolver otsd_solver = OtsdSolver::kExact;
};

struct RunTrace {
  RunMetadata meta;
  std::vector<IterationRecord> records;
  bool aborted = false;
  std::string error;

  Matrix points() const;
  Vector observed() const;
};

/// Receives each record as soon as it exists, so partial traces survive an abort.
using RecordSink = std::function<void(const IterationRecord&)>;

/// Minimizes `benchmark` for `options.budget` evaluations: a scrambled Sobol
/// design of `options.doe_size` points, then one fit + acquisition step per
/// evaluation. A failing benchmark evaluation ends the run with
/// `aborted = true` and the records gathered so far.
RunTrace run(Benchmark& benchmark, const MethodConfig& method, const RunOptions& options,
             const RecordSink& sink = {});

/// Uniform i.i.d. queries with the same trace schema.
RunTrace random_search(Benchmark& benchmark, int budget, std::uint64_t seed,
                       const RecordSink& sink = {});

/// Standardized targets in maximization form: -(y - mean) / sd.
Vector standardize_for_max(const Vector& y);

}  // namespace hdbo
