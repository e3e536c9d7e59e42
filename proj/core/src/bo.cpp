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

#include "hdbo/bo.hpp"

#include "hdbo/error.hpp"
#include "hdbo/rng.hpp"
#include "hdbo/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdbo {

namespace {

constexpr std::uint64_t kFitStream = 2;
constexpr std::uint64_t kAcqStream = 3;
constexpr std::uint64_t kRandomSearchStream = 4;

RunMetadata make_metadata(const Benchmark& benchmark, std::uint64_t seed, std::string method,
                          int doe_size, int budget, nlohmann::json config) {
  RunMetadata meta;
  meta.benchmark_id = benchmark.id();
  meta.benchmark_info = benchmark.metadata();
  meta.dim = benchmark.dim();
  meta.seed = seed;
  meta.method = std::move(method);
  meta.doe_size = doe_size;
  meta.budget = budget;
  meta.config = std::move(config);
  return meta;
}

// Evaluates one point and appends its record; returns false if the
// benchmark failed (the trace is then marked aborted).
bool evaluate_into(Benchmark& benchmark, const Vector& x, IterationRecord record, RunTrace& trace,
                   OtsdTracker& tracker, double& incumbent, const RecordSink& sink) {
  double value = 0.0;
  try {
    value = benchmark.evaluate(x);
  } catch (const BenchmarkError& e) {
    trace.aborted = true;
    trace.error = e.what();
    if (!e.output().empty()) trace.error += "\n" + e.output();
    return false;
  }
  incumbent = std::min(incumbent, value);
  record.iteration = static_cast<int>(trace.records.size());
  record.x = x;
  record.observed = value;
  record.incumbent = incumbent;
  record.otsd = tracker.add(x, &record.otsd_solver);
  trace.records.push_back(record);
  if (sink) sink(trace.records.back());
  return true;
}

}  // namespace

std::string_view to_string(MethodPreset preset) {
  switch (preset) {
    case MethodPreset::kMsr:
      return "MSR";
    case MethodPreset::kMleScaled:
      return "MLE_scaled";
    case MethodPreset::kMleLn2:
      return "MLE_ln2";
    case MethodPreset::kDsp:
      return "DSP";
  }
  return "?";
}

MethodPreset preset_from_string(std::string_view name) {
  for (auto p : {MethodPreset::kMsr, MethodPreset::kMleScaled, MethodPreset::kMleLn2,
                 MethodPreset::kDsp}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown method preset '" + std::string(name) +
                    "' (expected MSR, MLE_scaled, MLE_ln2 or DSP)");
}

MethodConfig preset_config(MethodPreset preset, Eigen::Index d, const MethodDefaults& defaults) {
  if (d < 1) throw ContractError("preset_config: dimension must be positive");
  MethodConfig m;
  m.name = std::string(to_string(preset));
  switch (preset) {
    case MethodPreset::kMsr:
      m.fit.scheme = ScaledSqrtDInit{};
      m.fit.prior = NoPrior{};
      m.acq.raasp_enabled = true;
      break;
    case MethodPreset::kMleScaled:
      m.fit.scheme = ScaledSqrtDInit{};
      m.fit.prior = NoPrior{};
      m.acq.raasp_enabled = false;
      break;
    case MethodPreset::kMleLn2:
      m.fit.scheme = ConstantLn2Init{};
      m.fit.prior = NoPrior{};
      m.acq.raasp_enabled = false;
      break;
    case MethodPreset::kDsp:
      m.fit.scheme = PriorModeInit{};
      m.fit.prior = DimScaledLogNormalPrior{defaults.dsp_mu0, defaults.dsp_sigma0, d};
      m.acq.raasp_enabled = true;
      break;
  }
  return m;
}

nlohmann::json to_json(const MethodConfig& config) {
  const FitConfig& f = config.fit;
  const AcqConfig& a = config.acq;
  nlohmann::json fit = {
      {"init", describe(f.scheme)},
      {"prior", describe(f.prior)},
      {"kernel", std::string(to_string(f.kernel))},
      {"restarts", f.restarts},
      {"max_steps", f.max_steps},
      {"convergence_tolerance", f.convergence_tolerance},
      {"vanish_window", f.vanish_window},
      {"initial_signal_variance", f.initial_signal_variance},
      {"initial_noise_variance", f.initial_noise_variance},
      {"min_noise_variance", f.min_noise_variance},
      {"restart_perturbation", f.restart_perturbation},
  };
  nlohmann::json acq = {
      {"raw_samples", a.raw_samples},
      {"num_starts", a.num_starts},
      {"max_acq_steps", a.max_acq_steps},
      {"raasp_enabled", a.raasp_enabled},
      {"boltzmann_temperature", a.boltzmann_temperature},
      {"top_fraction", a.top_fraction},
      {"gradient_tolerance", a.gradient_tolerance},
      {"relative_reduction_tolerance", a.relative_reduction_tolerance},
      {"raasp_sigma", a.raasp.sigma},
      {"raasp_subset_dims", a.raasp.subset_dims},
  };
  return {{"name", config.name}, {"fit", fit}, {"acq", acq}, {"warm_start", config.warm_start}};
}

Matrix RunTrace::points() const {
  Matrix P(static_cast<Eigen::Index>(records.size()), meta.dim);
  for (std::size_t i = 0; i < records.size(); ++i) {
    P.row(static_cast<Eigen::Index>(i)) = records[i].x.transpose();
  }
  return P;
}

Vector RunTrace::observed() const {
  Vector y(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) y(static_cast<Eigen::Index>(i)) = records[i].observed;
  return y;
}

Vector standardize_for_max(const Vector& y) {
  if (y.size() == 0) throw ContractError("standardize: empty target vector");
  const double mean = y.mean();
  const Vector centered = y.array() - mean;
  const double var = y.size() > 1 ? centered.squaredNorm() / static_cast<double>(y.size() - 1) : 0.0;
  const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
  return -centered / sd;
}

RunTrace run(Benchmark& benchmark, const MethodConfig& method, const RunOptions& options,
             const RecordSink& sink) {
  if (options.doe_size < 1) throw ConfigError("run: doe_size must be at least 1");
  if (options.budget <= options.doe_size) throw ConfigError("run: budget must exceed doe_size");
  method.fit.validate();
  method.acq.validate();

  const Eigen::Index d = benchmark.dim();
  nlohmann::json snapshot = options.config_snapshot;
  if (snapshot.is_null()) snapshot = nlohmann::json::object();
  snapshot["method"] = to_json(method);
  RunTrace trace;
  trace.meta = make_metadata(benchmark, options.seed, method.name, options.doe_size,
                             options.budget, std::move(snapshot));

  OtsdTracker tracker(d);
  double incumbent = std::numeric_limits<double>::infinity();
  const Matrix doe = sobol(options.doe_size, d, options.seed);
  for (Eigen::Index i = 0; i < doe.rows(); ++i) {
    if (!evaluate_into(benchmark, doe.row(i).transpose(), IterationRecord{}, trace, tracker,
                       incumbent, sink)) {
      return trace;
    }
  }

  auto fit_rng = make_rng(options.seed, kFitStream);
  auto acq_rng = make_rng(options.seed, kAcqStream);
  std::optional<GpHyperparams> previous;

  while (static_cast<int>(trace.records.size()) < options.budget) {
    Dataset train(trace.points(), standardize_for_max(trace.observed()));
    FitConfig fit_config = method.fit;
    if (method.warm_start && previous) fit_config.warm_start = previous;

    IterationRecord record;
    GpHyperparams params;
    try {
      FitReport report = fit(train, fit_config, fit_rng);
      params = report.params;
      record.max_gradient = report.max_gradient;
      record.vanished = report.vanished;
    } catch (const FitFailureError&) {
      record.fit_failed = true;
      if (previous) {
        params = *previous;
      } else {
        Vector ls = init_lengthscales(method.fit.scheme, d, method.fit.prior, fit_rng);
        params = GpHyperparams(ls, method.fit.initial_signal_variance,
                               method.fit.initial_noise_variance);
      }
    }
    previous = params;
    record.mean_lengthscale = params.lengthscales.mean();

    const GpModel model(std::move(train), params, method.fit.kernel);
    const AcqOptReport acq = maximize_acq(model, method.acq, acq_rng);
    record.raasp_start_fraction = acq.raasp_start_fraction;
    record.acq_mean_travel = acq.mean_travel_distance();
    record.acq_mean_steps = acq.mean_gradient_steps();
    record.acq_degenerate = acq.degenerate;

    if (!evaluate_into(benchmark, acq.chosen_point, record, trace, tracker, incumbent, sink)) {
      return trace;
    }
  }
  return trace;
}

RunTrace random_search(Benchmark& benchmark, int budget, std::uint64_t seed,
                       const RecordSink& sink) {
  if (budget < 1) throw ConfigError("random_search: budget must be at least 1");
  const Eigen::Index d = benchmark.dim();
  RunTrace trace;
  trace.meta = make_metadata(benchmark, seed, "random_search", 0, budget,
                             nlohmann::json{{"method", {{"name", "random_search"}}}});
  OtsdTracker tracker(d);
  double incumbent = std::numeric_limits<double>::infinity();
  auto rng = make_rng(seed, kRandomSearchStream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < budget; ++i) {
    Vector x(d);
    for (Eigen::Index j = 0; j < d; ++j) x(j) = unif(rng);
    if (!evaluate_into(benchmark, x, IterationRecord{}, trace, tracker, incumbent, sink)) break;
  }
  return trace;
}

}  // namespace hdbo
