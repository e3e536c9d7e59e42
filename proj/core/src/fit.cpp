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

#include "hdbo/fit.hpp"

#include "hdbo/error.hpp"
#include "hdbo/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hdbo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kMinLengthscale = 1e-4;
constexpr double kMaxLengthscale = 1e4;
constexpr double kMinSignal = 1e-6;
constexpr double kMaxSignal = 1e4;
constexpr double kMaxNoise = 10.0;

struct RawBounds {
  Vector lower;
  Vector upper;
};

RawBounds raw_bounds(Eigen::Index d, const FitConfig& config) {
  double ls_lo = kMinLengthscale;
  double ls_hi = kMaxLengthscale;
  if (const auto* box = std::get_if<UniformBoxPrior>(&config.prior)) {
    ls_lo = box->lo;
    ls_hi = box->hi;
  }
  RawBounds b{Vector(d + 2), Vector(d + 2)};
  b.lower.head(d).setConstant(std::log(ls_lo));
  b.upper.head(d).setConstant(std::log(ls_hi));
  b.lower(d) = std::log(kMinSignal);
  b.upper(d) = std::log(kMaxSignal);
  b.lower(d + 1) = std::log(config.min_noise_variance);
  b.upper(d + 1) = std::log(kMaxNoise);
  return b;
}

struct RestartOutcome {
  bool ok = false;
  Vector raw;
  double objective = -std::numeric_limits<double>::infinity();
  double initial_objective = -std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  int steps = 0;
};

RestartOutcome run_restart(const Dataset& train, const FitConfig& config, const Vector& raw0,
                           const RawBounds& bounds) {
  const Eigen::Index d = train.dim();
  RestartOutcome out;
  MllGradient last;

  auto objective = [&](const Vector& raw, Vector& grad) -> double {
    const GpHyperparams p = GpHyperparams::from_raw(raw);
    try {
      last = mll_grad(train, p, config.prior, config.kernel);
    } catch (const SurrogateSingularError&) {
      return std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(last.objective)) return std::numeric_limits<double>::infinity();
    grad = -last.raw_gradient;
    return -last.objective;
  };
  auto on_step = [&](int, const Vector& raw, double value, const Vector&) {
    if (out.trace.empty()) out.initial_objective = -value;
    const Vector ls = raw.head(d).array().exp();
    const Vector nat = last.mll_raw_gradient.head(d).cwiseQuotient(ls);
    out.trace.push_back(nat.lpNorm<Eigen::Infinity>());
  };

  LbfgsOptions opts;
  opts.max_iterations = config.max_steps;
  opts.gradient_tolerance = config.convergence_tolerance;
  const LbfgsResult res = lbfgs_minimize(objective, raw0, bounds.lower, bounds.upper, opts, on_step);
  if (!std::isfinite(res.value)) return out;
  out.ok = true;
  out.raw = res.x;
  out.objective = -res.value;
  out.steps = res.iterations;
  return out;
}

}  // namespace

std::string describe(const InitScheme& scheme) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const ConstantLn2Init&) { os << "constant_ln2"; },
                 [&](const ScaledSqrtDInit&) { os << "scaled_sqrt_d"; },
                 [&](const PriorModeInit&) { os << "prior_mode"; },
                 [&](const PriorSampleInit&) { os << "prior_sample"; },
                 [&](const ExplicitInit& e) { os << "explicit(" << e.value << ")"; },
             },
             scheme);
  return os.str();
}

Vector init_lengthscales(const InitScheme& scheme, Eigen::Index d, const Hyperprior& prior,
                         std::mt19937_64& rng) {
  if (d < 1) throw ContractError("init_lengthscales: dimension must be positive");
  return std::visit(
      overloaded{
          [&](const ConstantLn2Init&) -> Vector { return Vector::Constant(d, std::numbers::ln2); },
          [&](const ScaledSqrtDInit&) -> Vector {
            return Vector::Constant(d, std::sqrt(static_cast<double>(d)) / 10.0);
          },
          [&](const PriorModeInit&) -> Vector {
            if (!has_prior(prior)) throw ConfigError("PriorMode initialization requires a hyperprior");
            return Vector::Constant(d, prior_mode(prior));
          },
          [&](const PriorSampleInit&) -> Vector {
            if (!has_prior(prior)) {
              throw ConfigError("PriorSample initialization requires a hyperprior");
            }
            Vector v(d);
            for (Eigen::Index i = 0; i < d; ++i) v(i) = sample_prior(prior, rng);
            return v;
          },
          [&](const ExplicitInit& e) -> Vector {
            if (!(e.value > 0.0)) throw ConfigError("explicit initial length scale must be positive");
            return Vector::Constant(d, e.value);
          },
      },
      scheme);
}

void FitConfig::validate() const {
  if (restarts < 1) throw ConfigError("fit: restarts must be >= 1");
  if (max_steps < 1) throw ConfigError("fit: max_steps must be >= 1");
  if (!(convergence_tolerance > 0.0)) throw ConfigError("fit: tolerance must be positive");
  if (vanish_window < 1) throw ConfigError("fit: vanish window must be >= 1");
  if (!(min_noise_variance > 0.0)) throw ConfigError("fit: noise lower bound must be positive");
}

bool gradient_vanished(const std::vector<double>& trace, int window) {
  if (trace.empty()) return false;
  const auto end = trace.begin() + std::min<std::ptrdiff_t>(window, std::ssize(trace));
  return *std::max_element(trace.begin(), end) < kSinglePrecisionEps;
}

FitReport fit(const Dataset& train, const FitConfig& config, std::mt19937_64& rng) {
  config.validate();
  train.validate();
  if (train.size() < 1) throw ContractError("fit: training set is empty");
  const Eigen::Index d = train.dim();
  const RawBounds bounds = raw_bounds(d, config);

  Vector base;
  if (config.warm_start) {
    if (config.warm_start->dim() != d) throw ContractError("fit: warm start has wrong dimension");
    base = config.warm_start->to_raw();
  } else {
    GpHyperparams p0(init_lengthscales(config.scheme, d, config.prior, rng),
                     config.initial_signal_variance,
                     std::max(config.initial_noise_variance, config.min_noise_variance));
    base = p0.to_raw();
  }
  base = base.cwiseMax(bounds.lower).cwiseMin(bounds.upper);

  std::normal_distribution<double> perturb(0.0, config.restart_perturbation);
  std::vector<RestartOutcome> outcomes;
  outcomes.reserve(config.restarts);
  for (int r = 0; r < config.restarts; ++r) {
    Vector raw0 = base;
    if (r > 0) {
      for (Eigen::Index i = 0; i < raw0.size(); ++i) raw0(i) += perturb(rng);
    }
    outcomes.push_back(run_restart(train, config, raw0, bounds));
  }

  // Highest objective wins; ties keep the lowest restart index.
  int best = -1;
  for (int r = 0; r < config.restarts; ++r) {
    if (!outcomes[r].ok) continue;
    if (best < 0 || outcomes[r].objective > outcomes[best].objective) best = r;
  }
  if (best < 0) {
    throw FitFailureError("fit: all " + std::to_string(config.restarts) +
                          " restarts hit a singular surrogate (n=" + std::to_string(train.size()) +
                          ", d=" + std::to_string(d) + ")");
  }

  const RestartOutcome& win = outcomes[best];
  FitReport rep;
  rep.params = GpHyperparams::from_raw(win.raw);
  rep.final_objective = win.objective;
  rep.initial_objective = win.initial_objective;
  rep.steps_taken = win.steps;
  rep.restart_index = best;
  rep.vanished = gradient_vanished(win.trace, config.vanish_window);
  if (!win.trace.empty()) {
    const auto end = win.trace.begin() +
                     std::min<std::ptrdiff_t>(config.vanish_window, std::ssize(win.trace));
    rep.max_gradient = *std::max_element(win.trace.begin(), end);
  }
  if (config.record_gradient_trace) rep.gradient_trace = win.trace;
  for (const auto& o : outcomes) rep.restart_objectives.push_back(o.objective);
  return rep;
}

}  // namespace hdbo
