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

#include "hdbo/acquisition.hpp"

#include "hdbo/error.hpp"
#include "hdbo/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace hdbo {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double norm_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double norm_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

// Tail of the Laplace continued fraction for the Mills ratio:
// Q(t) / phi(t) = 1 / (t + c(t)),  c(t) = 1 / (t + 2 / (t + 3 / (t + ...))).
// Then zPhi(z) + phi(z) = phi(t) c / (t + c) at z = -t, with no cancellation.
double mills_tail(double t) {
  double tail = 0.0;
  for (int k = 120; k >= 2; --k) tail = k / (t + tail);
  return 1.0 / (t + tail);
}

}  // namespace

double ei(double mean, double stddev, double best) {
  if (!(stddev > 0.0)) return std::max(mean - best, 0.0);
  const double z = (mean - best) / stddev;
  return std::max(stddev * (z * norm_cdf(z) + norm_pdf(z)), 0.0);
}

double log_h(double z) {
  if (z >= kLogEiSwitch) return std::log(z * norm_cdf(z) + norm_pdf(z));
  const double t = -z;
  const double c = mills_tail(t);
  return -0.5 * z * z - kLogSqrt2Pi + std::log(c) - std::log(t + c);
}

double dlog_h(double z) {
  if (z >= kLogEiSwitch) return norm_cdf(z) / (z * norm_cdf(z) + norm_pdf(z));
  return 1.0 / mills_tail(-z);
}

double log_ei(double mean, double stddev, double best) {
  if (!(stddev > 0.0)) {
    const double imp = mean - best;
    return imp > 0.0 ? std::log(imp) : -kInf;
  }
  return std::log(stddev) + log_h((mean - best) / stddev);
}

LogEiPartials log_ei_partials(double mean, double stddev, double best) {
  LogEiPartials p;
  if (!(stddev > 0.0)) {
    const double imp = mean - best;
    p.value = imp > 0.0 ? std::log(imp) : -kInf;
    p.d_mean = imp > 0.0 ? 1.0 / imp : 0.0;
    return p;
  }
  const double z = (mean - best) / stddev;
  const double dh = dlog_h(z);
  p.value = std::log(stddev) + log_h(z);
  p.d_mean = dh / stddev;
  p.d_stddev = 1.0 / stddev - dh * z / stddev;
  return p;
}

double log_ei_at(const GpModel& model, const Vector& x, double best, Vector* grad) {
  const auto pred = model.predict(x, grad != nullptr);
  const double sd = std::sqrt(pred.variance);
  const LogEiPartials p = log_ei_partials(pred.mean, sd, best);
  if (grad) {
    *grad = p.d_mean * pred.mean_grad;
    if (sd > 0.0) *grad += (p.d_stddev / (2.0 * sd)) * pred.variance_grad;
  }
  return p.value;
}

std::vector<Eigen::Index> boltzmann_select(const Vector& values, Eigen::Index k, double eta,
                                           std::mt19937_64& rng) {
  const Eigen::Index n = values.size();
  if (k < 1 || k > n) {
    throw ConfigError("Boltzmann selection of " + std::to_string(k) + " starts from " +
                      std::to_string(n) + " candidates");
  }
  if (!(eta > 0.0)) throw ConfigError("Boltzmann temperature must be positive");

  Vector v = values;
  double finite_min = kInf;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(v(i))) finite_min = std::min(finite_min, v(i));
  }
  if (!std::isfinite(finite_min)) finite_min = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(v(i))) v(i) = finite_min;
  }
  const double mean = v.mean();
  const double sd = n > 1 ? std::sqrt((v.array() - mean).square().sum() / (n - 1)) : 0.0;
  const Vector z = sd > 0.0 ? Vector((v.array() - mean) / sd) : Vector::Zero(n);

  // Gumbel-top-k draws k items without replacement with the successive
  // softmax probabilities.
  Vector key = z;
  if (eta < kBoltzmannTopKThreshold) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      double u = unif(rng);
      while (u <= 0.0) u = unif(rng);
      key(i) = eta * z(i) - std::log(-std::log(u));
    }
  }
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return key(a) > key(b); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

void AcqConfig::validate() const {
  if (raw_samples < 1) throw ConfigError("acquisition: raw_samples must be >= 1");
  if (num_starts < 1) throw ConfigError("acquisition: num_starts must be >= 1");
  if (max_acq_steps < 1) throw ConfigError("acquisition: max_acq_steps must be >= 1");
  if (!(boltzmann_temperature > 0.0)) throw ConfigError("acquisition: temperature must be > 0");
  if (!(relative_reduction_tolerance >= 0.0))
    throw ConfigError("acquisition: relative_reduction_tolerance must be >= 0");
  const Eigen::Index total = (raasp_enabled ? 4 : 2) * raw_samples;
  if (num_starts > total) throw ConfigError("acquisition: more starts than candidates");
}

double AcqOptReport::mean_travel_distance() const {
  if (starts.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : starts) s += r.travel_distance;
  return s / static_cast<double>(starts.size());
}

double AcqOptReport::mean_gradient_steps() const {
  if (starts.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : starts) s += r.gradient_steps_used;
  return s / static_cast<double>(starts.size());
}

AcqOptReport maximize_acq(const GpModel& model, const AcqConfig& config, std::mt19937_64& rng) {
  config.validate();
  const Dataset& train = model.train();
  const Eigen::Index d = model.dim();
  if (train.size() < 1) throw ContractError("maximize_acq: no observations");
  const double best = train.y.maxCoeff();

  const auto top = top_indices(train.y, config.top_fraction);
  Matrix top_points(static_cast<Eigen::Index>(top.size()), d);
  for (std::size_t i = 0; i < top.size(); ++i) top_points.row(static_cast<Eigen::Index>(i)) = train.X.row(top[i]);

  const CandidateBatch cand =
      assemble_candidates(top_points, config.raw_samples, d, config.raasp_enabled, rng(), config.raasp);

  AcqOptReport rep;
  rep.candidate_count = cand.size();
  Vector values(cand.size());
  for (Eigen::Index i = 0; i < cand.size(); ++i) {
    values(i) = log_ei_at(model, cand.points.row(i).transpose(), best);
  }
  Eigen::Index best_cand = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best_cand)) best_cand = i;
  }
  if (!std::isfinite(values(best_cand))) {
    rep.degenerate = true;
    rep.chosen_point = cand.points.row(0).transpose();
    rep.chosen_value = values(0);
    return rep;
  }

  const auto chosen = boltzmann_select(values, config.num_starts, config.boltzmann_temperature, rng);

  const Vector lower = Vector::Zero(d);
  const Vector upper = Vector::Ones(d);
  LbfgsOptions opts;
  opts.max_iterations = config.max_acq_steps;
  opts.gradient_tolerance = config.gradient_tolerance;
  opts.relative_reduction_tolerance = config.relative_reduction_tolerance;
  auto objective = [&](const Vector& x, Vector& grad) -> double {
    Vector g;
    const double v = log_ei_at(model, x, best, &g);
    if (!std::isfinite(v)) return kInf;
    grad = -g;
    return -v;
  };

  std::size_t raasp_starts = 0;
  for (const Eigen::Index ci : chosen) {
    StartRecord rec;
    rec.start_point = cand.points.row(ci).transpose();
    rec.start_value = values(ci);
    rec.origin = cand.origin[static_cast<std::size_t>(ci)];
    if (is_raasp(rec.origin)) ++raasp_starts;
    if (std::isfinite(rec.start_value)) {
      const LbfgsResult res = lbfgs_minimize(objective, rec.start_point, lower, upper, opts);
      rec.end_point = res.x;
      rec.end_value = -res.value;
      rec.gradient_steps_used = res.iterations;
    } else {
      rec.end_point = rec.start_point;
      rec.end_value = rec.start_value;
    }
    rec.travel_distance = (rec.end_point - rec.start_point).norm();
    rep.starts.push_back(std::move(rec));
  }
  rep.raasp_start_fraction = static_cast<double>(raasp_starts) / static_cast<double>(chosen.size());

  std::size_t winner = 0;
  for (std::size_t i = 1; i < rep.starts.size(); ++i) {
    if (rep.starts[i].end_value > rep.starts[winner].end_value) winner = i;
  }
  if (values(best_cand) > rep.starts[winner].end_value) {
    rep.chosen_point = cand.points.row(best_cand).transpose();
    rep.chosen_value = values(best_cand);
  } else {
    rep.chosen_point = rep.starts[winner].end_point;
    rep.chosen_value = rep.starts[winner].end_value;
  }
  return rep;
}

}  // namespace hdbo
