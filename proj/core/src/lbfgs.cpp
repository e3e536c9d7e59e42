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

#include "hdbo/lbfgs.hpp"

#include "hdbo/error.hpp"

#include <cmath>
#include <algorithm>
#include <deque>
#include <limits>

namespace hdbo {

namespace {

struct CorrectionPair {
  Vector s;
  Vector y;
  double rho;
};

Vector project(const Vector& x, const Vector& lower, const Vector& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

// Variables pinned at a bound with the gradient pushing outward.
Eigen::Array<bool, Eigen::Dynamic, 1> free_mask(const Vector& x, const Vector& g,
                                               const Vector& lower, const Vector& upper) {
  Eigen::Array<bool, Eigen::Dynamic, 1> mask(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const bool at_lower = x(i) <= lower(i) && g(i) > 0.0;
    const bool at_upper = x(i) >= upper(i) && g(i) < 0.0;
    mask(i) = !(at_lower || at_upper);
  }
  return mask;
}

Vector two_loop(const std::deque<CorrectionPair>& pairs, const Vector& g) {
  Vector q = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t k = pairs.size(); k-- > 0;) {
    alpha[k] = pairs[k].rho * pairs[k].s.dot(q);
    q -= alpha[k] * pairs[k].y;
  }
  const auto& last = pairs.back();
  q *= last.s.dot(last.y) / last.y.squaredNorm();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double beta = pairs[k].rho * pairs[k].y.dot(q);
    q += (alpha[k] - beta) * pairs[k].s;
  }
  return q;
}

// Coordinates within rounding distance of a bound are placed on it, so a
// step truncated at a bound leaves that coordinate exactly active.
void snap_to_bounds(Vector& x, const Vector& lower, const Vector& upper) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, upper(i) - lower(i));
    if (x(i) - lower(i) < tol) x(i) = lower(i);
    if (upper(i) - x(i) < tol) x(i) = upper(i);
  }
}

// Zeroes components of p that would leave the box immediately and returns
// the largest step keeping x + step * p feasible.
double max_feasible_step(const Vector& x, Vector& p, const Vector& lower, const Vector& upper) {
  double step = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (p(i) > 0.0) {
      if (x(i) >= upper(i)) {
        p(i) = 0.0;
      } else {
        step = std::min(step, (upper(i) - x(i)) / p(i));
      }
    } else if (p(i) < 0.0) {
      if (x(i) <= lower(i)) {
        p(i) = 0.0;
      } else {
        step = std::min(step, (lower(i) - x(i)) / p(i));
      }
    }
  }
  return step;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, const Vector& x0, const Vector& lower,
                           const Vector& upper, const LbfgsOptions& options,
                           const IterationCallback& callback) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n) throw ContractError("lbfgs: bound size mismatch");

  LbfgsResult res;
  res.x = project(x0, lower, upper);
  res.gradient = Vector::Zero(n);
  res.value = objective(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.value)) {
    res.stop_reason = "non-finite objective at start";
    return res;
  }
  if (callback) callback(0, res.x, res.value, res.gradient);

  std::deque<CorrectionPair> pairs;
  Vector g_new(n);
  while (res.iterations < options.max_iterations) {
    const Vector& x = res.x;
    const Vector& g = res.gradient;
    const double pg = (x - project(x - g, lower, upper)).lpNorm<Eigen::Infinity>();
    if (pg < options.gradient_tolerance) {
      res.converged = true;
      res.stop_reason = "projected gradient below tolerance";
      return res;
    }
    const auto mask = free_mask(x, g, lower, upper);
    const Vector g_free = mask.select(g, 0.0);

    bool accepted = false;
    double reduction = 0.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Vector p;
      if (pairs.empty()) {
        const double gmax = g_free.lpNorm<Eigen::Infinity>();
        p = -std::min(1.0, 1.0 / gmax) * g_free;
      } else {
        p = mask.select(-two_loop(pairs, g_free), 0.0);
        if (!(g.dot(p) < 0.0)) {
          pairs.clear();
          const double gmax = g_free.lpNorm<Eigen::Infinity>();
          p = -std::min(1.0, 1.0 / gmax) * g_free;
        }
      }

      // Steps are truncated at the first bound reached instead of projecting
      // the whole direction, so nearly flat coordinates are not swept onto
      // the bounds by a long quasi-Newton step.
      double step = std::min(1.0, max_feasible_step(x, p, lower, upper));
      if (!(step > 0.0) || !(g.dot(p) < 0.0)) {
        if (pairs.empty()) break;
        pairs.clear();
        continue;
      }
      for (int bt = 0; bt <= options.max_backtracks; ++bt, step *= 0.5) {
        Vector x_new = project(x + step * p, lower, upper);
        snap_to_bounds(x_new, lower, upper);
        const Vector s = x_new - x;
        if (s.lpNorm<Eigen::Infinity>() == 0.0) break;
        const double f_new = objective(x_new, g_new);
        ++res.evaluations;
        if (std::isfinite(f_new) && f_new <= res.value + options.armijo * g.dot(s)) {
          const Vector y = g_new - g;
          const double sy = s.dot(y);
          if (sy > 1e-10 * s.norm() * y.norm() && sy > 0.0) {
            pairs.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
          }
          reduction = res.value - f_new;
          res.x = x_new;
          res.value = f_new;
          res.gradient = g_new;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        if (pairs.empty()) break;
        pairs.clear();  // retry once along steepest descent
      }
    }
    if (!accepted) {
      res.stop_reason = "line search made no progress";
      return res;
    }
    ++res.iterations;
    if (callback) callback(res.iterations, res.x, res.value, res.gradient);
    const double scale = std::max({std::abs(res.value), std::abs(res.value + reduction), 1.0});
    if (reduction <= options.relative_reduction_tolerance * scale) {
      res.converged = true;
      res.stop_reason = "relative reduction below tolerance";
      return res;
    }
  }
  res.stop_reason = "iteration limit";
  return res;
}

}  // namespace hdbo
