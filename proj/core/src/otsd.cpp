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

#include "hdbo/otsd.hpp"

#include "hdbo/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hdbo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix distance_matrix(const Matrix& pts) {
  const Eigen::Index n = pts.rows();
  Matrix D(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) D(i, j) = D(j, i) = (pts.row(i) - pts.row(j)).norm();
  }
  return D;
}

double path_length(const Matrix& D, const std::vector<Eigen::Index>& path) {
  double s = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) s += D(path[k - 1], path[k]);
  return s;
}

double held_karp(const Matrix& D) {
  const auto n = static_cast<int>(D.rows());
  if (n <= 1) return 0.0;
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> dp((full + 1) * static_cast<std::size_t>(n), kInf);
  auto at = [&](std::size_t mask, int j) -> double& { return dp[mask * static_cast<std::size_t>(n) + j]; };
  for (int j = 0; j < n; ++j) at(std::size_t{1} << j, j) = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (int j = 0; j < n; ++j) {
      const double cur = at(mask, j);
      if (!(mask >> j & 1u) || cur == kInf) continue;
      for (int k = 0; k < n; ++k) {
        if (mask >> k & 1u) continue;
        double& next = at(mask | (std::size_t{1} << k), k);
        next = std::min(next, cur + D(j, k));
      }
    }
  }
  double best = kInf;
  for (int j = 0; j < n; ++j) best = std::min(best, at(full, j));
  return best;
}

std::vector<Eigen::Index> nearest_neighbour(const Matrix& D, Eigen::Index start) {
  const Eigen::Index n = D.rows();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> path{start};
  used[start] = 1;
  for (Eigen::Index step = 1; step < n; ++step) {
    const Eigen::Index cur = path.back();
    Eigen::Index next = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!used[j] && (next < 0 || D(cur, j) < D(cur, next))) next = j;
    }
    used[next] = 1;
    path.push_back(next);
  }
  return path;
}

// First-improvement 2-opt for open paths; reversing a prefix or suffix is
// allowed since the endpoints are free.
void two_opt(const Matrix& D, std::vector<Eigen::Index>& path) {
  const auto n = static_cast<std::ptrdiff_t>(path.size());
  if (n < 3) return;
  for (int pass = 0; pass < 100; ++pass) {
    bool improved = false;
    for (std::ptrdiff_t i = 0; i < n - 1; ++i) {
      for (std::ptrdiff_t j = i + 1; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        double before = 0.0, after = 0.0;
        if (i > 0) {
          before += D(path[i - 1], path[i]);
          after += D(path[i - 1], path[j]);
        }
        if (j < n - 1) {
          before += D(path[j], path[j + 1]);
          after += D(path[i], path[j + 1]);
        }
        if (after < before - 1e-12) {
          std::reverse(path.begin() + i, path.begin() + j + 1);
          improved = true;
        }
      }
    }
    if (!improved) return;
  }
}

std::vector<Eigen::Index> heuristic_path(const Matrix& D) {
  const Eigen::Index n = D.rows();
  std::vector<Eigen::Index> best_path;
  double best = kInf;
  const Eigen::Index starts = std::min<Eigen::Index>(n, 5);
  for (Eigen::Index s = 0; s < starts; ++s) {
    auto path = nearest_neighbour(D, (s * n) / starts);
    two_opt(D, path);
    const double len = path_length(D, path);
    if (len < best) {
      best = len;
      best_path = std::move(path);
    }
  }
  return best_path;
}

}  // namespace

std::string_view to_string(OtsdSolver solver) {
  return solver == OtsdSolver::kExact ? "exact" : "heuristic";
}

double otsd_exact(const Matrix& points) {
  if (points.rows() > 20) throw ContractError("otsd_exact: too many points for the subset DP");
  return held_karp(distance_matrix(points));
}

double otsd_heuristic(const Matrix& points) {
  if (points.rows() <= 1) return 0.0;
  const Matrix D = distance_matrix(points);
  return path_length(D, heuristic_path(D));
}

double otsd_value(const Matrix& points, OtsdSolver* used) {
  if (points.rows() < 1) throw ContractError("otsd: need at least one point");
  if (points.rows() <= kOtsdExactLimit) {
    if (used) *used = OtsdSolver::kExact;
    return otsd_exact(points);
  }
  if (used) *used = OtsdSolver::kHeuristic;
  return otsd_heuristic(points);
}

OtsdCurve otsd(const Matrix& points) {
  if (points.rows() < 1) throw ContractError("otsd: need at least one point");
  OtsdTracker tracker(points.cols());
  OtsdCurve curve;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    OtsdSolver s{};
    curve.values.push_back(tracker.add(points.row(i).transpose(), &s));
    curve.solver.push_back(s);
  }
  return curve;
}

OtsdTracker::OtsdTracker(Eigen::Index dim) : points_(0, dim) {}

double OtsdTracker::add(const Vector& point, OtsdSolver* used) {
  if (point.size() != points_.cols()) throw ContractError("otsd: point dimension mismatch");
  const Eigen::Index n = points_.rows();
  points_.conservativeResize(n + 1, Eigen::NoChange);
  points_.row(n) = point.transpose();
  if (points_.rows() <= kOtsdExactLimit) {
    if (used) *used = OtsdSolver::kExact;
    path_.clear();
    return otsd_exact(points_);
  }
  if (used) *used = OtsdSolver::kHeuristic;
  const Matrix D = distance_matrix(points_);
  auto fresh = heuristic_path(D);
  double best = path_length(D, fresh);
  if (!path_.empty()) {
    // Cheapest insertion of the new point into the previous tour.
    std::vector<Eigen::Index> warm = path_;
    double best_delta = D(n, warm.front());
    std::size_t best_pos = 0;
    for (std::size_t k = 1; k < warm.size(); ++k) {
      const double delta = D(warm[k - 1], n) + D(n, warm[k]) - D(warm[k - 1], warm[k]);
      if (delta < best_delta) {
        best_delta = delta;
        best_pos = k;
      }
    }
    if (D(warm.back(), n) < best_delta) best_pos = warm.size();
    warm.insert(warm.begin() + static_cast<std::ptrdiff_t>(best_pos), n);
    two_opt(D, warm);
    const double len = path_length(D, warm);
    if (len < best) {
      best = len;
      fresh = std::move(warm);
    }
  }
  path_ = std::move(fresh);
  return best;
}

}  // namespace hdbo
