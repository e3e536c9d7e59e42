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

#include "hdbo/types.hpp"

#include <string_view>
#include <vector>

namespace hdbo {

enum class OtsdSolver { kExact, kHeuristic };

std::string_view to_string(OtsdSolver solver);

/// Largest point count solved exactly (Held-Karp over subsets).
inline constexpr Eigen::Index kOtsdExactLimit = 12;

struct OtsdCurve {
  /// values[i]: shortest open path through the first i + 1 points.
  std::vector<double> values;
  std::vector<OtsdSolver> solver;
};

/// Shortest open path through all rows of `points` (Euclidean). Exact up
/// to kOtsdExactLimit rows; beyond that nearest neighbour plus 2-opt, which
/// is an upper bound on the optimum.
double otsd_value(const Matrix& points, OtsdSolver* used = nullptr);

/// Exact open-path length by dynamic programming over subsets.
double otsd_exact(const Matrix& points);

/// Nearest neighbour construction from several starts refined by 2-opt.
double otsd_heuristic(const Matrix& points);

/// OTSD of every prefix of `points` (rows in observation order).
OtsdCurve otsd(const Matrix& points);

/// Incremental variant used while a run is in progress.
class OtsdTracker {
 public:
  explicit OtsdTracker(Eigen::Index dim);
  /// Adds a point and returns the OTSD of all points so far.
  double add(const Vector& point, OtsdSolver* used = nullptr);

 private:
  Matrix points_;
  std::vector<Eigen::Index> path_;
};

}  // namespace hdbo
