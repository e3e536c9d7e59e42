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

#include <functional>
#include <string>

namespace hdbo {

/// Objective for minimization. Writes the gradient into `grad` (already
/// sized) and returns the value. A non-finite value marks the point as
/// infeasible; the line search then backtracks.
using Objective = std::function<double(const Vector& x, Vector& grad)>;

/// Called once at the start point (iteration 0) and after every accepted step.
using IterationCallback =
    std::function<void(int iteration, const Vector& x, double value, const Vector& grad)>;

struct LbfgsOptions {
  int max_iterations = 500;
  /// Stop when the projected-gradient infinity norm drops below this.
  double gradient_tolerance = 1e-8;
  /// Stop when an accepted step lowers the objective by no more than this
  /// fraction of max(|f|, 1), i.e. when progress is at rounding level.
  double relative_reduction_tolerance = 1e-14;
  int memory = 10;
  int max_backtracks = 40;
  double armijo = 1e-4;
};

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  Vector gradient;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Projected limited-memory BFGS with backtracking on the projection arc.
/// Bounds may be infinite. Every accepted step satisfies the Armijo
/// condition, so the returned value never exceeds the starting value.
LbfgsResult lbfgs_minimize(const Objective& objective, const Vector& x0, const Vector& lower,
                           const Vector& upper, const LbfgsOptions& options = {},
                           const IterationCallback& callback = {});

}  // namespace hdbo
