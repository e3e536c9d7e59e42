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

#include "hdbo/gp.hpp"
#include "hdbo/prior.hpp"
#include "hdbo/types.hpp"

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace hdbo {

// Length-scale initialization schemes.
struct ConstantLn2Init {};
struct ScaledSqrtDInit {};  // sqrt(d) / 10
struct PriorModeInit {};
struct PriorSampleInit {};
struct ExplicitInit {
  double value = 1.0;
};

using InitScheme =
    std::variant<ConstantLn2Init, ScaledSqrtDInit, PriorModeInit, PriorSampleInit, ExplicitInit>;

std::string describe(const InitScheme& scheme);

Vector init_lengthscales(const InitScheme& scheme, Eigen::Index d, const Hyperprior& prior,
                         std::mt19937_64& rng);

struct FitConfig {
  InitScheme scheme = ScaledSqrtDInit{};
  Hyperprior prior = NoPrior{};
  KernelKind kernel = KernelKind::kMatern52;
  int restarts = 1;
  int max_steps = 500;
  double convergence_tolerance = 1e-8;
  bool record_gradient_trace = true;
  /// Steps inspected for the vanished flag.
  int vanish_window = 50;
  double initial_signal_variance = 1.0;
  double initial_noise_variance = 1e-4;
  double min_noise_variance = 1e-8;
  /// Std of the Gaussian perturbation (log space) applied to restarts > 0.
  double restart_perturbation = 0.3;
  /// When set, restart 0 starts here instead of from `scheme`.
  std::optional<GpHyperparams> warm_start;

  void validate() const;
};

struct FitReport {
  GpHyperparams params;
  double final_objective = 0.0;
  double initial_objective = 0.0;
  /// Per step: infinity norm of the natural-space length-scale gradient of the MLL.
  std::vector<double> gradient_trace;
  /// Max of gradient_trace over the first vanish_window steps.
  double max_gradient = 0.0;
  bool vanished = false;
  int steps_taken = 0;
  int restart_index = 0;
  std::vector<double> restart_objectives;
};

/// Multi-start maximization of MLL (+ log prior). y should already be standardized.
/// Throws FitFailureError when every restart hits a singular surrogate.
FitReport fit(const Dataset& train, const FitConfig& config, std::mt19937_64& rng);

/// True when every entry in the first `window` steps is below single-precision eps.
bool gradient_vanished(const std::vector<double>& trace, int window);

}  // namespace hdbo
