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

#include <random>
#include <string>
#include <variant>

namespace hdbo {

struct NoPrior {};

/// Gamma(shape, rate) on every length scale.
struct GammaPrior {
  double shape = 3.0;
  double rate = 6.0;
};

/// Log-normal on every length scale with location mu0 + ln(d) / 2, so that
/// both mode and mean scale with sqrt(d).
struct DimScaledLogNormalPrior {
  double mu0 = 0.0;
  double sigma0 = 1.0;
  Eigen::Index dim = 1;

  double location() const;
};

struct UniformBoxPrior {
  double lo = 1e-3;
  double hi = 30.0;
};

using Hyperprior = std::variant<NoPrior, GammaPrior, DimScaledLogNormalPrior, UniformBoxPrior>;

struct LogPrior {
  double value = 0.0;
  Vector raw_gradient;  // d + 2 entries; only the length-scale block is nonzero
  bool in_support = true;
};

/// Log-density of the length-scale prior and its gradient with respect to
/// the raw (log) hyperparameters.
LogPrior log_prior(const Hyperprior& prior, const GpHyperparams& params);

bool has_prior(const Hyperprior& prior);

/// Mode of the per-dimension length-scale density.
double prior_mode(const Hyperprior& prior);

double sample_prior(const Hyperprior& prior, std::mt19937_64& rng);

std::string describe(const Hyperprior& prior);

}  // namespace hdbo
