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
#include "hdbo/sampling.hpp"
#include "hdbo/types.hpp"

#include <limits>
#include <random>
#include <vector>

namespace hdbo {

/// Expected improvement in maximization form:
/// (mean - best) Phi(z) + stddev phi(z), z = (mean - best) / stddev.
double ei(double mean, double stddev, double best);

/// log of zPhi(z) + phi(z), accurate for very negative z.
double log_h(double z);

/// d/dz log_h(z) = Phi(z) / (zPhi(z) + phi(z)).
double dlog_h(double z);

/// z below which log_h switches to the continued-fraction form.
inline constexpr double kLogEiSwitch = -6.0;

/// log EI; -inf only when EI is exactly zero (stddev = 0 and mean <= best).
double log_ei(double mean, double stddev, double best);

struct LogEiPartials {
  double value = 0.0;
  double d_mean = 0.0;
  double d_stddev = 0.0;
};

LogEiPartials log_ei_partials(double mean, double stddev, double best);

/// log EI of a GP at x, optionally with its gradient in x.
double log_ei_at(const GpModel& model, const Vector& x, double best, Vector* grad = nullptr);

/// Above this temperature Boltzmann selection degenerates to top-k.
inline constexpr double kBoltzmannTopKThreshold = 1e6;

/// k distinct indices sampled without replacement with probability
/// proportional to exp(eta * z), z the standardized values. -inf entries are
/// replaced by the finite minimum first.
std::vector<Eigen::Index> boltzmann_select(const Vector& values, Eigen::Index k, double eta,
                                           std::mt19937_64& rng);

struct AcqConfig {
  /// m; the global Sobol set has 2m points.
  Eigen::Index raw_samples = 256;
  Eigen::Index num_starts = 5;
  int max_acq_steps = 2000;
  bool raasp_enabled = true;
  double boltzmann_temperature = 1.0;
  double top_fraction = 0.05;
  double gradient_tolerance = 1e-9;
  /// Stop an ascent once a step improves log EI by no more than this
  /// fraction of max(|log EI|, 1). The default is the usual L-BFGS-B setting
  /// factr = 1e7 times machine epsilon. A much smaller value lets the ascent
  /// spend hundreds of steps walking near-irrelevant dimensions (length
  /// scales at the upper bound, gradients around 1e-8) onto the box faces.
  double relative_reduction_tolerance = 1e7 * std::numeric_limits<double>::epsilon();
  RaaspOptions raasp;

  void validate() const;
};

struct StartRecord {
  Vector start_point;
  Vector end_point;
  double start_value = 0.0;
  double end_value = 0.0;
  double travel_distance = 0.0;
  CandidateOrigin origin = CandidateOrigin::kGlobalSobol;
  int gradient_steps_used = 0;
};

struct AcqOptReport {
  Vector chosen_point;
  double chosen_value = 0.0;
  std::vector<StartRecord> starts;
  double raasp_start_fraction = 0.0;
  /// Every candidate had log EI = -inf; chosen_point is the first candidate.
  bool degenerate = false;
  Eigen::Index candidate_count = 0;

  double mean_travel_distance() const;
  double mean_gradient_steps() const;
};

/// Multi-start log-EI maximization over [0, 1]^d: candidate assembly,
/// Boltzmann start selection, then projected L-BFGS from each start.
/// The model's training targets are in maximization form.
AcqOptReport maximize_acq(const GpModel& model, const AcqConfig& config, std::mt19937_64& rng);

}  // namespace hdbo
