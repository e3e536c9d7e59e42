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

#include "hdbo/acquisition.hpp"
#include "hdbo/benchmarks.hpp"
#include "hdbo/bo.hpp"
#include "hdbo/fit.hpp"
#include "hdbo/gp.hpp"
#include "hdbo/prior.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hdbo {

/// `n` uniformly random points of [0, 1]^d labelled by one GP prior
/// realization with an isotropic length scale (unit signal variance).
Dataset gp_prior_dataset(Eigen::Index d, int n, double lengthscale, KernelKind kind,
                         std::uint64_t seed);

// ---------------------------------------------------------------------------
// Heatmaps over (dimension, length scale) grids.

enum class HeatmapKind { kMaxGrad, kMeanTravel, kRaaspFraction };

std::string_view to_string(HeatmapKind kind);
/// Accepts the CLI names mll-grad, acq-travel and raasp-fraction.
HeatmapKind heatmap_kind_from_string(std::string_view name);

struct HeatmapResult {
  HeatmapKind kind = HeatmapKind::kMaxGrad;
  std::vector<Eigen::Index> d_grid;
  std::vector<double> lengthscale_grid;
  int reps = 1;
  /// values[i][j][r]: repetition r of cell (d_grid[i], lengthscale_grid[j]).
  std::vector<std::vector<std::vector<double>>> values;
  /// Experiment parameters, written to the JSON sidecar.
  nlohmann::json parameters;

  /// Cell means; rows follow d_grid, columns lengthscale_grid.
  Matrix mean() const;
};

struct HeatmapOptions {
  std::vector<Eigen::Index> d_grid{2, 10, 50, 100, 500, 1000};
  /// Empty means a per-dimension log grid from 0.05 to sqrt(d).
  std::vector<double> lengthscale_grid;
  int grid_points = 6;
  int reps = 5;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Log-spaced grid of `count` values between lo and hi (inclusive).
std::vector<double> log_grid(double lo, double hi, int count);

/// Default length-scale grid: the union over d_grid of log grids from 0.05
/// to sqrt(d) would be ragged, so a single grid from 0.05 to sqrt(max d) is used.
std::vector<double> default_lengthscale_grid(const std::vector<Eigen::Index>& d_grid, int count);

struct VanishingGradOptions : HeatmapOptions {
  int n_obs = 50;
  double true_lengthscale = 0.5;
  int steps = 50;
  KernelKind kernel = KernelKind::kMatern52;
};

/// Cell statistic: maximum natural-space length-scale MLL gradient over the
/// first `steps` fit steps started from the cell's length scale. The
/// dataset of one (d, rep) pair is shared by every length scale.
HeatmapResult vanishing_grad_heatmap(const VanishingGradOptions& options);

/// Maximum length-scale gradient for a single (d, init length scale, seed)
/// cell; the building block of vanishing_grad_heatmap.
double vanishing_grad_cell(Eigen::Index d, double init_lengthscale, int n_obs,
                           double true_lengthscale, int steps, KernelKind kernel,
                           std::uint64_t data_seed);

struct AcqSweepOptions : HeatmapOptions {
  int n_obs = 20;
  bool raasp = false;
  AcqConfig acq;
  KernelKind kernel = KernelKind::kMatern52;
  double noise_variance = 1e-6;
};

/// Per-cell result of one acquisition maximization on a GP-prior-sample
/// surrogate with `n_obs` uniformly random observations and the true
/// isotropic length scale.
struct AcqCellResult {
  double normalized_travel = 0.0;  // mean travel distance / sqrt(d)
  double raasp_fraction = 0.0;
  double mean_gradient_steps = 0.0;
};

AcqCellResult acq_cell(Eigen::Index d, double lengthscale, int n_obs, const AcqConfig& acq,
                       KernelKind kernel, double noise_variance, std::uint64_t seed);

/// Mean d^(-1/2)-normalized travel distance of the acquisition starts.
HeatmapResult acq_travel_heatmap(const AcqSweepOptions& options);
/// Mean fraction of starts that came from RAASP candidates (RAASP forced on).
HeatmapResult raasp_fraction_heatmap(const AcqSweepOptions& options);

/// CSV with columns d, lengthscale, statistic, mean, rep_0 ... rep_{R-1}.
std::string heatmap_to_csv(const HeatmapResult& result);
nlohmann::json heatmap_metadata(const HeatmapResult& result);

// ---------------------------------------------------------------------------
// MLL surface along an isotropic length-scale sweep.

struct MllSurfacePoint {
  double lengthscale = 0.0;
  // All terms divided by n.
  double data_fit = 0.0;
  /// Signed MLL term -1/2 log|K| / n.
  double complexity_penalty = 0.0;
  /// Penalty magnitude 1/2 log|K| / n; decreases as the length scale grows.
  double penalty = 0.0;
  double total = 0.0;
  double total_with_prior = 0.0;
};

std::vector<MllSurfacePoint> mll_surface(const Dataset& train, const std::vector<double>& grid,
                                         const Hyperprior& prior,
                                         KernelKind kernel = KernelKind::kMatern52,
                                         double signal_variance = 1.0,
                                         double noise_variance = 1e-4);

/// Sum of absolute successive differences of the `total` column.
double total_variation(const std::vector<MllSurfacePoint>& surface);

std::string mll_surface_to_csv(const std::vector<MllSurfacePoint>& surface);

// ---------------------------------------------------------------------------
// EI flatness.

struct EiHistogram {
  Eigen::Index d = 0;
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
  std::vector<double> ei_values;
  /// Share of the evaluations falling into the most populated bin.
  double modal_mass() const;
};

struct EiFlatnessOptions {
  std::vector<Eigen::Index> d_grid{2, 10, 100};
  int n_obs = 100;
  double lengthscale = 10.0;
  int n_eval = 2000;
  int bins = 10;
  std::uint64_t seed = 0;
  KernelKind kernel = KernelKind::kRbf;
  double noise_variance = 1e-6;
};

/// EI of a GP conditioned on `n_obs` uniformly random draws of an isotropic
/// prior sample (targets z-scored as in the optimization loop), evaluated at `n_eval` scrambled Sobol points. Bins are of
/// equal width between the smallest and largest EI value of each dimension.
std::vector<EiHistogram> ei_flatness_histogram(const EiFlatnessOptions& options);

std::string ei_histograms_to_csv(const std::vector<EiHistogram>& hists);

// ---------------------------------------------------------------------------
// Dominant / secondary dimension analysis.

enum class BorderLabel { kDominant, kSecondary, kUnstable };
std::string_view to_string(BorderLabel label);

struct BorderOptions {
  double top_fraction = 0.10;
  double boundary_tolerance = 1e-6;
  /// Replacement draws per run for the f-bar estimates.
  int reps = 10;
  std::uint64_t seed = 0;
};

struct BorderReport {
  std::vector<BorderLabel> labels;
  /// boundary_frequency[r][i]: share of run r's top points with x_i on the boundary.
  std::vector<std::vector<double>> boundary_frequency;
  /// Number of runs labelling each dimension secondary.
  std::vector<int> secondary_votes;
  int dominant = 0;
  int secondary = 0;
  int unstable = 0;
  int runs = 0;
  int agreement_threshold = 0;
  int reps = 0;
  double f_best = 0.0;       // best points re-evaluated unchanged
  double f_dominant = 0.0;   // dominant coordinates replaced by uniform values
  double f_secondary = 0.0;  // secondary coordinates replaced by uniform values
  double f_rand = 0.0;       // fully uniform points
};

/// Minimal number of agreeing runs out of R for a stable label: ceil(8R/15).
int border_agreement_threshold(int runs);

/// Mean objective over runs and reps when the coordinates in `mask` of each
/// best point are replaced by uniform values (none replaced: plain re-evaluation).
double replaced_mean(Benchmark& benchmark, const std::vector<Vector>& best_points,
                     const std::vector<bool>& mask, int reps, std::uint64_t seed);

/// Throws UnsupportedAnalysisError for benchmarks that cannot be re-evaluated
/// and ConfigError for fewer than two traces or mismatched dimensions.
BorderReport border_analysis(const std::vector<RunTrace>& traces, Benchmark& benchmark,
                             const BorderOptions& options = {});

nlohmann::json to_json(const BorderReport& report);

}  // namespace hdbo
