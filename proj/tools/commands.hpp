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

#include "hdbo/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdbo::cli {

/// Bad command-line usage detected after parsing; exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct CommonArgs {
  std::optional<std::string> output_dir;
  bool force = false;
  int jobs = 1;
};

/// Output directory: flag, then config value, then $HDBO_OUTPUT_DIR, then ".".
std::string resolve_output_dir(const std::optional<std::string>& flag,
                               const std::optional<std::string>& config);

struct RunArgs {
  CommonArgs common;
  std::string config_path;
};
int cmd_run(const RunArgs& args);

struct HeatmapArgs {
  CommonArgs common;
  std::string kind;
  std::vector<long long> d_grid;
  std::vector<double> lengthscale_grid;
  int grid_points = 6;
  int reps = 5;
  std::uint64_t seed = 0;
  std::optional<int> n_obs;
  int steps = 50;
  double true_lengthscale = 0.5;
  std::string kernel = "matern52";
  std::string output;
};
int cmd_heatmap(const HeatmapArgs& args);

struct OtsdArgs {
  CommonArgs common;
  std::vector<std::string> traces;
  std::string output;
};
int cmd_otsd(const OtsdArgs& args);

struct BorderArgs {
  CommonArgs common;
  std::vector<std::string> traces;
  std::string benchmark;
  double top_fraction = 0.10;
  double tolerance = 1e-6;
  int reps = 10;
  std::uint64_t seed = 0;
  std::string output;
};
int cmd_analyze_border(const BorderArgs& args);

struct MllSurfaceArgs {
  CommonArgs common;
  long long d = 100;
  int n_obs = 50;
  double true_lengthscale = 1.0;
  std::string kernel = "matern52";
  double l_min = 0.5;
  double l_max = 5.0;
  int points = 25;
  std::string prior = "none";
  double signal_variance = 1.0;
  double noise_variance = 1e-4;
  std::uint64_t seed = 0;
  std::string output;
};
int cmd_mll_surface(const MllSurfaceArgs& args);

struct EiHistArgs {
  CommonArgs common;
  std::vector<long long> d_grid{2, 10, 100};
  int n_obs = 100;
  double lengthscale = 10.0;
  int n_eval = 2000;
  int bins = 10;
  std::string kernel = "rbf";
  std::uint64_t seed = 0;
  std::string output;
};
int cmd_ei_hist(const EiHistArgs& args);

struct ExportCsvArgs {
  CommonArgs common;
  std::vector<std::string> traces;
  std::string output;
};
int cmd_export_csv(const ExportCsvArgs& args);

int cmd_benchmarks();

}  // namespace hdbo::cli
