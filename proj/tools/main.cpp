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

#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <functional>

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

void add_common(CLI::App* cmd, hdbo::cli::CommonArgs& common, bool with_jobs) {
  cmd->add_option("--output-dir", common.output_dir,
                  "Directory for generated files (default: $HDBO_OUTPUT_DIR, else the current directory)");
  cmd->add_flag("--force", common.force, "Overwrite existing output files");
  if (with_jobs) {
    cmd->add_option("--jobs,-j", common.jobs, "Worker threads for independent runs or cells")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hdbo::cli;
  CLI::App app{
      "hdbo: Bayesian optimization in high dimensions with MLE length scales and RAASP candidates,\n"
      "plus the diagnostics used to study it (gradient heatmaps, OTSD, EI flatness, border analysis).\n"
      "Exit status: 0 success, 2 usage or configuration error, 1 runtime failure."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hdbo 0.1.0");

  std::function<int()> action;

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run the optimization experiment described by a YAML config; "
                                        "writes one JSONL trace per (seed, method)");
  run->add_option("config", run_args.config_path, "Experiment config (YAML)")->required()->check(CLI::ExistingFile);
  add_common(run, run_args.common, true);
  run->callback([&] { action = [&] { return cmd_run(run_args); }; });

  HeatmapArgs heat;
  auto* hm = app.add_subcommand("heatmap", "Sweep a (dimension, length scale) grid and write a CSV "
                                           "plus a .meta.json sidecar");
  hm->add_option("kind", heat.kind, "mll-grad | acq-travel | raasp-fraction")->required();
  hm->add_option("--d-grid", heat.d_grid, "Dimensions (comma separated; default 2,10,50,100,500,1000)")
      ->delimiter(',');
  hm->add_option("--l-grid", heat.lengthscale_grid,
                 "Length scales (comma separated; default log grid from 0.05 to sqrt(max d))")
      ->delimiter(',');
  hm->add_option("--grid-points", heat.grid_points, "Points of the default length-scale grid")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  hm->add_option("--reps", heat.reps, "Repetitions per cell")->check(CLI::PositiveNumber)->capture_default_str();
  hm->add_option("--seed", heat.seed, "Base seed")->capture_default_str();
  hm->add_option("--n-obs", heat.n_obs, "Observations per cell (default 50 for mll-grad, 20 otherwise)")
      ->check(CLI::PositiveNumber);
  hm->add_option("--steps", heat.steps, "mll-grad: fit steps inspected")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hm->add_option("--true-lengthscale", heat.true_lengthscale, "mll-grad: length scale of the data-generating GP")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  hm->add_option("--kernel", heat.kernel, "matern52 | rbf")->capture_default_str();
  hm->add_option("--output,-o", heat.output, "CSV path (default <output-dir>/heatmap_<kind>.csv)");
  add_common(hm, heat.common, true);
  hm->callback([&] { action = [&] { return cmd_heatmap(heat); }; });

  OtsdArgs otsd_args;
  auto* ot = app.add_subcommand("otsd", "Optimal-tour-length curves (exact or heuristic) of traces as CSV");
  ot->add_option("traces", otsd_args.traces, "JSONL trace files")->check(CLI::ExistingFile);
  ot->add_option("--output,-o", otsd_args.output, "CSV path (default: standard output)");
  add_common(ot, otsd_args.common, false);
  ot->callback([&] { action = [&] { return cmd_otsd(otsd_args); }; });

  BorderArgs border;
  auto* ab = app.add_subcommand("analyze-border",
                                "Label dimensions dominant/secondary from where the best points sit; JSON report");
  ab->add_option("traces", border.traces, "JSONL trace files (at least two)")->check(CLI::ExistingFile);
  ab->add_option("--benchmark,-b", border.benchmark,
                 "Benchmark id used for re-evaluation (default: the id recorded in the traces)");
  ab->add_option("--top-fraction", border.top_fraction, "Share of best points inspected per run")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  ab->add_option("--tolerance", border.tolerance, "Distance to a face counted as on the boundary")
      ->capture_default_str();
  ab->add_option("--reps", border.reps, "Replacement draws per run")->check(CLI::PositiveNumber)->capture_default_str();
  ab->add_option("--seed", border.seed, "Seed for the replacement draws")->capture_default_str();
  ab->add_option("--output,-o", border.output, "JSON path (default: standard output)");
  add_common(ab, border.common, false);
  ab->callback([&] { action = [&] { return cmd_analyze_border(border); }; });

  MllSurfaceArgs surf;
  auto* ms = app.add_subcommand("mll-surface",
                                "Per-observation MLL terms along an isotropic length-scale sweep as CSV");
  ms->add_option("--d", surf.d, "Dimension")->capture_default_str();
  ms->add_option("--n-obs", surf.n_obs, "Observations")->capture_default_str();
  ms->add_option("--true-lengthscale", surf.true_lengthscale, "Length scale of the data-generating GP")
      ->capture_default_str();
  ms->add_option("--kernel", surf.kernel, "matern52 | rbf")->capture_default_str();
  ms->add_option("--l-min", surf.l_min, "Smallest length scale of the sweep")->capture_default_str();
  ms->add_option("--l-max", surf.l_max, "Largest length scale of the sweep")->capture_default_str();
  ms->add_option("--points", surf.points, "Log-spaced sweep points")->capture_default_str();
  ms->add_option("--prior", surf.prior, "none | gamma | dim_scaled_lognormal")->capture_default_str();
  ms->add_option("--signal-variance", surf.signal_variance, "Fixed signal variance")->capture_default_str();
  ms->add_option("--noise-variance", surf.noise_variance, "Fixed noise variance")->capture_default_str();
  ms->add_option("--seed", surf.seed, "Data seed")->capture_default_str();
  ms->add_option("--output,-o", surf.output, "CSV path (default: standard output)");
  add_common(ms, surf.common, false);
  ms->callback([&] { action = [&] { return cmd_mll_surface(surf); }; });

  EiHistArgs eih;
  auto* eh = app.add_subcommand("ei-hist", "Histograms of EI over scrambled Sobol points per dimension as CSV");
  eh->add_option("--d-grid", eih.d_grid, "Dimensions (comma separated)")->delimiter(',')->capture_default_str();
  eh->add_option("--n-obs", eih.n_obs, "Observations")->capture_default_str();
  eh->add_option("--lengthscale", eih.lengthscale, "Isotropic length scale of data and model")->capture_default_str();
  eh->add_option("--n-eval", eih.n_eval, "Sobol evaluation points")->capture_default_str();
  eh->add_option("--bins", eih.bins, "Equal-width bins")->capture_default_str();
  eh->add_option("--kernel", eih.kernel, "matern52 | rbf")->capture_default_str();
  eh->add_option("--seed", eih.seed, "Data seed")->capture_default_str();
  eh->add_option("--output,-o", eih.output, "CSV path (default: standard output)");
  add_common(eh, eih.common, false);
  eh->callback([&] { action = [&] { return cmd_ei_hist(eih); }; });

  ExportCsvArgs exp;
  auto* ex = app.add_subcommand("export-csv", "Flatten traces into one per-iteration CSV");
  ex->add_option("traces", exp.traces, "JSONL trace files")->check(CLI::ExistingFile);
  ex->add_option("--output,-o", exp.output, "CSV path (default: standard output)");
  add_common(ex, exp.common, false);
  ex->callback([&] { action = [&] { return cmd_export_csv(exp); }; });

  auto* bl = app.add_subcommand("benchmarks", "List benchmark id formats");
  bl->callback([&] { action = [] { return cmd_benchmarks(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "hdbo: usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const hdbo::ConfigError& e) {
    std::fprintf(stderr, "hdbo: configuration error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hdbo: error: %s\n", e.what());
    return kExitRuntime;
  }
}
