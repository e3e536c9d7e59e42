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

#include "experiment_config.hpp"

#include "hdbo/benchmarks.hpp"
#include "hdbo/bo.hpp"
#include "hdbo/defaults.hpp"
#include "hdbo/diagnostics.hpp"
#include "hdbo/otsd.hpp"
#include "hdbo/parallel.hpp"
#include "hdbo/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>

namespace hdbo::cli {

namespace fs = std::filesystem;

namespace {

// Writes to stdout when `path` is empty, otherwise atomically to `path`.
void emit(const std::string& path, const std::string& content, bool force) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  atomic_write(path, content, force);
}

void require_absent(const std::string& path, bool force) {
  if (!force && fs::exists(path)) {
    throw Error("refusing to overwrite existing '" + path + "' (use --force)");
  }
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

std::vector<RunTrace> read_traces(const std::vector<std::string>& paths) {
  std::vector<RunTrace> traces;
  traces.reserve(paths.size());
  for (const auto& p : paths) traces.push_back(read_trace_file(p));
  return traces;
}

std::vector<Eigen::Index> to_index_grid(const std::vector<long long>& v) {
  std::vector<Eigen::Index> out;
  for (long long x : v) {
    if (x < 1) throw UsageError("dimension grid entries must be >= 1");
    out.push_back(static_cast<Eigen::Index>(x));
  }
  return out;
}

KernelKind parse_kernel(const std::string& name) {
  try {
    return kernel_kind_from_string(name);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

// Sidecar path: results/heat.csv -> results/heat.meta.json
std::string sidecar_path(const std::string& csv_path) {
  fs::path p(csv_path);
  p.replace_extension(".meta.json");
  return p.string();
}

struct RunJob {
  std::string method;  // empty: random search
  const MethodConfig* config = nullptr;
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string csv_path;
};

}  // namespace

std::string resolve_output_dir(const std::optional<std::string>& flag,
                               const std::optional<std::string>& config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("HDBO_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

int cmd_run(const RunArgs& args) {
  const MethodDefaults defaults = load_defaults();
  const ExperimentConfig cfg = load_experiment_config(args.config_path, defaults);
  const std::string out_dir = resolve_output_dir(args.common.output_dir, cfg.output_dir);
  const std::string stem = sanitize(cfg.benchmark);

  std::vector<RunJob> jobs;
  auto add_job = [&](const std::string& method, const MethodConfig* config, std::uint64_t seed) {
    RunJob j;
    j.method = method;
    j.config = config;
    j.seed = seed;
    const std::string base =
        (fs::path(out_dir) / (stem + "__" + method + "__seed" + std::to_string(seed))).string();
    j.trace_path = base + ".jsonl";
    if (cfg.export_csv) j.csv_path = base + ".csv";
    jobs.push_back(std::move(j));
  };
  for (auto seed : cfg.seeds) {
    for (const auto& m : cfg.methods) add_job(m.config.name, &m.config, seed);
    if (cfg.random_search) add_job("random_search", nullptr, seed);
  }
  // Refuse before any work is done.
  for (const auto& j : jobs) {
    require_absent(j.trace_path, args.common.force);
    if (!j.csv_path.empty()) require_absent(j.csv_path, args.common.force);
  }
  fs::create_directories(out_dir);

  std::mutex io;
  std::size_t done = 0;
  int failures = 0;
  parallel_for(jobs.size(), args.common.jobs, [&](std::size_t k) {
    const RunJob& j = jobs[k];
    BenchmarkPtr bench = make_benchmark(cfg.benchmark);
    RunTrace trace;
    if (j.config) {
      RunOptions opts;
      opts.budget = cfg.budget;
      opts.doe_size = cfg.doe_size;
      opts.seed = j.seed;
      opts.config_snapshot = cfg.resolved;
      opts.config_snapshot["seed"] = j.seed;
      trace = run(*bench, *j.config, opts);
    } else {
      trace = random_search(*bench, cfg.budget, j.seed);
      trace.meta.config = cfg.resolved;
      trace.meta.config["seed"] = j.seed;
      trace.meta.config["method"] = {{"name", "random_search"}};
    }
    atomic_write(j.trace_path, trace_to_jsonl(trace), args.common.force);
    if (!j.csv_path.empty()) atomic_write(j.csv_path, trace_to_csv(trace), args.common.force);

    std::lock_guard<std::mutex> lock(io);
    ++done;
    const double best = trace.records.empty() ? 0.0 : trace.records.back().incumbent;
    std::fprintf(stderr, "[%zu/%zu] %s seed %llu: %zu evaluations, best %.6g -> %s%s\n", done,
                 jobs.size(), j.method.c_str(), static_cast<unsigned long long>(j.seed),
                 trace.records.size(), best, j.trace_path.c_str(),
                 trace.aborted ? " (ABORTED)" : "");
    if (trace.aborted) {
      ++failures;
      std::fprintf(stderr, "  benchmark failure: %s\n", trace.error.c_str());
    }
  });
  return failures == 0 ? 0 : 1;
}

int cmd_heatmap(const HeatmapArgs& args) {
  HeatmapKind kind{};
  try {
    kind = heatmap_kind_from_string(args.kind);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  const std::string out_dir = resolve_output_dir(args.common.output_dir, std::nullopt);
  const std::string path = args.output.empty()
                               ? (fs::path(out_dir) / ("heatmap_" + args.kind + ".csv")).string()
                               : args.output;
  const std::string meta_path = sidecar_path(path);
  require_absent(path, args.common.force);
  require_absent(meta_path, args.common.force);

  auto fill = [&](HeatmapOptions& o) {
    if (!args.d_grid.empty()) o.d_grid = to_index_grid(args.d_grid);
    o.lengthscale_grid = args.lengthscale_grid;
    o.grid_points = args.grid_points;
    o.reps = args.reps;
    o.seed = args.seed;
    o.jobs = args.common.jobs;
  };
  HeatmapResult result;
  try {
    if (kind == HeatmapKind::kMaxGrad) {
      VanishingGradOptions o;
      fill(o);
      if (args.n_obs) o.n_obs = *args.n_obs;
      o.steps = args.steps;
      o.true_lengthscale = args.true_lengthscale;
      o.kernel = parse_kernel(args.kernel);
      result = vanishing_grad_heatmap(o);
    } else {
      AcqSweepOptions o;
      fill(o);
      if (args.n_obs) o.n_obs = *args.n_obs;
      o.kernel = parse_kernel(args.kernel);
      result = kind == HeatmapKind::kMeanTravel ? acq_travel_heatmap(o) : raasp_fraction_heatmap(o);
    }
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  emit(path, heatmap_to_csv(result), args.common.force);
  emit(meta_path, heatmap_metadata(result).dump(2) + "\n", args.common.force);
  std::fprintf(stderr, "wrote %s and %s\n", path.c_str(), meta_path.c_str());
  return 0;
}

int cmd_otsd(const OtsdArgs& args) {
  if (args.traces.empty()) throw UsageError("otsd needs at least one trace file");
  std::ostringstream os;
  os << "trace,benchmark_id,method,seed,iteration,otsd,solver\n";
  for (const auto& path : args.traces) {
    const RunTrace t = read_trace_file(path);
    const OtsdCurve curve = otsd(t.points());
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      os << path << ',' << t.meta.benchmark_id << ',' << t.meta.method << ',' << t.meta.seed << ','
         << i << ',' << format_double(curve.values[i]) << ',' << to_string(curve.solver[i]) << '\n';
    }
  }
  if (!args.output.empty()) require_absent(args.output, args.common.force);
  emit(args.output, os.str(), args.common.force);
  return 0;
}

int cmd_analyze_border(const BorderArgs& args) {
  if (args.traces.size() < 2) throw UsageError("analyze-border needs at least two trace files");
  if (!args.output.empty()) require_absent(args.output, args.common.force);
  const std::vector<RunTrace> traces = read_traces(args.traces);
  std::string id = args.benchmark;
  if (id.empty()) {
    id = traces.front().meta.benchmark_id;
    for (const auto& t : traces) {
      if (t.meta.benchmark_id != id) {
        throw UsageError("traces come from different benchmarks; pass --benchmark explicitly");
      }
    }
  }
  BenchmarkPtr bench;
  try {
    bench = make_benchmark(id);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  BorderOptions o;
  o.top_fraction = args.top_fraction;
  o.boundary_tolerance = args.tolerance;
  o.reps = args.reps;
  o.seed = args.seed;
  BorderReport report;
  try {
    report = border_analysis(traces, *bench, o);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j = to_json(report);
  j["benchmark_id"] = id;
  j["traces"] = args.traces;
  emit(args.output, j.dump(2) + "\n", args.common.force);
  return 0;
}

int cmd_mll_surface(const MllSurfaceArgs& args) {
  if (args.d < 1 || args.n_obs < 1 || args.points < 2) {
    throw UsageError("mll-surface needs d >= 1, n-obs >= 1 and points >= 2");
  }
  if (!(args.l_min > 0.0 && args.l_min < args.l_max)) throw UsageError("need 0 < l-min < l-max");
  Hyperprior prior = NoPrior{};
  if (args.prior == "gamma") {
    prior = GammaPrior{};
  } else if (args.prior == "dim_scaled_lognormal") {
    const MethodDefaults defaults = load_defaults();
    prior = DimScaledLogNormalPrior{defaults.dsp_mu0, defaults.dsp_sigma0, args.d};
  } else if (args.prior != "none") {
    throw UsageError("unknown prior '" + args.prior + "' (none, gamma, dim_scaled_lognormal)");
  }
  if (!args.output.empty()) require_absent(args.output, args.common.force);
  const KernelKind kernel = parse_kernel(args.kernel);
  const Dataset raw = gp_prior_dataset(args.d, args.n_obs, args.true_lengthscale, kernel, args.seed);
  const Dataset train(raw.X, standardize_for_max(raw.y));
  const auto surface = mll_surface(train, log_grid(args.l_min, args.l_max, args.points), prior,
                                   kernel, args.signal_variance, args.noise_variance);
  emit(args.output, mll_surface_to_csv(surface), args.common.force);
  return 0;
}

int cmd_ei_hist(const EiHistArgs& args) {
  EiFlatnessOptions o;
  o.d_grid = to_index_grid(args.d_grid);
  o.n_obs = args.n_obs;
  o.lengthscale = args.lengthscale;
  o.n_eval = args.n_eval;
  o.bins = args.bins;
  o.kernel = parse_kernel(args.kernel);
  o.seed = args.seed;
  if (o.n_obs < 1 || o.n_eval < 1 || o.bins < 1 || !(o.lengthscale > 0.0)) {
    throw UsageError("ei-hist needs positive n-obs, n-eval, bins and lengthscale");
  }
  if (!args.output.empty()) require_absent(args.output, args.common.force);
  emit(args.output, ei_histograms_to_csv(ei_flatness_histogram(o)), args.common.force);
  return 0;
}

int cmd_export_csv(const ExportCsvArgs& args) {
  if (args.traces.empty()) throw UsageError("export-csv needs at least one trace file");
  if (!args.output.empty()) require_absent(args.output, args.common.force);
  std::string out;
  bool header = true;
  for (const auto& path : args.traces) {
    out += trace_to_csv(read_trace_file(path), header);
    header = false;
  }
  emit(args.output, out, args.common.force);
  return 0;
}

int cmd_benchmarks() {
  std::cout << "levy:D                  Levy on [-10, 10]^D\n"
               "schwefel:D              Schwefel on [-500, 500]^D\n"
               "griewank:D              Griewank on [-600, 600]^D\n"
               "gp_prior:D[:lengthscale=L][:kernel=matern52|rbf][:seed=S]\n"
               "                        one GP prior realization on [0, 1]^D\n"
               "partially_active:D[:active=A][:center=C]\n"
               "                        sum of squares over the first A coordinates\n"
               "external:D[:lo=a][:hi=b]:cmd=COMMAND\n"
               "                        subprocess per evaluation (point on stdin, value on stdout)\n";
  return 0;
}

}  // namespace hdbo::cli
