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

#include "hdbo/diagnostics.hpp"

#include "hdbo/error.hpp"
#include "hdbo/parallel.hpp"
#include "hdbo/rng.hpp"
#include "hdbo/sobol.hpp"
#include "hdbo/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hdbo {

namespace {

constexpr std::uint64_t kDataStream = 0xDA7A;
constexpr std::uint64_t kAcqStream = 0xACC;
constexpr std::uint64_t kBorderStream = 0xB0BD;

// Seed for one (d index, rep) dataset, shared across the length-scale axis.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t di, std::size_t lj, int rep) {
  auto rng = make_rng(seed, (static_cast<std::uint64_t>(di) << 40) ^
                                (static_cast<std::uint64_t>(lj) << 20) ^
                                static_cast<std::uint64_t>(rep));
  return rng();
}

Matrix uniform_points(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = unif(rng);
  }
  return X;
}

std::vector<double> resolve_grid(const HeatmapOptions& o) {
  if (!o.lengthscale_grid.empty()) return o.lengthscale_grid;
  return default_lengthscale_grid(o.d_grid, o.grid_points);
}

void check_heatmap_options(const HeatmapOptions& o) {
  if (o.d_grid.empty()) throw ConfigError("heatmap: empty dimension grid");
  if (o.reps < 1) throw ConfigError("heatmap: reps must be at least 1");
  for (auto d : o.d_grid) {
    if (d < 1) throw ConfigError("heatmap: dimensions must be positive");
  }
  for (double l : o.lengthscale_grid) {
    if (!(l > 0.0)) throw ConfigError("heatmap: length scales must be positive");
  }
}

using CellFn = std::function<double(Eigen::Index d, double l, std::uint64_t seed)>;

HeatmapResult run_heatmap(HeatmapKind kind, const HeatmapOptions& o, bool share_over_l,
                          const CellFn& cell) {
  check_heatmap_options(o);
  HeatmapResult res;
  res.kind = kind;
  res.d_grid = o.d_grid;
  res.lengthscale_grid = resolve_grid(o);
  if (res.lengthscale_grid.empty()) throw ConfigError("heatmap: empty length-scale grid");
  res.reps = o.reps;
  const std::size_t nd = res.d_grid.size();
  const std::size_t nl = res.lengthscale_grid.size();
  const auto reps = static_cast<std::size_t>(o.reps);
  res.values.assign(nd, std::vector<std::vector<double>>(nl, std::vector<double>(reps, 0.0)));
  parallel_for(nd * nl * reps, o.jobs, [&](std::size_t job) {
    const std::size_t r = job % reps;
    const std::size_t j = (job / reps) % nl;
    const std::size_t i = job / (reps * nl);
    const std::uint64_t s = cell_seed(o.seed, i, share_over_l ? 0 : j + 1, static_cast<int>(r));
    res.values[i][j][r] = cell(res.d_grid[i], res.lengthscale_grid[j], s);
  });
  res.parameters = {{"seed", o.seed}, {"reps", o.reps}};
  return res;
}

}  // namespace

Dataset gp_prior_dataset(Eigen::Index d, int n, double lengthscale, KernelKind kind,
                          std::uint64_t seed) {
  auto rng = make_rng(seed, kDataStream);
  Matrix X = uniform_points(n, d, rng);
  GpPriorSample f(d, lengthscale, kind, seed);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = f.evaluate(X.row(i).transpose());
  return Dataset(std::move(X), std::move(y));
}

// ---------------------------------------------------------------------------

std::string_view to_string(HeatmapKind kind) {
  switch (kind) {
    case HeatmapKind::kMaxGrad:
      return "mll-grad";
    case HeatmapKind::kMeanTravel:
      return "acq-travel";
    case HeatmapKind::kRaaspFraction:
      return "raasp-fraction";
  }
  return "?";
}

HeatmapKind heatmap_kind_from_string(std::string_view name) {
  for (auto k : {HeatmapKind::kMaxGrad, HeatmapKind::kMeanTravel, HeatmapKind::kRaaspFraction}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown heatmap kind '" + std::string(name) +
                    "' (expected mll-grad, acq-travel or raasp-fraction)");
}

Matrix HeatmapResult::mean() const {
  Matrix M(static_cast<Eigen::Index>(d_grid.size()), static_cast<Eigen::Index>(lengthscale_grid.size()));
  for (std::size_t i = 0; i < d_grid.size(); ++i) {
    for (std::size_t j = 0; j < lengthscale_grid.size(); ++j) {
      const auto& v = values[i][j];
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    }
  }
  return M;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw ConfigError("log_grid: invalid range");
  if (count == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_lengthscale_grid(const std::vector<Eigen::Index>& d_grid, int count) {
  if (d_grid.empty()) throw ConfigError("heatmap: empty dimension grid");
  const auto dmax = *std::max_element(d_grid.begin(), d_grid.end());
  return log_grid(0.05, std::max(0.05, std::sqrt(static_cast<double>(dmax))), count);
}

double vanishing_grad_cell(Eigen::Index d, double init_lengthscale, int n_obs,
                           double true_lengthscale, int steps, KernelKind kernel,
                           std::uint64_t data_seed) {
  Dataset raw = gp_prior_dataset(d, n_obs, true_lengthscale, kernel, data_seed);
  Dataset train(std::move(raw.X), standardize_for_max(raw.y));
  FitConfig cfg;
  cfg.scheme = ExplicitInit{init_lengthscale};
  cfg.kernel = kernel;
  cfg.max_steps = steps;
  cfg.vanish_window = steps;
  cfg.record_gradient_trace = true;
  auto rng = make_rng(data_seed, 1);
  return fit(train, cfg, rng).max_gradient;
}

HeatmapResult vanishing_grad_heatmap(const VanishingGradOptions& o) {
  if (o.n_obs < 1 || o.steps < 1) throw ConfigError("mll-grad heatmap: n_obs and steps must be positive");
  HeatmapResult res = run_heatmap(HeatmapKind::kMaxGrad, o, true, [&](Eigen::Index d, double l, std::uint64_t s) {
    return vanishing_grad_cell(d, l, o.n_obs, o.true_lengthscale, o.steps, o.kernel, s);
  });
  res.parameters.update({{"n_obs", o.n_obs},
                         {"true_lengthscale", o.true_lengthscale},
                         {"steps", o.steps},
                         {"kernel", std::string(to_string(o.kernel))},
                         {"threshold", kSinglePrecisionEps}});
  return res;
}

AcqCellResult acq_cell(Eigen::Index d, double lengthscale, int n_obs, const AcqConfig& acq,
                       KernelKind kernel, double noise_variance, std::uint64_t seed) {
  const Dataset train = gp_prior_dataset(d, n_obs, lengthscale, kernel, seed);
  const GpModel model(train, GpHyperparams::isotropic(d, lengthscale, 1.0, noise_variance), kernel);
  auto rng = make_rng(seed, kAcqStream);
  const AcqOptReport rep = maximize_acq(model, acq, rng);
  AcqCellResult out;
  out.normalized_travel = rep.mean_travel_distance() / std::sqrt(static_cast<double>(d));
  out.raasp_fraction = rep.raasp_start_fraction;
  out.mean_gradient_steps = rep.mean_gradient_steps();
  return out;
}

namespace {

HeatmapResult acq_heatmap(HeatmapKind kind, const AcqSweepOptions& o, bool raasp) {
  if (o.n_obs < 1) throw ConfigError("acquisition heatmap: n_obs must be positive");
  AcqConfig acq = o.acq;
  acq.raasp_enabled = raasp;
  HeatmapResult res = run_heatmap(kind, o, false, [&](Eigen::Index d, double l, std::uint64_t s) {
    const AcqCellResult c = acq_cell(d, l, o.n_obs, acq, o.kernel, o.noise_variance, s);
    return kind == HeatmapKind::kMeanTravel ? c.normalized_travel : c.raasp_fraction;
  });
  res.parameters.update({{"n_obs", o.n_obs},
                         {"raasp", raasp},
                         {"kernel", std::string(to_string(o.kernel))},
                         {"noise_variance", o.noise_variance},
                         {"raw_samples", acq.raw_samples},
                         {"num_starts", acq.num_starts},
                         {"max_acq_steps", acq.max_acq_steps},
                         {"zero_threshold", 1e-9}});
  return res;
}

}  // namespace

HeatmapResult acq_travel_heatmap(const AcqSweepOptions& o) {
  return acq_heatmap(HeatmapKind::kMeanTravel, o, o.raasp);
}

HeatmapResult raasp_fraction_heatmap(const AcqSweepOptions& o) {
  return acq_heatmap(HeatmapKind::kRaaspFraction, o, true);
}

std::string heatmap_to_csv(const HeatmapResult& r) {
  std::ostringstream os;
  os << "d,lengthscale,statistic,mean";
  for (int k = 0; k < r.reps; ++k) os << ",rep_" << k;
  os << '\n';
  const Matrix M = r.mean();
  for (std::size_t i = 0; i < r.d_grid.size(); ++i) {
    for (std::size_t j = 0; j < r.lengthscale_grid.size(); ++j) {
      os << r.d_grid[i] << ',' << format_double(r.lengthscale_grid[j]) << ',' << to_string(r.kind)
         << ',' << format_double(M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      for (double v : r.values[i][j]) os << ',' << format_double(v);
      os << '\n';
    }
  }
  return os.str();
}

nlohmann::json heatmap_metadata(const HeatmapResult& r) {
  nlohmann::json j = r.parameters;
  j["statistic"] = std::string(to_string(r.kind));
  j["d_grid"] = r.d_grid;
  j["lengthscale_grid"] = r.lengthscale_grid;
  j["reps"] = r.reps;
  j["rows"] = r.d_grid.size() * r.lengthscale_grid.size();
  return j;
}

// ---------------------------------------------------------------------------

std::vector<MllSurfacePoint> mll_surface(const Dataset& train, const std::vector<double>& grid,
                                         const Hyperprior& prior, KernelKind kernel,
                                         double signal_variance, double noise_variance) {
  train.validate();
  if (train.size() < 1) throw ContractError("mll_surface: empty dataset");
  if (grid.empty()) throw ConfigError("mll_surface: empty length-scale grid");
  const double n = static_cast<double>(train.size());
  std::vector<MllSurfacePoint> out;
  out.reserve(grid.size());
  for (double l : grid) {
    const auto params = GpHyperparams::isotropic(train.dim(), l, signal_variance, noise_variance);
    const MllBreakdown b = mll(train, params, kernel);
    const double lp = has_prior(prior) ? log_prior(prior, params).value : 0.0;
    MllSurfacePoint p;
    p.lengthscale = l;
    p.data_fit = b.data_fit / n;
    p.complexity_penalty = b.complexity_penalty / n;
    p.penalty = -b.complexity_penalty / n;
    p.total = b.total / n;
    p.total_with_prior = (b.total + lp) / n;
    out.push_back(p);
  }
  return out;
}

double total_variation(const std::vector<MllSurfacePoint>& s) {
  double tv = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) tv += std::abs(s[i].total - s[i - 1].total);
  return tv;
}

std::string mll_surface_to_csv(const std::vector<MllSurfacePoint>& s) {
  std::ostringstream os;
  os << "lengthscale,data_fit,complexity_penalty,penalty,total,total_with_prior\n";
  for (const auto& p : s) {
    os << format_double(p.lengthscale) << ',' << format_double(p.data_fit) << ','
       << format_double(p.complexity_penalty) << ',' << format_double(p.penalty) << ','
       << format_double(p.total) << ',' << format_double(p.total_with_prior) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

double EiHistogram::modal_mass() const {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
         static_cast<double>(total);
}

std::vector<EiHistogram> ei_flatness_histogram(const EiFlatnessOptions& o) {
  if (o.d_grid.empty()) throw ConfigError("ei histogram: empty dimension grid");
  if (o.n_obs < 1 || o.n_eval < 1 || o.bins < 1) throw ConfigError("ei histogram: counts must be positive");
  std::vector<EiHistogram> out;
  for (std::size_t i = 0; i < o.d_grid.size(); ++i) {
    const Eigen::Index d = o.d_grid[i];
    const std::uint64_t s = cell_seed(o.seed, i, 0, 0);
    const Dataset raw = gp_prior_dataset(d, o.n_obs, o.lengthscale, o.kernel, s);
    // Same target convention as the optimization loop: z-scored, maximization form.
    const Dataset train(raw.X, standardize_for_max(raw.y));
    const GpModel model(train, GpHyperparams::isotropic(d, o.lengthscale, 1.0, o.noise_variance), o.kernel);
    const double best = train.y.maxCoeff();
    const Matrix Q = sobol(o.n_eval, d, s);
    EiHistogram h;
    h.d = d;
    h.ei_values.resize(static_cast<std::size_t>(o.n_eval));
    for (Eigen::Index q = 0; q < Q.rows(); ++q) {
      const auto p = model.predict(Q.row(q).transpose());
      h.ei_values[static_cast<std::size_t>(q)] = ei(p.mean, std::sqrt(std::max(p.variance, 0.0)), best);
    }
    const auto [mn, mx] = std::minmax_element(h.ei_values.begin(), h.ei_values.end());
    const double lo = *mn;
    const double hi = *mx;
    h.edges.resize(static_cast<std::size_t>(o.bins) + 1);
    for (int b = 0; b <= o.bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / o.bins;
    h.counts.assign(static_cast<std::size_t>(o.bins), 0);
    for (double v : h.ei_values) {
      std::size_t b = 0;
      if (hi > lo) {
        b = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * o.bins));
        b = std::min(b, static_cast<std::size_t>(o.bins) - 1);
      }
      ++h.counts[b];
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::string ei_histograms_to_csv(const std::vector<EiHistogram>& hists) {
  std::ostringstream os;
  os << "d,bin,lower,upper,count,modal_mass\n";
  for (const auto& h : hists) {
    const double mm = h.modal_mass();
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      os << h.d << ',' << b << ',' << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1])
         << ',' << h.counts[b] << ',' << format_double(mm) << '\n';
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::string_view to_string(BorderLabel label) {
  switch (label) {
    case BorderLabel::kDominant:
      return "dominant";
    case BorderLabel::kSecondary:
      return "secondary";
    case BorderLabel::kUnstable:
      return "unstable";
  }
  return "?";
}

int border_agreement_threshold(int runs) {
  // ceil(8 R / 15) in integer arithmetic.
  return (8 * runs + 14) / 15;
}

double replaced_mean(Benchmark& benchmark, const std::vector<Vector>& best_points,
                     const std::vector<bool>& mask, int reps, std::uint64_t seed) {
  const bool any = std::find(mask.begin(), mask.end(), true) != mask.end();
  auto rng = make_rng(seed, kBorderStream);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (const Vector& x : best_points) {
    const int draws = any ? reps : 1;
    for (int r = 0; r < draws; ++r) {
      Vector z = x;
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        if (mask[static_cast<std::size_t>(i)]) z(i) = unif(rng);
      }
      sum += benchmark.evaluate(z);
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

BorderReport border_analysis(const std::vector<RunTrace>& traces, Benchmark& benchmark,
                             const BorderOptions& o) {
  if (!benchmark.re_evaluable()) {
    throw UnsupportedAnalysisError("border analysis needs a re-evaluable benchmark; '" +
                                   benchmark.id() + "' is not");
  }
  if (traces.size() < 2) throw ConfigError("border analysis needs at least two traces");
  if (!(o.top_fraction > 0.0 && o.top_fraction <= 1.0)) throw ConfigError("border analysis: top fraction must be in (0, 1]");
  if (o.reps < 1) throw ConfigError("border analysis: reps must be at least 1");
  const Eigen::Index d = benchmark.dim();
  BorderReport rep;
  rep.runs = static_cast<int>(traces.size());
  rep.agreement_threshold = border_agreement_threshold(rep.runs);
  rep.reps = o.reps;
  rep.secondary_votes.assign(static_cast<std::size_t>(d), 0);
  std::vector<Vector> best_points;
  for (const RunTrace& t : traces) {
    if (t.meta.dim != d) throw ConfigError("border analysis: trace dimension does not match benchmark");
    if (t.records.empty()) throw ConfigError("border analysis: empty trace");
    // Top points by lowest objective; ties keep the earlier record.
    std::vector<std::size_t> order(t.records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return t.records[a].observed < t.records[b].observed;
    });
    const auto k = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(o.top_fraction * static_cast<double>(order.size()) - 1e-9)));
    std::vector<double> freq(static_cast<std::size_t>(d), 0.0);
    for (std::size_t m = 0; m < k; ++m) {
      const Vector& x = t.records[order[m]].x;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (x(i) <= o.boundary_tolerance || x(i) >= 1.0 - o.boundary_tolerance) freq[static_cast<std::size_t>(i)] += 1.0;
      }
    }
    for (std::size_t i = 0; i < freq.size(); ++i) {
      freq[i] /= static_cast<double>(k);
      if (freq[i] > 0.5) ++rep.secondary_votes[i];
    }
    rep.boundary_frequency.push_back(std::move(freq));
    best_points.push_back(t.records[order.front()].x);
  }
  std::vector<bool> secondary_mask(static_cast<std::size_t>(d), false);
  std::vector<bool> dominant_mask(static_cast<std::size_t>(d), false);
  for (std::size_t i = 0; i < rep.secondary_votes.size(); ++i) {
    const int sec = rep.secondary_votes[i];
    const int dom = rep.runs - sec;
    BorderLabel label = BorderLabel::kUnstable;
    if (sec >= rep.agreement_threshold) {
      label = BorderLabel::kSecondary;
      secondary_mask[i] = true;
      ++rep.secondary;
    } else if (dom >= rep.agreement_threshold) {
      label = BorderLabel::kDominant;
      dominant_mask[i] = true;
      ++rep.dominant;
    } else {
      ++rep.unstable;
    }
    rep.labels.push_back(label);
  }
  const std::vector<bool> none(static_cast<std::size_t>(d), false);
  const std::vector<bool> all(static_cast<std::size_t>(d), true);
  rep.f_best = replaced_mean(benchmark, best_points, none, o.reps, o.seed);
  rep.f_dominant = replaced_mean(benchmark, best_points, dominant_mask, o.reps, o.seed + 1);
  rep.f_secondary = replaced_mean(benchmark, best_points, secondary_mask, o.reps, o.seed + 2);
  rep.f_rand = replaced_mean(benchmark, best_points, all, o.reps, o.seed + 3);
  return rep;
}

nlohmann::json to_json(const BorderReport& r) {
  std::vector<std::string> labels;
  for (auto l : r.labels) labels.emplace_back(to_string(l));
  return {{"labels", labels},
          {"dominant", r.dominant},
          {"secondary", r.secondary},
          {"unstable", r.unstable},
          {"runs", r.runs},
          {"agreement_threshold", r.agreement_threshold},
          {"reps", r.reps},
          {"secondary_votes", r.secondary_votes},
          {"boundary_frequency", r.boundary_frequency},
          {"f_best", r.f_best},
          {"f_dominant", r.f_dominant},
          {"f_secondary", r.f_secondary},
          {"f_rand", r.f_rand}};
}

}  // namespace hdbo
