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

#include "hdbo/sampling.hpp"

#include "hdbo/error.hpp"
#include "hdbo/rng.hpp"
#include "hdbo/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hdbo {

namespace {

// Rejection sampling; acceptance is ~1 in the interior and ~1/2 at a face.
double truncated_perturb(double base, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double v = base + noise(rng);
    if (v >= 0.0 && v <= 1.0) return v;
  }
  return std::clamp(base, 0.0, 1.0);
}

}  // namespace

std::string_view to_string(CandidateOrigin origin) {
  switch (origin) {
    case CandidateOrigin::kGlobalSobol:
      return "global_sobol";
    case CandidateOrigin::kLocalAllDims:
      return "local_all_dims";
    case CandidateOrigin::kLocalSubset:
      return "local_subset";
  }
  return "unknown";
}

std::size_t CandidateBatch::count(CandidateOrigin o) const {
  return static_cast<std::size_t>(std::count(origin.begin(), origin.end(), o));
}

std::vector<Eigen::Index> top_indices(const Vector& values, double fraction) {
  const Eigen::Index n = values.size();
  if (n == 0) return {};
  const auto k = std::clamp<Eigen::Index>(
      static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(n) - 1e-12)), 1, n);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

CandidateBatch raasp_batch(const Matrix& top_points, Eigen::Index m, Eigen::Index d,
                           std::uint64_t seed, const RaaspOptions& options) {
  if (top_points.rows() < 1) throw ConfigError("RAASP needs at least one incumbent to perturb");
  if (top_points.cols() != d) throw ContractError("RAASP: top points have wrong dimension");
  if (m < 1) throw ContractError("RAASP: m must be positive");

  auto rng = make_rng(seed, 0xAA5B);
  std::uniform_int_distribution<Eigen::Index> pick(0, top_points.rows() - 1);
  const double prob = std::min(1.0, options.subset_dims / static_cast<double>(d));
  std::bernoulli_distribution choose(prob);
  std::uniform_int_distribution<Eigen::Index> any_dim(0, d - 1);

  CandidateBatch out;
  out.points.resize(2 * m, d);
  out.origin.reserve(static_cast<std::size_t>(2 * m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto base = top_points.row(pick(rng));
    for (Eigen::Index j = 0; j < d; ++j) out.points(i, j) = truncated_perturb(base(j), options.sigma, rng);
    out.origin.push_back(CandidateOrigin::kLocalAllDims);
  }
  std::vector<char> mask(static_cast<std::size_t>(d));
  for (Eigen::Index i = m; i < 2 * m; ++i) {
    const auto base = top_points.row(pick(rng));
    bool any = false;
    for (Eigen::Index j = 0; j < d; ++j) {
      mask[j] = prob >= 1.0 ? 1 : static_cast<char>(choose(rng));
      any = any || mask[j];
    }
    // An untouched row would duplicate its base point.
    if (!any) mask[any_dim(rng)] = 1;
    for (Eigen::Index j = 0; j < d; ++j) {
      out.points(i, j) = mask[j] ? truncated_perturb(base(j), options.sigma, rng) : base(j);
    }
    out.origin.push_back(CandidateOrigin::kLocalSubset);
  }
  return out;
}

CandidateBatch assemble_candidates(const Matrix& top_points, Eigen::Index m, Eigen::Index d,
                                   bool raasp_enabled, std::uint64_t seed,
                                   const RaaspOptions& options) {
  if (m < 1) throw ContractError("assemble_candidates: m must be positive");
  CandidateBatch out;
  const Matrix global = sobol(2 * m, d, seed);
  if (!raasp_enabled) {
    out.points = global;
    out.origin.assign(static_cast<std::size_t>(2 * m), CandidateOrigin::kGlobalSobol);
    return out;
  }
  CandidateBatch local = raasp_batch(top_points, m, d, seed, options);
  out.points.resize(4 * m, d);
  out.points.topRows(2 * m) = global;
  out.points.bottomRows(2 * m) = local.points;
  out.origin.assign(static_cast<std::size_t>(2 * m), CandidateOrigin::kGlobalSobol);
  out.origin.insert(out.origin.end(), local.origin.begin(), local.origin.end());
  return out;
}

}  // namespace hdbo
