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

#include <cstdint>
#include <string_view>
#include <vector>

namespace hdbo {

enum class CandidateOrigin { kGlobalSobol, kLocalAllDims, kLocalSubset };

std::string_view to_string(CandidateOrigin origin);

inline bool is_raasp(CandidateOrigin origin) { return origin != CandidateOrigin::kGlobalSobol; }

struct CandidateBatch {
  Matrix points;
  std::vector<CandidateOrigin> origin;

  Eigen::Index size() const { return points.rows(); }
  std::size_t count(CandidateOrigin o) const;
};

struct RaaspOptions {
  double sigma = 1e-3;
  /// Expected number of perturbed coordinates in the subset half.
  double subset_dims = 20.0;
};

/// Indices of the ceil(fraction * n) largest values (at least one); ties
/// keep the earlier index.
std::vector<Eigen::Index> top_indices(const Vector& values, double fraction = 0.05);

/// 2m local candidates around uniformly chosen rows of `top_points`: the
/// first m perturb every coordinate, the last m perturb each coordinate
/// with probability min(1, subset_dims / d). Perturbations are truncated
/// normals that stay inside the unit cube.
CandidateBatch raasp_batch(const Matrix& top_points, Eigen::Index m, Eigen::Index d,
                           std::uint64_t seed, const RaaspOptions& options = {});

/// 2m scrambled Sobol points, followed by the 2m RAASP points when enabled.
CandidateBatch assemble_candidates(const Matrix& top_points, Eigen::Index m, Eigen::Index d,
                                   bool raasp_enabled, std::uint64_t seed,
                                   const RaaspOptions& options = {});

}  // namespace hdbo
