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

#include "hdbo/sobol.hpp"

#include "hdbo/error.hpp"
#include "hdbo/rng.hpp"

#include <boost/random/detail/sobol_table.hpp>

#include <array>
#include <bit>
#include <string>
#include <vector>

namespace hdbo {

namespace {

using Table = boost::random::detail::qrng_tables::sobol;
constexpr int kBits = 32;
using Directions = std::array<std::uint32_t, kBits>;

// Bratley-Fox recurrence on the Joe-Kuo primitive polynomials and initial
// direction numbers. Entry k is the direction for digit k (MSB first).
Directions directions(Eigen::Index dim) {
  Directions v{};
  if (dim == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = std::uint32_t{1} << (kBits - 1 - k);
    return v;
  }
  std::array<std::uint32_t, kBits> m{};
  const unsigned poly = Table::polynomial(static_cast<std::size_t>(dim - 1));
  const int degree = std::bit_width(poly) - 1;
  for (int k = 0; k < degree && k < kBits; ++k) {
    m[k] = Table::minit(static_cast<std::size_t>(dim - 1), static_cast<std::size_t>(k));
  }
  for (int j = degree; j < kBits; ++j) {
    unsigned p = poly;
    m[j] = m[j - degree];
    for (int k = 0; k < degree; ++k, p >>= 1) {
      const int rem = degree - k;
      m[j] ^= ((p & 1u) * m[j - rem]) << rem;
    }
  }
  for (int k = 0; k < kBits; ++k) v[k] = m[k] << (kBits - 1 - k);
  return v;
}

// Lower-triangular (in digit order) binary matrix with unit diagonal applied
// to every direction number of one coordinate.
void linear_scramble(Directions& v, std::mt19937_64& rng) {
  std::array<std::uint32_t, kBits> rows{};
  for (int i = 0; i < kBits; ++i) {
    const std::uint32_t diag = std::uint32_t{1} << (kBits - 1 - i);
    // digits 0..i-1 occupy the i most significant bits
    const std::uint32_t above = i == 0 ? 0u : ~((std::uint32_t{1} << (kBits - i)) - 1u);
    rows[i] = (static_cast<std::uint32_t>(rng()) & above) | diag;
  }
  for (auto& dir : v) {
    std::uint32_t out = 0;
    for (int i = 0; i < kBits; ++i) {
      if (std::popcount(rows[i] & dir) & 1) out |= std::uint32_t{1} << (kBits - 1 - i);
    }
    dir = out;
  }
}

}  // namespace

Eigen::Index sobol_max_dimension() { return static_cast<Eigen::Index>(Table::max_dimension); }

Matrix sobol(Eigen::Index m, Eigen::Index d, std::uint64_t seed, bool scramble) {
  if (m < 1) throw ContractError("sobol: need at least one point");
  if (d < 1 || d > sobol_max_dimension()) {
    throw ContractError("sobol: dimension " + std::to_string(d) + " outside [1, " +
                        std::to_string(sobol_max_dimension()) + "]");
  }
  auto rng = make_rng(seed, 0x50b01);
  std::vector<Directions> dirs(static_cast<std::size_t>(d));
  std::vector<std::uint32_t> shift(static_cast<std::size_t>(d), 0u);
  for (Eigen::Index j = 0; j < d; ++j) {
    dirs[j] = directions(j);
    if (scramble) {
      linear_scramble(dirs[j], rng);
      shift[j] = static_cast<std::uint32_t>(rng());
    }
  }

  constexpr double kScale = 1.0 / 4294967296.0;
  Matrix out(m, d);
  std::vector<std::uint32_t> state(static_cast<std::size_t>(d), 0u);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (i > 0) {
      const int c = std::countr_zero(static_cast<std::uint64_t>(i));
      if (c >= kBits) throw ContractError("sobol: more than 2^32 points requested");
      for (Eigen::Index j = 0; j < d; ++j) state[j] ^= dirs[j][c];
    }
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = (state[j] ^ shift[j]) * kScale;
  }
  return out;
}

}  // namespace hdbo
