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

namespace hdbo {

/// Largest dimension backed by the Joe-Kuo direction-number table.
Eigen::Index sobol_max_dimension();

/// First m points of a d-dimensional Sobol sequence in [0, 1)^d.
///
/// With `scramble` set, each coordinate gets a random lower-triangular
/// linear matrix scramble and a random digital shift drawn from `seed`;
/// both preserve the net structure of every 2^k prefix.
Matrix sobol(Eigen::Index m, Eigen::Index d, std::uint64_t seed, bool scramble = true);

}  // namespace hdbo
