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

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <string_view>

namespace hdbo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Single-precision machine epsilon. Gradients below this are treated as
/// vanished.
inline constexpr double kSinglePrecisionEps = 1.1920928955078125e-07;

enum class KernelKind { kMatern52, kRbf };

std::string_view to_string(KernelKind kind);
KernelKind kernel_kind_from_string(std::string_view name);

/// Kernel hyperparameters in natural units.
///
/// The optimizer works on the raw representation: log length scales
/// followed by log signal variance and log noise variance.
struct GpHyperparams {
  Vector lengthscales;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;

  GpHyperparams() = default;
  GpHyperparams(Vector ls, double signal, double noise);

  static GpHyperparams isotropic(Eigen::Index d, double lengthscale,
                                 double signal = 1.0, double noise = 1e-4);

  Eigen::Index dim() const { return lengthscales.size(); }

  /// Raw vector of size d + 2.
  Vector to_raw() const;
  static GpHyperparams from_raw(const Vector& raw);

  /// Throws ContractError if any invariant is broken.
  void validate() const;
};

/// Design matrix in the unit cube with one target per row.
struct Dataset {
  Matrix X;
  Vector y;

  Dataset() = default;
  Dataset(Matrix x, Vector targets);

  Eigen::Index size() const { return X.rows(); }
  Eigen::Index dim() const { return X.cols(); }

  void validate() const;
};

}  // namespace hdbo
