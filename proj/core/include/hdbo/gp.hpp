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

#include "hdbo/kernel.hpp"
#include "hdbo/prior.hpp"
#include "hdbo/types.hpp"

#include <Eigen/Cholesky>

namespace hdbo {

/// Jitter starts at kJitterFloor * signal_variance and grows by 10x per
/// failed factorization, up to kJitterCeiling * signal_variance.
inline constexpr double kJitterFloor = 1e-8;
inline constexpr double kJitterCeiling = 1e-4;

/// Cholesky factor of K(X, X) + noise * I + jitter * I.
struct GramFactor {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;
};

/// Factorizes a symmetric matrix with the escalating jitter policy.
/// Throws SurrogateSingularError when the ceiling is exhausted.
GramFactor factorize(const Matrix& K, double signal_variance);

struct Posterior {
  Vector mean;
  Matrix covariance;
};

/// Latent-function posterior at the rows of Xq.
Posterior posterior(const Dataset& train, const GpHyperparams& params, const Matrix& Xq,
                    KernelKind kind = KernelKind::kMatern52);

/// The three additive terms of the log marginal likelihood.
struct MllBreakdown {
  double data_fit = 0.0;            // -1/2 y^T K^-1 y
  double complexity_penalty = 0.0;  // -1/2 log|K|
  double constant = 0.0;            // -n/2 log(2 pi)
  double total = 0.0;
};

MllBreakdown mll(const Dataset& train, const GpHyperparams& params,
                 KernelKind kind = KernelKind::kMatern52);

struct MllGradient {
  MllBreakdown breakdown;
  double log_prior = 0.0;
  /// breakdown.total + log_prior
  double objective = 0.0;
  /// d objective / d raw, size d + 2 (log length scales, log signal, log noise).
  Vector raw_gradient;
  /// Evidence-only part of raw_gradient.
  Vector mll_raw_gradient;
};

/// Gradient of the MLL (plus log-prior when one is given) over the raw
/// hyperparameters.
MllGradient mll_grad(const Dataset& train, const GpHyperparams& params,
                     const Hyperprior& prior = NoPrior{},
                     KernelKind kind = KernelKind::kMatern52);

/// Natural-space length-scale gradient from a raw gradient: dF/dl = dF/du / l.
Vector natural_lengthscale_gradient(const Vector& raw_gradient, const GpHyperparams& params);

/// A conditioned GP ready for repeated point predictions, with input
/// gradients for the acquisition optimizer.
class GpModel {
 public:
  GpModel(Dataset train, GpHyperparams params, KernelKind kind = KernelKind::kMatern52);

  struct Prediction {
    double mean = 0.0;
    double variance = 0.0;
    Vector mean_grad;      // filled when requested
    Vector variance_grad;  // filled when requested
  };

  Prediction predict(const Vector& x, bool with_gradient = false) const;

  const Dataset& train() const { return train_; }
  const GpHyperparams& params() const { return params_; }
  KernelKind kind() const { return kind_; }
  Eigen::Index dim() const { return train_.dim(); }

 private:
  Dataset train_;
  GpHyperparams params_;
  KernelKind kind_;
  Matrix scaled_t_;  // d x n, columns are training points divided by l
  Vector alpha_;
  Matrix k_inv_;
};

}  // namespace hdbo
