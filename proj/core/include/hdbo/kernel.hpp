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

namespace hdbo {

/// Squared ARD distance r = sum_i (x_i - x2_i)^2 / l_i^2.
double scaled_sqdist(const Vector& x, const Vector& x2, const Vector& lengthscales);

/// Stationary kernel as a function of r.
double kernel_from_r(KernelKind kind, double r, double signal_variance);

/// dk/dr, finite at r = 0 for both kernels.
double kernel_dr(KernelKind kind, double r, double signal_variance);

/// 5/2 ARD-Matern: s^2 (1 + sqrt(5r) + 5r/3) exp(-sqrt(5r)).
double kernel_matern52(const Vector& x, const Vector& x2, const GpHyperparams& params);

/// Squared exponential: s^2 exp(-r/2).
double kernel_rbf(const Vector& x, const Vector& x2, const GpHyperparams& params);

double kernel(KernelKind kind, const Vector& x, const Vector& x2, const GpHyperparams& params);

/// Pairwise r between the rows of A (n x d) and the rows of B (m x d).
Matrix scaled_sqdist_matrix(const Matrix& A, const Matrix& B, const Vector& lengthscales);

/// K(A, B) without the noise term.
Matrix cross_kernel(const Matrix& A, const Matrix& B, const GpHyperparams& params,
                    KernelKind kind);

/// K(X, X) + noise * I.
Matrix gram(const Matrix& X, const GpHyperparams& params, KernelKind kind);

}  // namespace hdbo
