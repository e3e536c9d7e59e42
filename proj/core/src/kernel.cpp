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

#include "hdbo/kernel.hpp"

#include "hdbo/error.hpp"

#include <cmath>
#include <string>

namespace hdbo {

namespace {

void check_dims(Eigen::Index a, Eigen::Index b, Eigen::Index ls) {
  if (a != ls || b != ls) {
    throw ContractError("kernel: point dimensions (" + std::to_string(a) + ", " +
                        std::to_string(b) + ") do not match " + std::to_string(ls) +
                        " length scales");
  }
}

}  // namespace

double scaled_sqdist(const Vector& x, const Vector& x2, const Vector& lengthscales) {
  check_dims(x.size(), x2.size(), lengthscales.size());
  return ((x - x2).array() / lengthscales.array()).square().sum();
}

double kernel_from_r(KernelKind kind, double r, double signal_variance) {
  switch (kind) {
    case KernelKind::kMatern52: {
      const double s = std::sqrt(5.0 * r);
      return signal_variance * (1.0 + s + 5.0 * r / 3.0) * std::exp(-s);
    }
    case KernelKind::kRbf:
      return signal_variance * std::exp(-0.5 * r);
  }
  return 0.0;
}

double kernel_dr(KernelKind kind, double r, double signal_variance) {
  switch (kind) {
    case KernelKind::kMatern52: {
      const double s = std::sqrt(5.0 * r);
      return -signal_variance * (5.0 / 6.0) * (1.0 + s) * std::exp(-s);
    }
    case KernelKind::kRbf:
      return -0.5 * signal_variance * std::exp(-0.5 * r);
  }
  return 0.0;
}

double kernel_matern52(const Vector& x, const Vector& x2, const GpHyperparams& params) {
  return kernel(KernelKind::kMatern52, x, x2, params);
}

double kernel_rbf(const Vector& x, const Vector& x2, const GpHyperparams& params) {
  return kernel(KernelKind::kRbf, x, x2, params);
}

double kernel(KernelKind kind, const Vector& x, const Vector& x2, const GpHyperparams& params) {
  return kernel_from_r(kind, scaled_sqdist(x, x2, params.lengthscales), params.signal_variance);
}

Matrix scaled_sqdist_matrix(const Matrix& A, const Matrix& B, const Vector& lengthscales) {
  check_dims(A.cols(), B.cols(), lengthscales.size());
  // Column-major transposes keep each point contiguous.
  const Vector inv = lengthscales.cwiseInverse();
  const Matrix At = inv.asDiagonal() * A.transpose();
  const Matrix Bt = inv.asDiagonal() * B.transpose();
  Matrix r(A.rows(), B.rows());
  for (Eigen::Index j = 0; j < Bt.cols(); ++j) {
    for (Eigen::Index i = 0; i < At.cols(); ++i) {
      r(i, j) = (At.col(i) - Bt.col(j)).squaredNorm();
    }
  }
  return r;
}

Matrix cross_kernel(const Matrix& A, const Matrix& B, const GpHyperparams& params,
                    KernelKind kind) {
  Matrix K = scaled_sqdist_matrix(A, B, params.lengthscales);
  K = K.unaryExpr([&](double r) { return kernel_from_r(kind, r, params.signal_variance); });
  return K;
}

Matrix gram(const Matrix& X, const GpHyperparams& params, KernelKind kind) {
  Matrix K = cross_kernel(X, X, params, kind);
  // Exact symmetry and an exact diagonal regardless of rounding.
  for (Eigen::Index i = 0; i < K.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) K(j, i) = K(i, j);
    K(i, i) = params.signal_variance + params.noise_variance;
  }
  return K;
}

}  // namespace hdbo
