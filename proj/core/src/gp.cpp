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

#include "hdbo/gp.hpp"

#include "hdbo/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hdbo {

GramFactor factorize(const Matrix& K, double signal_variance) {
  const Eigen::Index n = K.rows();
  GramFactor out;
  for (double rel = kJitterFloor; rel <= kJitterCeiling * (1.0 + 1e-9); rel *= 10.0) {
    const double jitter = rel * signal_variance;
    Matrix Kj = K;
    Kj.diagonal().array() += jitter;
    out.llt.compute(Kj);
    if (out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().minCoeff() > 0.0) {
      out.jitter = jitter;
      return out;
    }
  }
  throw SurrogateSingularError("Cholesky failed for a " + std::to_string(n) + "x" +
                               std::to_string(n) + " Gram matrix at the maximum jitter");
}

namespace {

void check_train(const Dataset& train, const GpHyperparams& params) {
  train.validate();
  params.validate();
  if (train.size() < 1) throw ContractError("GP needs at least one training point");
  if (train.dim() != params.dim()) {
    throw ContractError("training data has dimension " + std::to_string(train.dim()) +
                        " but hyperparameters have " + std::to_string(params.dim()));
  }
}

MllBreakdown breakdown_from(const GramFactor& f, const Vector& y, const Vector& alpha) {
  MllBreakdown b;
  const auto n = static_cast<double>(y.size());
  b.data_fit = -0.5 * y.dot(alpha);
  b.complexity_penalty = -f.llt.matrixLLT().diagonal().array().log().sum();
  b.constant = -0.5 * n * std::log(2.0 * std::numbers::pi);
  b.total = b.data_fit + b.complexity_penalty + b.constant;
  return b;
}

}  // namespace

Posterior posterior(const Dataset& train, const GpHyperparams& params, const Matrix& Xq,
                    KernelKind kind) {
  check_train(train, params);
  if (Xq.cols() != train.dim()) throw ContractError("query dimension mismatch");
  const GramFactor f = factorize(gram(train.X, params, kind), params.signal_variance);
  const Matrix Kxq = cross_kernel(train.X, Xq, params, kind);
  const Vector alpha = f.llt.solve(train.y);
  Posterior out;
  out.mean = Kxq.transpose() * alpha;
  const Matrix V = f.llt.matrixL().solve(Kxq);
  out.covariance = cross_kernel(Xq, Xq, params, kind) - V.transpose() * V;
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  for (Eigen::Index i = 0; i < out.covariance.rows(); ++i) {
    out.covariance(i, i) = std::max(out.covariance(i, i), 0.0);
  }
  return out;
}

MllBreakdown mll(const Dataset& train, const GpHyperparams& params, KernelKind kind) {
  check_train(train, params);
  const GramFactor f = factorize(gram(train.X, params, kind), params.signal_variance);
  return breakdown_from(f, train.y, f.llt.solve(train.y));
}

MllGradient mll_grad(const Dataset& train, const GpHyperparams& params, const Hyperprior& prior,
                     KernelKind kind) {
  check_train(train, params);
  const Eigen::Index n = train.size();
  const Eigen::Index d = train.dim();
  const Matrix r = scaled_sqdist_matrix(train.X, train.X, params.lengthscales);

  Matrix Kf(n, n);
  Matrix dKdr(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double rij = i == j ? 0.0 : r(i, j);
      Kf(i, j) = kernel_from_r(kind, rij, params.signal_variance);
      dKdr(i, j) = kernel_dr(kind, rij, params.signal_variance);
    }
  }
  Matrix K = Kf;
  K.diagonal().array() += params.noise_variance;

  const GramFactor f = factorize(K, params.signal_variance);
  const Vector alpha = f.llt.solve(train.y);
  const Matrix k_inv = f.llt.solve(Matrix::Identity(n, n));
  const Matrix W = alpha * alpha.transpose() - k_inv;

  MllGradient out;
  out.breakdown = breakdown_from(f, train.y, alpha);
  out.mll_raw_gradient = Vector::Zero(d + 2);

  // d/d log(s^2): dK = Kf
  out.mll_raw_gradient(d) = 0.5 * W.cwiseProduct(Kf).sum();
  // d/d log(noise): dK = noise * I
  out.mll_raw_gradient(d + 1) = 0.5 * params.noise_variance * W.trace();

  // d/d log(l_i): dK_ab = k'(r_ab) * (-2 (x_ai - x_bi)^2 / l_i^2). Pairs are
  // summed directly (no norm expansion) so tiny gradients keep their
  // relative precision.
  const Matrix Xt = train.X.transpose();
  Vector acc = Vector::Zero(d);
  for (Eigen::Index b = 0; b < n; ++b) {
    for (Eigen::Index a = b + 1; a < n; ++a) {
      const double m = W(a, b) * dKdr(a, b);
      if (m != 0.0) acc += m * (Xt.col(a) - Xt.col(b)).array().square().matrix();
    }
  }
  out.mll_raw_gradient.head(d) =
      -2.0 * acc.array() / params.lengthscales.array().square();

  out.raw_gradient = out.mll_raw_gradient;
  if (has_prior(prior)) {
    const LogPrior lp = log_prior(prior, params);
    out.log_prior = lp.value;
    if (lp.in_support) out.raw_gradient += lp.raw_gradient;
  }
  out.objective = out.breakdown.total + out.log_prior;
  return out;
}

Vector natural_lengthscale_gradient(const Vector& raw_gradient, const GpHyperparams& params) {
  return raw_gradient.head(params.dim()).array() / params.lengthscales.array();
}

GpModel::GpModel(Dataset train, GpHyperparams params, KernelKind kind)
    : train_(std::move(train)), params_(std::move(params)), kind_(kind) {
  check_train(train_, params_);
  const GramFactor f = factorize(gram(train_.X, params_, kind_), params_.signal_variance);
  alpha_ = f.llt.solve(train_.y);
  k_inv_ = f.llt.solve(Matrix::Identity(train_.size(), train_.size()));
  scaled_t_ = params_.lengthscales.cwiseInverse().asDiagonal() * train_.X.transpose();
}

GpModel::Prediction GpModel::predict(const Vector& x, bool with_gradient) const {
  const Eigen::Index n = train_.size();
  if (x.size() != dim()) throw ContractError("prediction point has wrong dimension");
  const Vector xs = x.cwiseQuotient(params_.lengthscales);
  Vector k(n);
  Vector dk(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const double r = (xs - scaled_t_.col(a)).squaredNorm();
    k(a) = kernel_from_r(kind_, r, params_.signal_variance);
    if (with_gradient) dk(a) = kernel_dr(kind_, r, params_.signal_variance);
  }
  const Vector v = k_inv_ * k;
  Prediction p;
  p.mean = k.dot(alpha_);
  p.variance = std::max(params_.signal_variance - k.dot(v), 0.0);
  if (with_gradient) {
    // dk_a/dx = k'(r_a) * 2 (xs - xs_a) / l
    const Vector c = dk.cwiseProduct(alpha_);
    const Vector e = dk.cwiseProduct(v);
    const Vector two_over_l = 2.0 * params_.lengthscales.cwiseInverse();
    p.mean_grad = two_over_l.cwiseProduct(xs * c.sum() - scaled_t_ * c);
    p.variance_grad = -2.0 * two_over_l.cwiseProduct(xs * e.sum() - scaled_t_ * e);
  }
  return p;
}

}  // namespace hdbo
