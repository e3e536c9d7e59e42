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

#include "hdbo/types.hpp"

#include "hdbo/error.hpp"

#include <cmath>
#include <string>

namespace hdbo {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kMatern52:
      return "matern52";
    case KernelKind::kRbf:
      return "rbf";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(std::string_view name) {
  if (name == "matern52") return KernelKind::kMatern52;
  if (name == "rbf") return KernelKind::kRbf;
  throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

GpHyperparams::GpHyperparams(Vector ls, double signal, double noise)
    : lengthscales(std::move(ls)), signal_variance(signal), noise_variance(noise) {}

GpHyperparams GpHyperparams::isotropic(Eigen::Index d, double lengthscale,
                                       double signal, double noise) {
  return GpHyperparams(Vector::Constant(d, lengthscale), signal, noise);
}

Vector GpHyperparams::to_raw() const {
  const Eigen::Index d = dim();
  Vector raw(d + 2);
  raw.head(d) = lengthscales.array().log();
  raw(d) = std::log(signal_variance);
  raw(d + 1) = std::log(noise_variance);
  return raw;
}

GpHyperparams GpHyperparams::from_raw(const Vector& raw) {
  if (raw.size() < 3) throw ContractError("raw hyperparameter vector needs d + 2 >= 3 entries");
  const Eigen::Index d = raw.size() - 2;
  return GpHyperparams(raw.head(d).array().exp(), std::exp(raw(d)), std::exp(raw(d + 1)));
}

void GpHyperparams::validate() const {
  if (lengthscales.size() == 0) throw ContractError("GpHyperparams: empty length-scale vector");
  for (Eigen::Index i = 0; i < lengthscales.size(); ++i) {
    const double l = lengthscales(i);
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw ContractError("GpHyperparams: length scale " + std::to_string(i) +
                          " must be positive and finite");
    }
  }
  if (!(signal_variance > 0.0) || !std::isfinite(signal_variance)) {
    throw ContractError("GpHyperparams: signal variance must be positive");
  }
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw ContractError("GpHyperparams: noise variance must be non-negative");
  }
}

Dataset::Dataset(Matrix x, Vector targets) : X(std::move(x)), y(std::move(targets)) {}

void Dataset::validate() const {
  if (X.rows() != y.size()) {
    throw ContractError("Dataset: " + std::to_string(X.rows()) + " rows but " +
                        std::to_string(y.size()) + " targets");
  }
  if (X.size() > 0 && ((X.array() < 0.0).any() || (X.array() > 1.0).any())) {
    throw ContractError("Dataset: design points must lie in the unit hypercube");
  }
}

}  // namespace hdbo
