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

#include "hdbo/prior.hpp"

#include "hdbo/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hdbo {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double DimScaledLogNormalPrior::location() const {
  return mu0 + 0.5 * std::log(static_cast<double>(dim));
}

LogPrior log_prior(const Hyperprior& prior, const GpHyperparams& params) {
  const Eigen::Index d = params.dim();
  LogPrior out;
  out.raw_gradient = Vector::Zero(d + 2);
  const auto& ls = params.lengthscales;

  std::visit(
      overloaded{
          [&](const NoPrior&) {},
          [&](const GammaPrior& g) {
            const double norm = g.shape * std::log(g.rate) - std::lgamma(g.shape);
            for (Eigen::Index i = 0; i < d; ++i) {
              out.value += norm + (g.shape - 1.0) * std::log(ls(i)) - g.rate * ls(i);
              // d/d(log l) of (a - 1) log l - b l
              out.raw_gradient(i) = (g.shape - 1.0) - g.rate * ls(i);
            }
          },
          [&](const DimScaledLogNormalPrior& p) {
            const double mu = p.location();
            const double var = p.sigma0 * p.sigma0;
            const double norm = -std::log(p.sigma0) - 0.5 * std::log(2.0 * std::numbers::pi);
            for (Eigen::Index i = 0; i < d; ++i) {
              const double u = std::log(ls(i));
              out.value += norm - u - 0.5 * (u - mu) * (u - mu) / var;
              out.raw_gradient(i) = -1.0 - (u - mu) / var;
            }
          },
          [&](const UniformBoxPrior& p) {
            const double logw = std::log(p.hi - p.lo);
            for (Eigen::Index i = 0; i < d; ++i) {
              if (ls(i) < p.lo || ls(i) > p.hi) {
                out.in_support = false;
                out.value = -std::numeric_limits<double>::infinity();
                out.raw_gradient.setZero();
                return;
              }
              out.value -= logw;
            }
          },
      },
      prior);
  return out;
}

bool has_prior(const Hyperprior& prior) { return !std::holds_alternative<NoPrior>(prior); }

double prior_mode(const Hyperprior& prior) {
  return std::visit(
      overloaded{
          [](const NoPrior&) -> double {
            throw ConfigError("prior mode requested but no hyperprior is configured");
          },
          [](const GammaPrior& g) {
            if (g.shape < 1.0) throw ConfigError("Gamma prior with shape < 1 has no interior mode");
            return (g.shape - 1.0) / g.rate;
          },
          [](const DimScaledLogNormalPrior& p) {
            return std::exp(p.location() - p.sigma0 * p.sigma0);
          },
          [](const UniformBoxPrior& p) { return 0.5 * (p.lo + p.hi); },
      },
      prior);
}

double sample_prior(const Hyperprior& prior, std::mt19937_64& rng) {
  return std::visit(
      overloaded{
          [](const NoPrior&) -> double {
            throw ConfigError("prior sample requested but no hyperprior is configured");
          },
          [&](const GammaPrior& g) {
            std::gamma_distribution<double> dist(g.shape, 1.0 / g.rate);
            return dist(rng);
          },
          [&](const DimScaledLogNormalPrior& p) {
            std::lognormal_distribution<double> dist(p.location(), p.sigma0);
            return dist(rng);
          },
          [&](const UniformBoxPrior& p) {
            std::uniform_real_distribution<double> dist(p.lo, p.hi);
            return dist(rng);
          },
      },
      prior);
}

std::string describe(const Hyperprior& prior) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const NoPrior&) { os << "none"; },
                 [&](const GammaPrior& g) { os << "gamma(" << g.shape << ", " << g.rate << ")"; },
                 [&](const DimScaledLogNormalPrior& p) {
                   os << "dim_scaled_lognormal(mu0=" << p.mu0 << ", sigma0=" << p.sigma0
                      << ", d=" << p.dim << ")";
                 },
                 [&](const UniformBoxPrior& p) { os << "uniform(" << p.lo << ", " << p.hi << ")"; },
             },
             prior);
  return os.str();
}

}  // namespace hdbo
