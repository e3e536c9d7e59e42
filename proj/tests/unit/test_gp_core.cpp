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

// Kernels, posterior, marginal likelihood and hyperpriors. Reference values
// come from tests/oracles/compute_oracles.py (mpmath, 50 digits).
#include <doctest.h>

#include "hdbo/error.hpp"
#include "hdbo/gp.hpp"
#include "hdbo/kernel.hpp"
#include "hdbo/prior.hpp"
#include "hdbo/rng.hpp"

#include <cmath>
#include <random>

using namespace hdbo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// The 2x2 instance shared by the posterior and MLL oracles.
Dataset two_point_data() {
  Matrix X(2, 1);
  X << 0.2, 0.7;
  return Dataset(X, vec({1.0, -0.5}));
}

GpHyperparams two_point_params() { return GpHyperparams(vec({0.5}), 1.3, 0.01); }

Dataset sample_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = u(rng);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = std::sin(3.0 * X.row(i).sum()) + 0.1 * g(rng);
  return Dataset(X, y);
}

}  // namespace

TEST_CASE("kernels match closed forms at r = 1") {
  CHECK(kernel_from_r(KernelKind::kMatern52, 1.0, 1.0) ==
        doctest::Approx(0.52399410883182031059).epsilon(1e-15));
  CHECK(kernel_from_r(KernelKind::kRbf, 1.0, 1.0) ==
        doctest::Approx(0.6065306597126334236).epsilon(1e-15));
  CHECK(kernel_from_r(KernelKind::kMatern52, 0.0, 2.0) == 2.0);
  CHECK(kernel_from_r(KernelKind::kRbf, 0.0, 2.0) == 2.0);
}

TEST_CASE("ARD kernels on a three-dimensional pair") {
  const Vector x = vec({0.1, 0.5, 0.9});
  const Vector x2 = vec({0.3, 0.2, 0.4});
  const GpHyperparams p(vec({0.5, 1.5, 0.8}), 2.5, 1e-4);
  CHECK(kernel_matern52(x, x2, p) == doctest::Approx(1.6601785855260386437).epsilon(1e-14));
  CHECK(kernel_rbf(x, x2, p) == doctest::Approx(1.8607473942378027301).epsilon(1e-14));
  CHECK(kernel(KernelKind::kMatern52, x, x2, p) == kernel_matern52(x, x2, p));
  CHECK_THROWS_AS(kernel_rbf(x, vec({0.1, 0.2}), p), ContractError);
}

TEST_CASE("kernel derivative in r matches finite differences") {
  for (auto kind : {KernelKind::kMatern52, KernelKind::kRbf}) {
    for (double r : {0.05, 0.7, 3.0}) {
      const double h = 1e-6;
      const double fd = (kernel_from_r(kind, r + h, 1.7) - kernel_from_r(kind, r - h, 1.7)) / (2 * h);
      CHECK(kernel_dr(kind, r, 1.7) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK(std::isfinite(kernel_dr(kind, 0.0, 1.0)));
  }
}

TEST_CASE("Gram matrix is symmetric with noise on the diagonal") {
  const Dataset data = sample_data(6, 3, 1);
  const GpHyperparams p(vec({0.4, 0.9, 1.3}), 1.5, 0.02);
  const Matrix K = gram(data.X, p, KernelKind::kMatern52);
  CHECK((K - K.transpose()).norm() == 0.0);
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(K(i, i) == doctest::Approx(1.52));
  const Matrix C = cross_kernel(data.X, data.X, p, KernelKind::kMatern52);
  CHECK((K - C).diagonal().maxCoeff() == doctest::Approx(0.02));
}

TEST_CASE("posterior of the two-point instance") {
  Matrix Q(2, 1);
  Q << 0.4, 0.9;
  const Posterior post = posterior(two_point_data(), two_point_params(), Q);
  // A relative jitter of 1e-8 is always added to the diagonal, so agreement
  // is to about eight digits.
  CHECK(post.mean(0) == doctest::Approx(0.44734468179480301665).epsilon(1e-7));
  CHECK(post.mean(1) == doctest::Approx(-0.67183479759299910431).epsilon(1e-7));
  CHECK(post.covariance(0, 0) == doctest::Approx(0.12346440391716364445).epsilon(1e-6));
  CHECK(post.covariance(0, 1) == doctest::Approx(-0.078846850971489274969).epsilon(1e-6));
  CHECK(post.covariance(1, 0) == doctest::Approx(-0.078846850971489274969).epsilon(1e-6));
  CHECK(post.covariance(1, 1) == doctest::Approx(0.26009308499050475027).epsilon(1e-6));
}

TEST_CASE("GpModel point predictions agree with the batch posterior") {
  const Dataset data = sample_data(12, 4, 2);
  const GpHyperparams p(vec({0.3, 0.6, 0.9, 1.2}), 1.1, 1e-3);
  const GpModel model(data, p);
  const Matrix Q = sample_data(3, 4, 3).X;
  const Posterior post = posterior(data, p, Q);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto pred = model.predict(Q.row(i).transpose());
    CHECK(pred.mean == doctest::Approx(post.mean(i)).epsilon(1e-9));
    CHECK(pred.variance == doctest::Approx(post.covariance(i, i)).epsilon(1e-7));
  }
}

TEST_CASE("GpModel input gradients match finite differences") {
  const Dataset data = sample_data(10, 3, 4);
  const GpHyperparams p(vec({0.5, 0.8, 0.4}), 1.0, 1e-4);
  for (auto kind : {KernelKind::kMatern52, KernelKind::kRbf}) {
    const GpModel model(data, p, kind);
    const Vector x = vec({0.31, 0.62, 0.47});
    const auto pred = model.predict(x, true);
    for (Eigen::Index j = 0; j < 3; ++j) {
      const double h = 1e-6;
      Vector xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const auto a = model.predict(xp), b = model.predict(xm);
      CHECK(pred.mean_grad(j) == doctest::Approx((a.mean - b.mean) / (2 * h)).epsilon(1e-5));
      CHECK(pred.variance_grad(j) ==
            doctest::Approx((a.variance - b.variance) / (2 * h)).epsilon(1e-4).scale(1e-6));
    }
  }
}

TEST_CASE("MLL terms of the two-point instance") {
  const MllBreakdown b = mll(two_point_data(), two_point_params());
  CHECK(b.data_fit == doctest::Approx(-0.92593840185731569869).epsilon(1e-7));
  CHECK(b.complexity_penalty == doctest::Approx(-0.11240188375899882452).epsilon(1e-6));
  CHECK(b.constant == doctest::Approx(-1.8378770664093454836).epsilon(1e-15));
  CHECK(b.total == doctest::Approx(-2.8762173520256600068).epsilon(1e-7));
}

TEST_CASE("MLL gradient matches central differences in every raw coordinate") {
  const Dataset data = sample_data(15, 4, 5);
  const GpHyperparams p(vec({0.3, 0.7, 1.4, 2.2}), 0.8, 0.05);
  const Hyperprior priors[] = {NoPrior{}, GammaPrior{},
                               DimScaledLogNormalPrior{std::sqrt(2.0), std::sqrt(3.0), 4}};
  for (const auto& prior : priors) {
    for (auto kind : {KernelKind::kMatern52, KernelKind::kRbf}) {
      const MllGradient g = mll_grad(data, p, prior, kind);
      const Vector raw = p.to_raw();
      for (Eigen::Index j = 0; j < raw.size(); ++j) {
        const double h = 1e-5;
        Vector rp = raw, rm = raw;
        rp(j) += h;
        rm(j) -= h;
        const double fp = mll_grad(data, GpHyperparams::from_raw(rp), prior, kind).objective;
        const double fm = mll_grad(data, GpHyperparams::from_raw(rm), prior, kind).objective;
        CHECK(g.raw_gradient(j) == doctest::Approx((fp - fm) / (2 * h)).epsilon(1e-5).scale(1e-3));
      }
      CHECK(g.objective == doctest::Approx(g.breakdown.total + g.log_prior));
    }
  }
}

TEST_CASE("natural length-scale gradient divides by the length scale") {
  const GpHyperparams p(vec({0.5, 2.0}), 1.0, 1e-4);
  const Vector raw = vec({1.0, -4.0, 7.0, 9.0});
  const Vector nat = natural_lengthscale_gradient(raw, p);
  REQUIRE(nat.size() == 2);
  CHECK(nat(0) == doctest::Approx(2.0));
  CHECK(nat(1) == doctest::Approx(-2.0));
}

TEST_CASE("raw hyperparameters round-trip") {
  const GpHyperparams p(vec({0.25, 3.0}), 1.7, 2e-4);
  const Vector raw = p.to_raw();
  REQUIRE(raw.size() == 4);
  CHECK(raw(0) == doctest::Approx(std::log(0.25)));
  const GpHyperparams q = GpHyperparams::from_raw(raw);
  CHECK((q.lengthscales - p.lengthscales).norm() < 1e-14);
  CHECK(q.signal_variance == doctest::Approx(1.7));
  CHECK(q.noise_variance == doctest::Approx(2e-4));
  CHECK_THROWS_AS(GpHyperparams(vec({-1.0}), 1.0, 0.0).validate(), ContractError);
  CHECK_THROWS_AS(GpHyperparams(vec({1.0}), 0.0, 0.0).validate(), ContractError);
  CHECK_THROWS_AS(GpHyperparams(vec({1.0}), 1.0, -1.0).validate(), ContractError);
}

TEST_CASE("datasets outside the unit cube are rejected") {
  Matrix X(1, 2);
  X << 0.5, 1.5;
  CHECK_THROWS_AS(Dataset(X, vec({0.0})).validate(), ContractError);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(2, 2), vec({0.0})).validate(), ContractError);
  CHECK_THROWS_AS(posterior(Dataset(X, vec({0.0})), GpHyperparams::isotropic(2, 1.0), X), ContractError);
}

TEST_CASE("factorization adds escalating jitter and gives up past the ceiling") {
  Matrix K = Matrix::Ones(3, 3);  // rank one
  const GramFactor f = factorize(K, 1.0);
  CHECK(f.jitter >= kJitterFloor);
  CHECK(f.jitter <= kJitterCeiling * (1 + 1e-9));
  Matrix bad = Matrix::Identity(2, 2);
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(factorize(bad, 1.0), SurrogateSingularError);
}

TEST_CASE("Gamma(3, 6) prior") {
  const GpHyperparams p(vec({0.5}), 1.0, 1e-4);
  const LogPrior lp = log_prior(GammaPrior{3.0, 6.0}, p);
  CHECK(lp.value == doctest::Approx(0.29583686600432907419).epsilon(1e-14));
  REQUIRE(lp.raw_gradient.size() == 3);
  CHECK(lp.raw_gradient(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(lp.raw_gradient(1) == 0.0);
  CHECK(lp.raw_gradient(2) == 0.0);
  CHECK(prior_mode(GammaPrior{3.0, 6.0}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dimension-scaled log-normal prior") {
  const DimScaledLogNormalPrior prior{std::sqrt(2.0), std::sqrt(3.0), 100};
  const GpHyperparams p = GpHyperparams::isotropic(100, 2.0);
  const LogPrior lp = log_prior(prior, p);
  CHECK(lp.value == doctest::Approx(100 * -3.6851365649492942203).epsilon(1e-13));
  CHECK(prior_mode(prior) == doctest::Approx(2.0478667782260787234).epsilon(1e-14));
  CHECK(prior.location() == doctest::Approx(std::sqrt(2.0) + 0.5 * std::log(100.0)));
  // d/du [-u - (u - mu)^2 / (2 sigma^2)]
  const double u = std::log(2.0);
  CHECK(lp.raw_gradient(0) == doctest::Approx(-1.0 - (u - prior.location()) / 3.0));
}

TEST_CASE("uniform box prior marks its support") {
  const UniformBoxPrior box{0.1, 10.0};
  CHECK(log_prior(box, GpHyperparams::isotropic(2, 1.0)).in_support);
  CHECK_FALSE(log_prior(box, GpHyperparams::isotropic(2, 20.0)).in_support);
  CHECK_FALSE(has_prior(NoPrior{}));
  CHECK(has_prior(GammaPrior{}));
}

TEST_CASE("prior samples follow the prior") {
  auto rng = make_rng(9);
  const GammaPrior g{3.0, 6.0};
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += sample_prior(g, rng);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));  // mean shape / rate
}
