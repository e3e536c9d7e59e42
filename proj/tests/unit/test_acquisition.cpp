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

// EI, log EI, Boltzmann start selection and the acquisition optimizer.
// Reference values come from tests/oracles/compute_oracles.py.
#include <doctest.h>

#include "hdbo/acquisition.hpp"
#include "hdbo/error.hpp"
#include "hdbo/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>

using namespace hdbo;

namespace {

GpModel small_model(Eigen::Index d, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix X(8, d);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = u(rng);
  Vector y(8);
  for (Eigen::Index i = 0; i < 8; ++i) y(i) = -(X.row(i).array() - 0.4).square().sum();
  y = (y.array() - y.mean()) / std::sqrt((y.array() - y.mean()).square().sum() / 7);
  return GpModel(Dataset(X, y), GpHyperparams::isotropic(d, 0.5, 1.0, 1e-6));
}

}  // namespace

TEST_CASE("EI closed form") {
  CHECK(ei(1.0, 1.0, 0.0) == doctest::Approx(1.0833154705876862984).epsilon(1e-15));
  CHECK(ei(0.3, 0.0, 0.0) == doctest::Approx(0.3));
  CHECK(ei(-0.3, 0.0, 0.0) == 0.0);
  CHECK(ei(0.0, 2.0, 0.0) == doctest::Approx(2.0 / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("log_h against high-precision references on both sides of the switch") {
  const std::pair<double, double> cases[] = {
      {-30.0, -457.72465376059800405}, {-10.0, -55.553122036122355927},
      {-6.0, -22.578879392169797367},  {-5.99, -22.515828734689726675},
      {-1.0, -2.4851210257126413368},  {0.0, -0.91893853320467274178},
      {2.5, 0.91709206559216451701}};
  for (const auto& [z, ref] : cases) {
    INFO("z = " << z);
    CHECK(log_h(z) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("log_h is continuous across the switch and dlog_h matches differences") {
  const double below = log_h(std::nextafter(kLogEiSwitch, -1.0));
  CHECK(below == doctest::Approx(log_h(kLogEiSwitch)).epsilon(1e-12));
  for (double z : {-40.0, -8.0, -6.0001, -5.9999, -2.0, 0.5, 3.0}) {
    const double h = 1e-6;
    CHECK(dlog_h(z) == doctest::Approx((log_h(z + h) - log_h(z - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("log EI far below the incumbent stays finite and accurate") {
  CHECK(log_ei(-12.0, 0.4, 0.0) == doctest::Approx(-458.64094449247215912).epsilon(1e-12));
  // The plain form is already 200 orders of magnitude down; log EI agrees with it.
  CHECK(std::log(ei(-12.0, 0.4, 0.0)) == doctest::Approx(log_ei(-12.0, 0.4, 0.0)).epsilon(1e-6));
  CHECK(ei(-40.0, 0.4, 0.0) == 0.0);
  CHECK(std::isfinite(log_ei(-40.0, 0.4, 0.0)));
  CHECK(log_ei(1.0, 1.0, 0.0) == doctest::Approx(std::log(1.0833154705876862984)));
  CHECK(log_ei(-1.0, 0.0, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK(log_ei(2.0, 0.0, 0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("log EI partials match finite differences") {
  for (double mean : {-5.0, -0.3, 0.8}) {
    const double sd = 0.7, h = 1e-6;
    const LogEiPartials p = log_ei_partials(mean, sd, 0.2);
    CHECK(p.value == doctest::Approx(log_ei(mean, sd, 0.2)));
    CHECK(p.d_mean ==
          doctest::Approx((log_ei(mean + h, sd, 0.2) - log_ei(mean - h, sd, 0.2)) / (2 * h)).epsilon(1e-6));
    CHECK(p.d_stddev ==
          doctest::Approx((log_ei(mean, sd + h, 0.2) - log_ei(mean, sd - h, 0.2)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("log EI of a GP: gradient in x matches finite differences") {
  const GpModel model = small_model(3, 1);
  const double best = model.train().y.maxCoeff();
  const Vector x = (Vector(3) << 0.2, 0.55, 0.8).finished();
  Vector g;
  const double v = log_ei_at(model, x, best, &g);
  CHECK(v == doctest::Approx(log_ei_at(model, x, best)));
  for (Eigen::Index j = 0; j < 3; ++j) {
    const double h = 1e-6;
    Vector xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    CHECK(g(j) == doctest::Approx((log_ei_at(model, xp, best) - log_ei_at(model, xm, best)) / (2 * h))
                      .epsilon(1e-5));
  }
}

TEST_CASE("Boltzmann selection frequencies follow the softmax of standardized values") {
  const Vector v = (Vector(3) << 0.0, 1.0, 2.0).finished();  // z = -1, 0, 1
  const double eta = 1.0;
  const double w[3] = {std::exp(-eta), 1.0, std::exp(eta)};
  const double total = w[0] + w[1] + w[2];
  auto rng = make_rng(17);
  const int trials = 100000;
  int counts[3] = {0, 0, 0};
  for (int t = 0; t < trials; ++t) ++counts[boltzmann_select(v, 1, eta, rng)[0]];
  double chi2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double expected = trials * w[i] / total;
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  CHECK(chi2 < 13.82);  // chi-square, 2 degrees of freedom, p = 0.001
}

TEST_CASE("Boltzmann selection returns distinct indices and degenerates to top-k") {
  auto rng = make_rng(3);
  Vector v(10);
  for (Eigen::Index i = 0; i < 10; ++i) v(i) = static_cast<double>((i * 7) % 10);
  const auto sel = boltzmann_select(v, 10, 2.0, rng);
  CHECK(std::set<Eigen::Index>(sel.begin(), sel.end()).size() == 10);

  const auto top = boltzmann_select(v, 3, 2.0 * kBoltzmannTopKThreshold, rng);
  REQUIRE(top.size() == 3);
  CHECK(v(top[0]) == 9.0);
  CHECK(v(top[1]) == 8.0);
  CHECK(v(top[2]) == 7.0);

  v(4) = -std::numeric_limits<double>::infinity();
  CHECK(boltzmann_select(v, 10, 1.0, rng).size() == 10);
  CHECK_THROWS_AS(boltzmann_select(v, 11, 1.0, rng), ConfigError);
  CHECK_THROWS_AS(boltzmann_select(v, 0, 1.0, rng), ConfigError);
  CHECK_THROWS_AS(boltzmann_select(v, 2, 0.0, rng), ConfigError);
}

TEST_CASE("acquisition maximization stays in the cube and improves every start") {
  const GpModel model = small_model(4, 2);
  AcqConfig cfg;
  cfg.raw_samples = 64;
  cfg.num_starts = 4;
  auto rng = make_rng(5);
  const AcqOptReport rep = maximize_acq(model, cfg, rng);
  CHECK(rep.candidate_count == 4 * 64);
  REQUIRE(rep.starts.size() == 4);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.chosen_point.minCoeff() >= 0.0);
  CHECK(rep.chosen_point.maxCoeff() <= 1.0);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& s : rep.starts) {
    CHECK(s.end_value >= s.start_value);
    CHECK(s.travel_distance == doctest::Approx((s.end_point - s.start_point).norm()));
    best = std::max(best, s.end_value);
  }
  CHECK(rep.chosen_value == best);
  CHECK(rep.raasp_start_fraction >= 0.0);
  CHECK(rep.raasp_start_fraction <= 1.0);
}

TEST_CASE("acquisition without RAASP uses only Sobol starts") {
  const GpModel model = small_model(3, 4);
  AcqConfig cfg;
  cfg.raw_samples = 32;
  cfg.raasp_enabled = false;
  auto rng = make_rng(6);
  const AcqOptReport rep = maximize_acq(model, cfg, rng);
  CHECK(rep.candidate_count == 64);
  CHECK(rep.raasp_start_fraction == 0.0);
  for (const auto& s : rep.starts) CHECK(s.origin == CandidateOrigin::kGlobalSobol);
}

TEST_CASE("acquisition is reproducible and validates its config") {
  const GpModel model = small_model(3, 7);
  AcqConfig cfg;
  cfg.raw_samples = 16;
  auto r1 = make_rng(8), r2 = make_rng(8);
  CHECK(maximize_acq(model, cfg, r1).chosen_point == maximize_acq(model, cfg, r2).chosen_point);
  cfg.num_starts = 1000;
  CHECK_THROWS_AS(maximize_acq(model, cfg, r1), ConfigError);
  cfg = AcqConfig{};
  cfg.boltzmann_temperature = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = AcqConfig{};
  CHECK(cfg.relative_reduction_tolerance == doctest::Approx(2.220446049250313e-9));
  cfg.relative_reduction_tolerance = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
