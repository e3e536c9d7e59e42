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

// Test functions, the GP prior sample and external commands. Reference values
// come from tests/oracles/compute_oracles.py.
#include <doctest.h>

#include "hdbo/benchmarks.hpp"
#include "hdbo/error.hpp"
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

}  // namespace

TEST_CASE("closed-form values at reference points") {
  CHECK(levy_value(vec({0.5, -1.25, 3.0})) == doctest::Approx(2.3036525518297428058).epsilon(1e-14));
  CHECK(schwefel_value(vec({100.0, -200.0, 300.5})) ==
        doctest::Approx(1811.374312752279105).epsilon(1e-13));
  CHECK(griewank_value(vec({1.0, 2.0, 3.0})) == doctest::Approx(1.0170279701835734336).epsilon(1e-14));
}

TEST_CASE("known minima") {
  CHECK(levy_value(Vector::Ones(7)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(griewank_value(Vector::Zero(9)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  // Schwefel's minimum is quoted to four decimals, so the residual is ~1e-5 per coordinate.
  CHECK(schwefel_value(Vector::Constant(1, 420.9687)) ==
        doctest::Approx(1.2727837465765e-5).epsilon(1e-5));
  CHECK(std::abs(schwefel_value(Vector::Constant(10, 420.9687))) < 2e-4);
}

TEST_CASE("unit-cube rescaling") {
  auto b = levy(3);
  CHECK(b->to_natural(Vector::Zero(3)) == Vector::Constant(3, -10.0));
  CHECK(b->to_natural(Vector::Ones(3)) == Vector::Constant(3, 10.0));
  CHECK(b->evaluate(Vector::Constant(3, 0.55)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  auto s = schwefel(2);
  CHECK(s->evaluate(Vector::Constant(2, 0.9209687)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
  auto g = griewank(4);
  CHECK(g->evaluate(Vector::Constant(4, 0.5)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(g->lower()(0) == -600.0);
  CHECK_THROWS_AS(g->evaluate(Vector::Constant(4, 1.5)), ContractError);
  CHECK_THROWS_AS(g->evaluate(Vector::Constant(3, 0.5)), ContractError);
}

TEST_CASE("benchmark ids") {
  CHECK(make_benchmark("griewank:100")->dim() == 100);
  CHECK(make_benchmark("levy:3")->id() == levy(3)->id());
  auto gp = make_benchmark("gp_prior:4:lengthscale=0.3:kernel=rbf:seed=2");
  CHECK(gp->dim() == 4);
  CHECK_FALSE(gp->re_evaluable());
  auto pa = make_benchmark("partially_active:6:active=2");
  CHECK(pa->evaluate(vec({0.3, 0.3, 0.9, 0.1, 0.0, 1.0})) == doctest::Approx(0.0).scale(1.0));
  CHECK(pa->evaluate(vec({0.5, 0.3, 0.3, 0.3, 0.3, 0.3})) == doctest::Approx(0.04));
  CHECK_THROWS_AS(make_benchmark("griewank"), ConfigError);
  CHECK_THROWS_AS(make_benchmark("griewank:abc"), ConfigError);
  CHECK_THROWS_AS(make_benchmark("griewank:0"), ConfigError);
  CHECK_THROWS_AS(make_benchmark("nosuch:3"), ConfigError);
  CHECK_THROWS_AS(make_benchmark("levy:3:bogus=1"), ConfigError);
  CHECK_THROWS_AS(make_benchmark("external:3"), ConfigError);
  CHECK(registered_benchmarks().size() >= 4);
}

TEST_CASE("GP prior sample: repeated points return the cached value") {
  GpPriorSample f(3, 0.5, KernelKind::kMatern52, 7);
  const Vector x = vec({0.1, 0.2, 0.3});
  const double a = f.evaluate(x);
  f.evaluate(vec({0.7, 0.1, 0.9}));
  CHECK(f.evaluate(x) == a);
  CHECK(f.query_count() == 2);
}

TEST_CASE("GP prior sample: same seed and query order give the same realization") {
  GpPriorSample f(2, 0.4, KernelKind::kRbf, 3), g(2, 0.4, KernelKind::kRbf, 3);
  GpPriorSample h(2, 0.4, KernelKind::kRbf, 4);
  bool all_equal = true, any_diff = false;
  for (double t : {0.1, 0.35, 0.8}) {
    const Vector x = vec({t, 1.0 - t});
    const double fx = f.evaluate(x);
    all_equal = all_equal && fx == g.evaluate(x);
    any_diff = any_diff || fx != h.evaluate(x);
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("GP prior sample: nearby points are strongly correlated") {
  const double ls = 0.5;
  GpPriorSample f(3, ls, KernelKind::kMatern52, 11);
  auto rng = make_rng(12);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::normal_distribution<double> g(0.0, 1.0);
  const int pairs = 1000;
  Vector a(pairs), b(pairs);
  for (int i = 0; i < pairs; ++i) {
    Vector x(3), dir(3);
    for (int j = 0; j < 3; ++j) {
      x(j) = u(rng);
      dir(j) = g(rng);
    }
    a(i) = f.evaluate(x);
    b(i) = f.evaluate(x + 0.05 * ls * dir.normalized());
  }
  const Vector ac = a.array() - a.mean(), bc = b.array() - b.mean();
  const double corr = ac.dot(bc) / std::sqrt(ac.squaredNorm() * bc.squaredNorm());
  CHECK(corr >= 0.9);
  CHECK(a.allFinite());
}

TEST_CASE("GP prior sample: marginal variance is the signal variance") {
  // Values at well separated points are nearly independent N(0, 1) draws.
  double sum2 = 0.0;
  const int n = 400;
  for (int s = 0; s < n; ++s) {
    GpPriorSample f(2, 0.1, KernelKind::kMatern52, static_cast<std::uint64_t>(s));
    const double v = f.evaluate(vec({0.5, 0.5}));
    sum2 += v * v;
  }
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("external command benchmark") {
  auto b = external("awk '{print $1 + 2 * $2}'", Vector::Zero(2), Vector::Constant(2, 10.0));
  CHECK(b->evaluate(vec({0.1, 0.5})) == doctest::Approx(11.0));
  CHECK(b->metadata().at("command").find("awk") != std::string::npos);

  auto failing = external("echo broken >&2; exit 3", Vector::Zero(1), Vector::Ones(1));
  try {
    failing->evaluate(vec({0.5}));
    FAIL("expected BenchmarkError");
  } catch (const BenchmarkError& e) {
    CHECK(std::string(e.what()).find("status 3") != std::string::npos);
    CHECK(e.output().find("broken") != std::string::npos);
  }
  auto garbage = external("echo not-a-number", Vector::Zero(1), Vector::Ones(1));
  CHECK_THROWS_AS(garbage->evaluate(vec({0.5})), BenchmarkError);
  auto id = make_benchmark("external:2:lo=-1:hi=1:cmd=awk '{print $1}'");
  CHECK(id->evaluate(vec({0.75, 0.0})) == doctest::Approx(0.5));
}

TEST_CASE("function benchmarks wrap arbitrary callables") {
  auto b = function_benchmark("sq", Vector::Constant(2, -1.0), Vector::Constant(2, 1.0),
                              [](const Vector& x) { return x.squaredNorm(); });
  CHECK(b->evaluate(vec({0.5, 1.0})) == doctest::Approx(1.0));
  CHECK(b->id() == "sq");
  CHECK_THROWS_AS(function_benchmark("bad", Vector::Ones(1), Vector::Zero(1),
                                     [](const Vector&) { return 0.0; }),
                  ContractError);
}
