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

#include <doctest.h>

#include "hdbo/lbfgs.hpp"

#include <cmath>
#include <limits>

using namespace hdbo;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double rosenbrock(const Vector& x, Vector& g) {
  double f = 0.0;
  g.setZero();
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i);
    const double b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    g(i) += -400.0 * a * x(i) - 2.0 * b;
    g(i + 1) += 200.0 * a;
  }
  return f;
}

}  // namespace

TEST_CASE("unconstrained Rosenbrock converges to the minimum") {
  const Vector x0 = Vector::Constant(4, -1.2);
  const Vector lo = Vector::Constant(4, -kInf), hi = Vector::Constant(4, kInf);
  LbfgsOptions opt;
  opt.max_iterations = 2000;
  const LbfgsResult r = lbfgs_minimize(rosenbrock, x0, lo, hi, opt);
  CHECK(r.converged);
  CHECK((r.x - Vector::Ones(4)).norm() < 1e-5);
  CHECK(r.value < 1e-10);
}

TEST_CASE("bound-constrained quadratic stops on the active face") {
  // Minimum of sum (x - c)^2 at c = (-1, 0.5, 2) inside [0, 1]^3 is (0, 0.5, 1).
  const Vector c = (Vector(3) << -1.0, 0.5, 2.0).finished();
  auto f = [&](const Vector& x, Vector& g) {
    g = 2.0 * (x - c);
    return (x - c).squaredNorm();
  };
  const LbfgsResult r =
      lbfgs_minimize(f, Vector::Constant(3, 0.4), Vector::Zero(3), Vector::Ones(3));
  CHECK(r.converged);
  CHECK(r.x(0) == 0.0);
  CHECK(r.x(1) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.x(2) == 1.0);
}

TEST_CASE("iterates stay feasible and values never increase") {
  const Vector lo = Vector::Constant(3, -0.5), hi = Vector::Constant(3, 0.8);
  double last = kInf;
  bool monotone = true, feasible = true;
  auto cb = [&](int, const Vector& x, double value, const Vector&) {
    monotone = monotone && value <= last;
    last = value;
    feasible = feasible && (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  };
  const LbfgsResult r = lbfgs_minimize(rosenbrock, Vector::Constant(3, 0.1), lo, hi, {}, cb);
  CHECK(monotone);
  CHECK(feasible);
  Vector g0(3);
  CHECK(r.value <= rosenbrock(Vector::Constant(3, 0.1), g0));
}

TEST_CASE("a step that would cross a bound is truncated there, not clipped") {
  // Linear objective with a steep first coordinate: projecting the full step
  // would also move the second coordinate to its bound in one iteration.
  auto f = [](const Vector& x, Vector& g) {
    g << -100.0, -1.0;
    return -100.0 * x(0) - x(1);
  };
  int first_step_bound_hits = -1;
  auto cb = [&](int it, const Vector& x, double, const Vector&) {
    if (it == 1) first_step_bound_hits = (x(0) == 1.0) + (x(1) == 1.0);
  };
  lbfgs_minimize(f, Vector::Constant(2, 0.5), Vector::Zero(2), Vector::Ones(2), {}, cb);
  CHECK(first_step_bound_hits == 1);
}

TEST_CASE("max_iterations bounds the number of accepted steps") {
  LbfgsOptions opt;
  opt.max_iterations = 3;
  int calls = 0;
  auto cb = [&](int, const Vector&, double, const Vector&) { ++calls; };
  const LbfgsResult r = lbfgs_minimize(rosenbrock, Vector::Constant(5, -1.2),
                                       Vector::Constant(5, -kInf), Vector::Constant(5, kInf), opt, cb);
  CHECK(r.iterations <= 3);
  CHECK(calls == r.iterations + 1);
  CHECK_FALSE(r.converged);
}

TEST_CASE("non-finite values are treated as infeasible") {
  // log barrier at x < 0.2: the line search must backtrack instead of accepting NaN.
  auto f = [](const Vector& x, Vector& g) {
    if (x(0) <= 0.2) return std::numeric_limits<double>::quiet_NaN();
    g(0) = 1.0 - 1.0 / (x(0) - 0.2);
    return x(0) - std::log(x(0) - 0.2);
  };
  const LbfgsResult r = lbfgs_minimize(f, Vector::Constant(1, 3.0), Vector::Constant(1, -kInf),
                                       Vector::Constant(1, kInf));
  CHECK(std::isfinite(r.value));
  CHECK(r.x(0) == doctest::Approx(1.2).epsilon(1e-6));
}

TEST_CASE("a start at the optimum stops immediately") {
  auto f = [](const Vector& x, Vector& g) {
    g = 2.0 * x;
    return x.squaredNorm();
  };
  const LbfgsResult r = lbfgs_minimize(f, Vector::Zero(3), Vector::Constant(3, -1), Vector::Ones(3));
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}
