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

#include "hdbo/bo.hpp"
#include "hdbo/diagnostics.hpp"
#include "hdbo/error.hpp"
#include "hdbo/fit.hpp"
#include "hdbo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace hdbo;

namespace {

Dataset standardized(Dataset data) {
  data.y = standardize_for_max(data.y);
  return data;
}

}  // namespace

TEST_CASE("initialization schemes") {
  auto rng = make_rng(0);
  const Vector ln2 = init_lengthscales(ConstantLn2Init{}, 7, NoPrior{}, rng);
  CHECK(ln2.size() == 7);
  CHECK((ln2.array() == std::numbers::ln2).all());
  const Vector scaled = init_lengthscales(ScaledSqrtDInit{}, 400, NoPrior{}, rng);
  CHECK(((scaled.array() - 2.0).abs() < 1e-15).all());
  const Vector expl = init_lengthscales(ExplicitInit{0.7}, 3, NoPrior{}, rng);
  CHECK((expl.array() == 0.7).all());

  const DimScaledLogNormalPrior dsp{std::sqrt(2.0), std::sqrt(3.0), 100};
  const Vector mode = init_lengthscales(PriorModeInit{}, 100, dsp, rng);
  CHECK(mode(0) == doctest::Approx(2.0478667782260787234).epsilon(1e-13));
  const Vector sample = init_lengthscales(PriorSampleInit{}, 100, dsp, rng);
  CHECK((sample.array() > 0.0).all());
  CHECK(sample.maxCoeff() > sample.minCoeff());  // independent per dimension

  CHECK_THROWS_AS(init_lengthscales(PriorModeInit{}, 3, NoPrior{}, rng), ConfigError);
  CHECK_THROWS_AS(init_lengthscales(PriorSampleInit{}, 3, NoPrior{}, rng), ConfigError);
  CHECK_THROWS_AS(init_lengthscales(ExplicitInit{-1.0}, 3, NoPrior{}, rng), ConfigError);
}

TEST_CASE("fit config validation") {
  FitConfig c;
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = FitConfig{};
  c.max_steps = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("fit never ends below its starting objective and reports its trace") {
  const Dataset data = standardized(gp_prior_dataset(5, 40, 0.4, KernelKind::kMatern52, 11));
  FitConfig cfg;
  cfg.max_steps = 200;
  auto rng = make_rng(1);
  const FitReport rep = fit(data, cfg, rng);
  CHECK(rep.final_objective >= rep.initial_objective);
  CHECK(rep.steps_taken >= 1);
  CHECK(rep.steps_taken <= cfg.max_steps);
  REQUIRE_FALSE(rep.gradient_trace.empty());
  const auto window = std::min<std::size_t>(rep.gradient_trace.size(), cfg.vanish_window);
  CHECK(rep.max_gradient ==
        *std::max_element(rep.gradient_trace.begin(), rep.gradient_trace.begin() + window));
  CHECK(rep.final_objective ==
        doctest::Approx(mll_grad(data, rep.params, cfg.prior, cfg.kernel).objective));
}

TEST_CASE("fit recovers the length scale of a one-dimensional GP sample") {
  const Dataset data = standardized(gp_prior_dataset(1, 80, 0.2, KernelKind::kMatern52, 5));
  FitConfig cfg;
  cfg.scheme = ConstantLn2Init{};
  auto rng = make_rng(2);
  const FitReport rep = fit(data, cfg, rng);
  CHECK(rep.params.lengthscales(0) > 0.1);
  CHECK(rep.params.lengthscales(0) < 0.4);
}

TEST_CASE("fit is deterministic for a fixed generator state") {
  const Dataset data = standardized(gp_prior_dataset(4, 30, 0.5, KernelKind::kRbf, 3));
  FitConfig cfg;
  cfg.kernel = KernelKind::kRbf;
  cfg.restarts = 3;
  auto r1 = make_rng(42), r2 = make_rng(42);
  const FitReport a = fit(data, cfg, r1);
  const FitReport b = fit(data, cfg, r2);
  CHECK(a.params.to_raw() == b.params.to_raw());
  CHECK(a.final_objective == b.final_objective);
}

TEST_CASE("restarts keep the best objective") {
  const Dataset data = standardized(gp_prior_dataset(3, 25, 0.3, KernelKind::kMatern52, 8));
  FitConfig cfg;
  cfg.restarts = 4;
  auto rng = make_rng(3);
  const FitReport rep = fit(data, cfg, rng);
  REQUIRE(rep.restart_objectives.size() == 4);
  CHECK(rep.final_objective ==
        *std::max_element(rep.restart_objectives.begin(), rep.restart_objectives.end()));
  CHECK(rep.restart_objectives[rep.restart_index] == rep.final_objective);
}

TEST_CASE("MAP under a Gamma prior ends at a stationary point of MLL + log prior") {
  const Dataset data = standardized(gp_prior_dataset(2, 30, 0.4, KernelKind::kMatern52, 4));
  FitConfig cfg;
  cfg.prior = GammaPrior{3.0, 6.0};
  auto rng = make_rng(4);
  const FitReport rep = fit(data, cfg, rng);
  const MllGradient g = mll_grad(data, rep.params, cfg.prior, cfg.kernel);
  CHECK(g.raw_gradient.head(2).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(g.log_prior != 0.0);
  // The prior pulls the length scales towards its mode compared with plain MLE.
  FitConfig mle = cfg;
  mle.prior = NoPrior{};
  auto rng2 = make_rng(4);
  const FitReport free = fit(data, mle, rng2);
  const double mode = prior_mode(cfg.prior);
  CHECK((rep.params.lengthscales.array().log() - std::log(mode)).abs().sum() <=
        (free.params.lengthscales.array().log() - std::log(mode)).abs().sum() + 1e-9);
}

TEST_CASE("gradient vanishes from ln 2 in 1000 dimensions but not from sqrt(d)/10") {
  const Dataset data = standardized(gp_prior_dataset(1000, 20, 1.0, KernelKind::kMatern52, 6));
  FitConfig cfg;
  cfg.max_steps = 60;
  cfg.scheme = ConstantLn2Init{};
  auto rng = make_rng(5);
  const FitReport small = fit(data, cfg, rng);
  CHECK(small.vanished);
  CHECK(small.max_gradient < kSinglePrecisionEps);
  CHECK(gradient_vanished(small.gradient_trace, cfg.vanish_window));

  cfg.scheme = ScaledSqrtDInit{};
  const FitReport scaled = fit(data, cfg, rng);
  CHECK_FALSE(scaled.vanished);
  CHECK(scaled.max_gradient > kSinglePrecisionEps);
}

TEST_CASE("gradient_vanished inspects only the window") {
  CHECK(gradient_vanished({1e-9, 1e-10, 5.0}, 2));
  CHECK_FALSE(gradient_vanished({1e-9, 1e-3}, 2));
  CHECK_FALSE(gradient_vanished({}, 2));
}

TEST_CASE("warm start replaces the initialization scheme for the first restart") {
  const Dataset data = standardized(gp_prior_dataset(2, 20, 0.3, KernelKind::kMatern52, 9));
  FitConfig cfg;
  cfg.max_steps = 1;
  cfg.record_gradient_trace = true;
  cfg.warm_start = GpHyperparams(Vector::Constant(2, 0.3), 1.0, 1e-4);
  auto rng = make_rng(6);
  const FitReport rep = fit(data, cfg, rng);
  CHECK(rep.initial_objective ==
        doctest::Approx(mll_grad(data, *cfg.warm_start, cfg.prior, cfg.kernel).objective));
  cfg.warm_start = GpHyperparams(Vector::Constant(3, 0.3), 1.0, 1e-4);
  CHECK_THROWS_AS(fit(data, cfg, rng), ContractError);
}
