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

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace hdbo {

/// An objective on [0, 1]^d. Inputs are rescaled affinely to the natural
/// bounds before the underlying function sees them.
class Benchmark {
 public:
  Benchmark(std::string id, Vector lower, Vector upper, bool noise_free = true);
  virtual ~Benchmark() = default;

  Benchmark(const Benchmark&) = delete;
  Benchmark& operator=(const Benchmark&) = delete;

  const std::string& id() const { return id_; }
  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  bool noise_free() const { return noise_free_; }
  /// Whether arbitrary points may be evaluated again after a run.
  virtual bool re_evaluable() const { return true; }

  /// Maps 0 -> lower and 1 -> upper exactly.
  Vector to_natural(const Vector& unit) const;

  /// Evaluates a unit-cube point. Throws ContractError outside the cube and
  /// BenchmarkError when the underlying evaluation fails.
  double evaluate(const Vector& unit);

  /// Key/value description recorded in run metadata.
  virtual std::map<std::string, std::string> metadata() const;

 protected:
  virtual double evaluate_natural(const Vector& x) = 0;

 private:
  std::string id_;
  Vector lower_;
  Vector upper_;
  bool noise_free_;
};

using BenchmarkPtr = std::unique_ptr<Benchmark>;

/// Levy on [-10, 10]^d, w_i = 1 + (x_i - 1) / 4.
BenchmarkPtr levy(Eigen::Index d);
/// Schwefel on [-500, 500]^d.
BenchmarkPtr schwefel(Eigen::Index d);
/// Griewank on [-600, 600]^d.
BenchmarkPtr griewank(Eigen::Index d);

// Scalar formulas in natural coordinates.
double levy_value(const Vector& x);
double schwefel_value(const Vector& x);
double griewank_value(const Vector& x);

/// One realization of a zero-mean GP prior on [0, 1]^d, drawn lazily: each
/// new point is sampled from the GP conditioned on every earlier point of
/// this instance. Repeated points return the cached value.
class GpPriorSample final : public Benchmark {
 public:
  GpPriorSample(Eigen::Index d, double lengthscale, KernelKind kind, std::uint64_t seed,
                double signal_variance = 1.0);

  double lengthscale() const { return lengthscale_; }
  double signal_variance() const { return signal_; }
  KernelKind kind() const { return kind_; }
  std::size_t query_count() const { return values_.size(); }
  /// A rebuilt instance is a different realization unless every earlier
  /// query is replayed in order.
  bool re_evaluable() const override { return false; }
  std::map<std::string, std::string> metadata() const override;

 protected:
  double evaluate_natural(const Vector& x) override;

 private:
  double lengthscale_;
  KernelKind kind_;
  double signal_;
  double jitter_;
  std::mt19937_64 rng_;
  std::vector<Vector> scaled_;             // queried points divided by the length scale
  std::vector<std::vector<double>> chol_;  // row i holds L(i, 0..i)
  std::vector<double> whitened_;           // L^-1 f
  std::vector<double> values_;
  std::map<std::vector<double>, double> cache_;
};

BenchmarkPtr gp_prior_sample(Eigen::Index d, double lengthscale, KernelKind kind,
                             std::uint64_t seed);

/// Runs `command` through /bin/sh once per evaluation. The natural-coordinate
/// point is written to stdin as one whitespace-separated line; stdout must
/// hold a single real number.
class ExternalBenchmark final : public Benchmark {
 public:
  ExternalBenchmark(std::string command, Vector lower, Vector upper);

  const std::string& command() const { return command_; }
  std::map<std::string, std::string> metadata() const override;

 protected:
  double evaluate_natural(const Vector& x) override;

 private:
  std::string command_;
};

BenchmarkPtr external(std::string command, Vector lower, Vector upper);

/// Sum of squares (x_i - center)^2 over the first `active` coordinates on
/// [0, 1]^d; the remaining coordinates are ignored.
BenchmarkPtr partially_active(Eigen::Index d, Eigen::Index active, double center = 0.3);

/// Wraps an arbitrary function of natural coordinates.
BenchmarkPtr function_benchmark(std::string id, Vector lower, Vector upper,
                                std::function<double(const Vector&)> fn);

/// Builds a benchmark from a registry id of the form
/// `name:dim[:key=value...]`, e.g. `griewank:100` or
/// `gp_prior:100:lengthscale=0.5:kernel=matern52:seed=3`.
BenchmarkPtr make_benchmark(const std::string& spec);

std::vector<std::string> registered_benchmarks();

}  // namespace hdbo
