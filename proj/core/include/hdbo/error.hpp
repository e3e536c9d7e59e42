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

#include <stdexcept>
#include <string>

namespace hdbo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition, e.g. mismatched dimensions.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Cholesky of the regularized Gram matrix failed at the largest jitter.
class SurrogateSingularError : public Error {
 public:
  using Error::Error;
};

class FitFailureError : public Error {
 public:
  using Error::Error;
};

class BenchmarkError : public Error {
 public:
  BenchmarkError(const std::string& what, std::string captured_output = {})
      : Error(what), output_(std::move(captured_output)) {}

  const std::string& output() const noexcept { return output_; }

 private:
  std::string output_;
};

class UnsupportedAnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdbo
