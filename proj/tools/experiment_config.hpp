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

#include "hdbo/bo.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdbo::cli {

/// A declarative experiment: one benchmark, a list of methods and seeds.
///
///   benchmark: griewank:100
///   methods: [MSR, DSP]          # presets or maps with overrides
///   budget: 200
///   doe_size: 10
///   seeds: [0, 1, 2]             # or  seeds: {start: 0, count: 10}
///   output_dir: results/griewank
///   random_search: true          # add a random-search baseline per seed
///   export_csv: true             # write a CSV next to each JSONL trace
struct MethodEntry {
  MethodConfig config;
  /// Source line of the entry, for messages.
  int line = 0;
};

struct ExperimentConfig {
  std::string source;
  std::string benchmark;
  std::vector<MethodEntry> methods;
  int budget = 30;
  int doe_size = 10;
  std::vector<std::uint64_t> seeds{0};
  std::optional<std::string> output_dir;
  bool random_search = false;
  bool export_csv = false;
  /// The parsed document with presets resolved, embedded in every trace.
  nlohmann::json resolved;
};

/// Parses and validates a YAML experiment file. Errors are ConfigError with
/// a `path:line:column:` prefix pointing at the offending node.
ExperimentConfig load_experiment_config(const std::string& path, const MethodDefaults& defaults);

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const MethodDefaults& defaults);

}  // namespace hdbo::cli
