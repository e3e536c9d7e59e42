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

#include "hdbo/defaults.hpp"

#include "hdbo/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>

#ifndef HDBO_DEFAULTS_FILE
#define HDBO_DEFAULTS_FILE "hdbo_defaults.json"
#endif

namespace hdbo {

std::string default_defaults_path() {
  if (const char* env = std::getenv("HDBO_DEFAULTS"); env && *env) return env;
  return HDBO_DEFAULTS_FILE;
}

MethodDefaults load_defaults(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open defaults file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("defaults file '" + path + "': " + e.what());
  }
  MethodDefaults d;
  d.source = path;
  try {
    const auto& dsp = j.at("dim_scaled_lognormal");
    d.dsp_mu0 = dsp.at("mu0").get<double>();
    d.dsp_sigma0 = dsp.at("sigma0").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("defaults file '" + path + "': " + e.what());
  }
  if (!std::isfinite(d.dsp_mu0) || !(d.dsp_sigma0 > 0.0)) {
    throw ConfigError("defaults file '" + path + "': invalid log-normal constants");
  }
  return d;
}

MethodDefaults load_defaults() { return load_defaults(default_defaults_path()); }

}  // namespace hdbo
