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

#include <string>

namespace hdbo {

/// Constants that are not fixed by the method itself and ship in a data
/// file (config/hdbo_defaults.json) instead of being compiled in.
struct MethodDefaults {
  /// Base location and scale of the dimension-scaled log-normal prior.
  double dsp_mu0 = 0.0;
  double dsp_sigma0 = 0.0;
  std::string source;
};

/// Path used when none is given: $HDBO_DEFAULTS, else the file installed
/// (or found in the source tree) at build time.
std::string default_defaults_path();

/// Throws ConfigError if the file is missing or malformed.
MethodDefaults load_defaults(const std::string& path);
MethodDefaults load_defaults();

}  // namespace hdbo
