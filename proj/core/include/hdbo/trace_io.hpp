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

#include <iosfwd>
#include <string>

namespace hdbo {

/// Schema tag written into every trace header.
inline constexpr const char* kTraceFormat = "hdbo-trace";
inline constexpr int kTraceVersion = 1;

/// Trace as JSON lines: one header object, one object per evaluation and a
/// closing status object. See docs/formats.md.
std::string trace_to_jsonl(const RunTrace& trace);
void write_trace_jsonl(std::ostream& out, const RunTrace& trace);

/// Parses a trace written by write_trace_jsonl. Throws ConfigError naming
/// the offending line on malformed input.
RunTrace read_trace_jsonl(std::istream& in, const std::string& source = "<stream>");
RunTrace read_trace_file(const std::string& path);

/// Fixed CSV column order shared with the plotting scripts.
const std::vector<std::string>& trace_csv_columns();
std::string trace_to_csv(const RunTrace& trace, bool header = true);

/// Writes `content` to `path` via a temporary file in the same directory
/// and an atomic rename. With `overwrite` false an existing file is an error.
void atomic_write(const std::string& path, const std::string& content, bool overwrite = true);

/// Shortest decimal form that round-trips; empty for NaN, "inf"/"-inf" otherwise.
std::string format_double(double value);

}  // namespace hdbo
