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

#include "hdbo/trace_io.hpp"

#include "hdbo/error.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unistd.h>

namespace hdbo {

namespace {

using nlohmann::json;

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json header_json(const RunMetadata& m) {
  json info = json::object();
  for (const auto& [k, v] : m.benchmark_info) info[k] = v;
  return {{"type", "meta"},      {"format", kTraceFormat},    {"version", kTraceVersion},
          {"benchmark_id", m.benchmark_id}, {"benchmark_info", info}, {"dim", m.dim},
          {"seed", m.seed},      {"method", m.method},        {"doe_size", m.doe_size},
          {"budget", m.budget},  {"config", m.config}};
}

json record_json(const IterationRecord& r) {
  return {{"type", "iteration"},
          {"iteration", r.iteration},
          {"x", std::vector<double>(r.x.data(), r.x.data() + r.x.size())},
          {"observed", r.observed},
          {"incumbent", r.incumbent},
          {"mean_lengthscale", optional_json(r.mean_lengthscale)},
          {"max_gradient", optional_json(r.max_gradient)},
          {"vanished", optional_json(r.vanished)},
          {"raasp_start_fraction", optional_json(r.raasp_start_fraction)},
          {"acq_mean_travel", optional_json(r.acq_mean_travel)},
          {"acq_mean_steps", optional_json(r.acq_mean_steps)},
          {"fit_failed", r.fit_failed},
          {"acq_degenerate", r.acq_degenerate},
          {"otsd", r.otsd},
          {"otsd_solver", std::string(to_string(r.otsd_solver))}};
}

IterationRecord record_from(const json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  const auto x = j.at("x").get<std::vector<double>>();
  r.x = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
  r.observed = j.at("observed").get<double>();
  r.incumbent = j.at("incumbent").get<double>();
  r.mean_lengthscale = optional_from<double>(j, "mean_lengthscale");
  r.max_gradient = optional_from<double>(j, "max_gradient");
  r.vanished = optional_from<bool>(j, "vanished");
  r.raasp_start_fraction = optional_from<double>(j, "raasp_start_fraction");
  r.acq_mean_travel = optional_from<double>(j, "acq_mean_travel");
  r.acq_mean_steps = optional_from<double>(j, "acq_mean_steps");
  r.fit_failed = j.value("fit_failed", false);
  r.acq_degenerate = j.value("acq_degenerate", false);
  r.otsd = j.at("otsd").get<double>();
  const auto solver = j.at("otsd_solver").get<std::string>();
  if (solver == "exact") {
    r.otsd_solver = OtsdSolver::kExact;
  } else if (solver == "heuristic") {
    r.otsd_solver = OtsdSolver::kHeuristic;
  } else {
    throw ConfigError("unknown otsd_solver '" + solver + "'");
  }
  return r;
}

template <typename T>
std::string optional_cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) {
    return *v ? "1" : "0";
  } else {
    return format_double(*v);
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trace_jsonl(std::ostream& out, const RunTrace& trace) {
  out << header_json(trace.meta).dump() << '\n';
  for (const auto& r : trace.records) out << record_json(r).dump() << '\n';
  json end = {{"type", "end"},
              {"records", trace.records.size()},
              {"aborted", trace.aborted},
              {"error", trace.error}};
  out << end.dump() << '\n';
}

std::string trace_to_jsonl(const RunTrace& trace) {
  std::ostringstream os;
  write_trace_jsonl(os, trace);
  return os.str();
}

RunTrace read_trace_jsonl(std::istream& in, const std::string& source) {
  RunTrace trace;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "meta") {
        if (have_header) throw ConfigError(where + "duplicate header");
        if (j.at("format").get<std::string>() != kTraceFormat) {
          throw ConfigError(where + "not an hdbo trace");
        }
        RunMetadata& m = trace.meta;
        m.benchmark_id = j.at("benchmark_id").get<std::string>();
        for (const auto& [k, v] : j.at("benchmark_info").items()) m.benchmark_info[k] = v.get<std::string>();
        m.dim = j.at("dim").get<Eigen::Index>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.method = j.at("method").get<std::string>();
        m.doe_size = j.at("doe_size").get<int>();
        m.budget = j.at("budget").get<int>();
        m.config = j.at("config");
        have_header = true;
      } else if (type == "iteration") {
        if (!have_header) throw ConfigError(where + "record before header");
        IterationRecord r = record_from(j);
        if (r.x.size() != trace.meta.dim) throw ConfigError(where + "point has wrong dimension");
        trace.records.push_back(std::move(r));
      } else if (type == "end") {
        trace.aborted = j.value("aborted", false);
        trace.error = j.value("error", std::string());
      } else {
        throw ConfigError(where + "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (!have_header) throw ConfigError(source + ": missing trace header");
  return trace;
}

RunTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_trace_jsonl(in, path);
}

const std::vector<std::string>& trace_csv_columns() {
  static const std::vector<std::string> cols = {
      "benchmark_id", "method",          "seed",          "iteration",
      "observed",     "incumbent",       "mean_lengthscale", "max_gradient",
      "vanished",     "raasp_start_fraction", "acq_mean_travel", "acq_mean_steps",
      "fit_failed",   "acq_degenerate",  "otsd",          "otsd_solver"};
  return cols;
}

std::string trace_to_csv(const RunTrace& trace, bool header) {
  std::ostringstream os;
  if (header) {
    const auto& cols = trace_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
  }
  for (const auto& r : trace.records) {
    os << csv_escape(trace.meta.benchmark_id) << ',' << csv_escape(trace.meta.method) << ','
       << trace.meta.seed << ',' << r.iteration << ',' << format_double(r.observed) << ','
       << format_double(r.incumbent) << ',' << optional_cell(r.mean_lengthscale) << ','
       << optional_cell(r.max_gradient) << ',' << optional_cell(r.vanished) << ','
       << optional_cell(r.raasp_start_fraction) << ',' << optional_cell(r.acq_mean_travel) << ','
       << optional_cell(r.acq_mean_steps) << ',' << (r.fit_failed ? 1 : 0) << ','
       << (r.acq_degenerate ? 1 : 0) << ',' << format_double(r.otsd) << ','
       << to_string(r.otsd_solver) << '\n';
  }
  return os.str();
}

void atomic_write(const std::string& path, const std::string& content, bool overwrite) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (!overwrite && fs::exists(target)) {
    throw Error("refusing to overwrite existing file '" + path + "' (use --force)");
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace hdbo
