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

#include "experiment_config.hpp"

#include "hdbo/benchmarks.hpp"
#include "hdbo/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace hdbo::cli {

namespace {

class Parser {
 public:
  Parser(std::string source, const MethodDefaults& defaults)
      : source_(std::move(source)), defaults_(defaults) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const YAML::Mark m = node.Mark();
    if (m.line < 0) throw ConfigError(source_ + ": " + message);
    throw ConfigError(source_ + ":" + std::to_string(m.line + 1) + ":" +
                      std::to_string(m.column + 1) + ": " + message);
  }

  void check_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                  const std::string& where) const {
    if (!map.IsMap()) fail(map, where + " must be a mapping");
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(kv.first, "unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
      }
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, what + " must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "cannot parse " + what + " from '" + node.Scalar() + "'");
    }
  }

  int positive_int(const YAML::Node& node, const std::string& what) const {
    const int v = scalar<int>(node, what);
    if (v < 1) fail(node, what + " must be >= 1");
    return v;
  }

  double positive_double(const YAML::Node& node, const std::string& what) const {
    const double v = scalar<double>(node, what);
    if (!(v > 0.0)) fail(node, what + " must be > 0");
    return v;
  }

  InitScheme init_scheme(const YAML::Node& node) const {
    if (!node.IsScalar()) fail(node, "init must be ln2, sqrt_d, prior_mode, prior_sample or a number");
    const std::string s = node.Scalar();
    if (s == "ln2") return ConstantLn2Init{};
    if (s == "sqrt_d") return ScaledSqrtDInit{};
    if (s == "prior_mode") return PriorModeInit{};
    if (s == "prior_sample") return PriorSampleInit{};
    return ExplicitInit{positive_double(node, "init length scale")};
  }

  Hyperprior prior(const YAML::Node& node, Eigen::Index d) const {
    if (node.IsScalar()) {
      const std::string s = node.Scalar();
      if (s == "none") return NoPrior{};
      if (s == "gamma") return GammaPrior{};
      if (s == "dim_scaled_lognormal") {
        return DimScaledLogNormalPrior{defaults_.dsp_mu0, defaults_.dsp_sigma0, d};
      }
      fail(node, "unknown prior '" + s + "' (none, gamma, dim_scaled_lognormal, uniform)");
    }
    check_keys(node, {"kind", "shape", "rate", "mu0", "sigma0", "lo", "hi"}, "prior");
    if (!node["kind"]) fail(node, "prior needs a 'kind'");
    const std::string kind = scalar<std::string>(node["kind"], "prior kind");
    auto allow_only = [&](const std::set<std::string>& keys) {
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (key != "kind" && !keys.count(key)) fail(kv.first, "key '" + key + "' does not apply to prior " + kind);
      }
    };
    if (kind == "gamma") {
      allow_only({"shape", "rate"});
      GammaPrior p;
      if (node["shape"]) p.shape = positive_double(node["shape"], "prior shape");
      if (node["rate"]) p.rate = positive_double(node["rate"], "prior rate");
      return p;
    }
    if (kind == "dim_scaled_lognormal") {
      allow_only({"mu0", "sigma0"});
      DimScaledLogNormalPrior p{defaults_.dsp_mu0, defaults_.dsp_sigma0, d};
      if (node["mu0"]) p.mu0 = scalar<double>(node["mu0"], "prior mu0");
      if (node["sigma0"]) p.sigma0 = positive_double(node["sigma0"], "prior sigma0");
      return p;
    }
    if (kind == "uniform") {
      allow_only({"lo", "hi"});
      UniformBoxPrior p;
      if (node["lo"]) p.lo = positive_double(node["lo"], "prior lo");
      if (node["hi"]) p.hi = positive_double(node["hi"], "prior hi");
      if (!(p.lo < p.hi)) fail(node, "prior lo must be below hi");
      return p;
    }
    fail(node["kind"], "unknown prior kind '" + kind + "'");
  }

  MethodEntry method(const YAML::Node& node, Eigen::Index d) const {
    MethodEntry entry;
    entry.line = node.Mark().line + 1;
    if (node.IsScalar()) {
      entry.config = preset_config(preset(node), d, defaults_);
      return entry;
    }
    check_keys(node,
               {"preset", "name", "init", "prior", "kernel", "raasp", "restarts", "max_fit_steps",
                "warm_start", "raw_samples", "num_starts", "max_acq_steps",
                "boltzmann_temperature", "raasp_sigma", "raasp_subset_dims"},
               "method");
    if (!node["preset"]) fail(node, "method entry needs a 'preset' to start from");
    MethodConfig m = preset_config(preset(node["preset"]), d, defaults_);
    if (node["name"]) {
      m.name = scalar<std::string>(node["name"], "method name");
    } else if (node.size() > 1) {
      fail(node, "a method with overrides needs its own 'name'");
    }
    if (node["init"]) m.fit.scheme = init_scheme(node["init"]);
    if (node["prior"]) m.fit.prior = prior(node["prior"], d);
    if (node["kernel"]) {
      try {
        m.fit.kernel = kernel_kind_from_string(scalar<std::string>(node["kernel"], "kernel"));
      } catch (const ConfigError& e) {
        fail(node["kernel"], e.what());
      }
    }
    if (node["raasp"]) m.acq.raasp_enabled = scalar<bool>(node["raasp"], "raasp");
    if (node["restarts"]) m.fit.restarts = positive_int(node["restarts"], "restarts");
    if (node["max_fit_steps"]) m.fit.max_steps = positive_int(node["max_fit_steps"], "max_fit_steps");
    if (node["warm_start"]) m.warm_start = scalar<bool>(node["warm_start"], "warm_start");
    if (node["raw_samples"]) m.acq.raw_samples = positive_int(node["raw_samples"], "raw_samples");
    if (node["num_starts"]) m.acq.num_starts = positive_int(node["num_starts"], "num_starts");
    if (node["max_acq_steps"]) m.acq.max_acq_steps = positive_int(node["max_acq_steps"], "max_acq_steps");
    if (node["boltzmann_temperature"]) {
      m.acq.boltzmann_temperature = positive_double(node["boltzmann_temperature"], "boltzmann_temperature");
    }
    if (node["raasp_sigma"]) m.acq.raasp.sigma = positive_double(node["raasp_sigma"], "raasp_sigma");
    if (node["raasp_subset_dims"]) {
      m.acq.raasp.subset_dims = positive_double(node["raasp_subset_dims"], "raasp_subset_dims");
    }
    try {
      m.fit.validate();
      m.acq.validate();
    } catch (const ConfigError& e) {
      fail(node, e.what());
    }
    entry.config = std::move(m);
    return entry;
  }

  MethodPreset preset(const YAML::Node& node) const {
    try {
      return preset_from_string(scalar<std::string>(node, "preset"));
    } catch (const ConfigError& e) {
      fail(node, e.what());
    }
  }

  std::vector<std::uint64_t> seeds(const YAML::Node& node) const {
    std::vector<std::uint64_t> out;
    if (node.IsSequence()) {
      if (node.size() == 0) fail(node, "seeds must not be empty");
      for (const auto& s : node) out.push_back(scalar<std::uint64_t>(s, "seed"));
    } else if (node.IsMap()) {
      check_keys(node, {"start", "count"}, "seeds");
      const auto start = node["start"] ? scalar<std::uint64_t>(node["start"], "seeds.start") : 0;
      if (!node["count"]) fail(node, "seeds needs a 'count'");
      const int count = positive_int(node["count"], "seeds.count");
      for (int i = 0; i < count; ++i) out.push_back(start + static_cast<std::uint64_t>(i));
    } else {
      out.push_back(scalar<std::uint64_t>(node, "seed"));
    }
    std::set<std::uint64_t> seen;
    for (auto s : out) {
      if (!seen.insert(s).second) fail(node, "seed " + std::to_string(s) + " is listed twice");
    }
    return out;
  }

  ExperimentConfig parse(const std::string& text) const {
    YAML::Node root;
    try {
      root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
      throw ConfigError(source_ + ":" + std::to_string(e.mark.line + 1) + ":" +
                        std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(source_ + ": top level must be a mapping");
    check_keys(root,
               {"benchmark", "methods", "budget", "doe_size", "seeds", "output_dir",
                "random_search", "export_csv"},
               "experiment");

    ExperimentConfig cfg;
    cfg.source = source_;
    if (!root["benchmark"]) fail(root, "missing required key 'benchmark'");
    cfg.benchmark = scalar<std::string>(root["benchmark"], "benchmark");
    Eigen::Index d = 0;
    try {
      d = make_benchmark(cfg.benchmark)->dim();
    } catch (const ConfigError& e) {
      fail(root["benchmark"], e.what());
    }

    if (root["budget"]) cfg.budget = positive_int(root["budget"], "budget");
    if (root["doe_size"]) cfg.doe_size = positive_int(root["doe_size"], "doe_size");
    if (cfg.budget <= cfg.doe_size) {
      fail(root["budget"] ? root["budget"] : root, "budget must exceed doe_size");
    }
    if (root["seeds"]) cfg.seeds = seeds(root["seeds"]);
    if (root["output_dir"]) cfg.output_dir = scalar<std::string>(root["output_dir"], "output_dir");
    if (root["random_search"]) cfg.random_search = scalar<bool>(root["random_search"], "random_search");
    if (root["export_csv"]) cfg.export_csv = scalar<bool>(root["export_csv"], "export_csv");

    if (root["methods"]) {
      const YAML::Node methods = root["methods"];
      if (!methods.IsSequence()) fail(methods, "methods must be a list");
      std::set<std::string> names;
      for (const auto& m : methods) {
        MethodEntry e = method(m, d);
        for (char c : e.config.name) {
          if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            fail(m, "method name '" + e.config.name + "' may only use letters, digits, '_', '-' and '.'");
          }
        }
        if (e.config.name == "random_search") fail(m, "method name 'random_search' is reserved");
        if (!names.insert(e.config.name).second) {
          fail(m, "method '" + e.config.name + "' is listed twice");
        }
        cfg.methods.push_back(std::move(e));
      }
    }
    if (cfg.methods.empty() && !cfg.random_search) {
      fail(root, "nothing to run: give 'methods' or set 'random_search: true'");
    }

    cfg.resolved = {{"benchmark", cfg.benchmark},
                    {"budget", cfg.budget},
                    {"doe_size", cfg.doe_size},
                    {"seeds", cfg.seeds},
                    {"random_search", cfg.random_search},
                    {"export_csv", cfg.export_csv},
                    {"source", source_}};
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& m : cfg.methods) methods.push_back(to_json(m.config));
    cfg.resolved["methods"] = methods;
    return cfg;
  }

 private:
  std::string source_;
  const MethodDefaults& defaults_;
};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const MethodDefaults& defaults) {
  return Parser(source, defaults).parse(text);
}

ExperimentConfig load_experiment_config(const std::string& path, const MethodDefaults& defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path, defaults);
}

}  // namespace hdbo::cli
