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

#include "hdbo/benchmarks.hpp"

#include "hdbo/error.hpp"
#include "hdbo/kernel.hpp"
#include "hdbo/rng.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>
#include <string_view>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hdbo {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class Levy final : public Benchmark {
 public:
  explicit Levy(Eigen::Index d)
      : Benchmark("levy:" + std::to_string(d), Vector::Constant(d, -10.0), Vector::Constant(d, 10.0)) {}
  std::map<std::string, std::string> metadata() const override {
    auto m = Benchmark::metadata();
    m["formula"] =
        "w_i = 1 + (x_i - 1)/4; f = sin^2(pi w_1) + sum_{i<d} (w_i - 1)^2 [1 + 10 sin^2(pi w_i + 1)]"
        " + (w_d - 1)^2 [1 + sin^2(2 pi w_d)]";
    return m;
  }

 protected:
  double evaluate_natural(const Vector& x) override { return levy_value(x); }
};

class Schwefel final : public Benchmark {
 public:
  explicit Schwefel(Eigen::Index d)
      : Benchmark("schwefel:" + std::to_string(d), Vector::Constant(d, -500.0),
                  Vector::Constant(d, 500.0)) {}
  std::map<std::string, std::string> metadata() const override {
    auto m = Benchmark::metadata();
    m["formula"] = "f = 418.9829 d - sum_i x_i sin(sqrt(|x_i|))";
    return m;
  }

 protected:
  double evaluate_natural(const Vector& x) override { return schwefel_value(x); }
};

class Griewank final : public Benchmark {
 public:
  explicit Griewank(Eigen::Index d)
      : Benchmark("griewank:" + std::to_string(d), Vector::Constant(d, -600.0),
                  Vector::Constant(d, 600.0)) {}
  std::map<std::string, std::string> metadata() const override {
    auto m = Benchmark::metadata();
    m["formula"] = "f = sum_i x_i^2 / 4000 - prod_i cos(x_i / sqrt(i)) + 1";
    return m;
  }

 protected:
  double evaluate_natural(const Vector& x) override { return griewank_value(x); }
};

class FunctionBenchmark final : public Benchmark {
 public:
  FunctionBenchmark(std::string id, Vector lower, Vector upper,
                    std::function<double(const Vector&)> fn)
      : Benchmark(std::move(id), std::move(lower), std::move(upper)), fn_(std::move(fn)) {}

 protected:
  double evaluate_natural(const Vector& x) override { return fn_(x); }

 private:
  std::function<double(const Vector&)> fn_;
};

void check_dim(Eigen::Index d) {
  if (d < 1) throw ContractError("benchmark dimension must be >= 1");
}

}  // namespace

// ---------------------------------------------------------------------------

Benchmark::Benchmark(std::string id, Vector lower, Vector upper, bool noise_free)
    : id_(std::move(id)), lower_(std::move(lower)), upper_(std::move(upper)), noise_free_(noise_free) {
  if (lower_.size() != upper_.size() || lower_.size() < 1) {
    throw ContractError("benchmark bounds must be nonempty and of equal size");
  }
  if ((upper_.array() <= lower_.array()).any()) {
    throw ContractError("benchmark bounds must satisfy lower < upper");
  }
}

Vector Benchmark::to_natural(const Vector& unit) const {
  Vector x(unit.size());
  for (Eigen::Index i = 0; i < unit.size(); ++i) {
    // (1 - u) lo + u hi hits both endpoints exactly
    x(i) = (1.0 - unit(i)) * lower_(i) + unit(i) * upper_(i);
  }
  return x;
}

double Benchmark::evaluate(const Vector& unit) {
  if (unit.size() != dim()) {
    throw ContractError("benchmark " + id_ + " expects dimension " + std::to_string(dim()));
  }
  if ((unit.array() < 0.0).any() || (unit.array() > 1.0).any()) {
    throw ContractError("benchmark " + id_ + " queried outside the unit cube");
  }
  return evaluate_natural(to_natural(unit));
}

std::map<std::string, std::string> Benchmark::metadata() const {
  std::map<std::string, std::string> m;
  m["id"] = id_;
  m["dim"] = std::to_string(dim());
  m["noise_free"] = noise_free_ ? "true" : "false";
  return m;
}

double levy_value(const Vector& x) {
  const Eigen::Index d = x.size();
  const double pi = std::numbers::pi;
  auto w = [&](Eigen::Index i) { return 1.0 + (x(i) - 1.0) / 4.0; };
  const double s0 = std::sin(pi * w(0));
  double f = s0 * s0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double wi = w(i);
    const double s = std::sin(pi * wi + 1.0);
    f += (wi - 1.0) * (wi - 1.0) * (1.0 + 10.0 * s * s);
  }
  const double wd = w(d - 1);
  const double sd = std::sin(2.0 * pi * wd);
  f += (wd - 1.0) * (wd - 1.0) * (1.0 + sd * sd);
  return f;
}

double schwefel_value(const Vector& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * std::sin(std::sqrt(std::abs(x(i))));
  return 418.9829 * static_cast<double>(x.size()) - s;
}

double griewank_value(const Vector& x) {
  double sum = 0.0;
  double prod = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += x(i) * x(i) / 4000.0;
    prod *= std::cos(x(i) / std::sqrt(static_cast<double>(i + 1)));
  }
  return sum - prod + 1.0;
}

BenchmarkPtr levy(Eigen::Index d) {
  check_dim(d);
  return std::make_unique<Levy>(d);
}

BenchmarkPtr schwefel(Eigen::Index d) {
  check_dim(d);
  return std::make_unique<Schwefel>(d);
}

BenchmarkPtr griewank(Eigen::Index d) {
  check_dim(d);
  return std::make_unique<Griewank>(d);
}

// ---------------------------------------------------------------------------

GpPriorSample::GpPriorSample(Eigen::Index d, double lengthscale, KernelKind kind,
                             std::uint64_t seed, double signal_variance)
    : Benchmark("gp_prior:" + std::to_string(d) + ":lengthscale=" + fmt_double(lengthscale) +
                    ":kernel=" + std::string(to_string(kind)) + ":seed=" + std::to_string(seed),
                Vector::Zero(d), Vector::Ones(d)),
      lengthscale_(lengthscale),
      kind_(kind),
      signal_(signal_variance),
      jitter_(1e-8 * signal_variance),
      rng_(make_rng(seed, 0x6B51)) {
  if (!(lengthscale > 0.0)) throw ContractError("gp_prior_sample: length scale must be positive");
  if (!(signal_variance > 0.0)) throw ContractError("gp_prior_sample: signal variance must be positive");
}

double GpPriorSample::evaluate_natural(const Vector& x) {
  std::vector<double> key(x.data(), x.data() + x.size());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const Vector xs = x / lengthscale_;
  const std::size_t n = values_.size();
  // Forward solve L v = k(X, x).
  std::vector<double> v(n);
  double vv = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = kernel_from_r(kind_, (xs - scaled_[i]).squaredNorm(), signal_);
    const auto& row = chol_[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * v[j];
    v[i] = s / row[i];
    vv += v[i] * v[i];
    mean += v[i] * whitened_[i];
  }
  const double cond_var = signal_ + jitter_ - vv;
  if (!(cond_var > 0.0)) {
    throw BenchmarkError("gp_prior_sample: conditioning became singular after " +
                         std::to_string(n) + " queries");
  }
  const double diag = std::sqrt(cond_var);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double z = normal(rng_);
  const double value = mean + diag * z;

  v.push_back(diag);
  chol_.push_back(std::move(v));
  whitened_.push_back(z);
  scaled_.push_back(xs);
  values_.push_back(value);
  cache_.emplace(std::move(key), value);
  return value;
}

std::map<std::string, std::string> GpPriorSample::metadata() const {
  auto m = Benchmark::metadata();
  m["lengthscale"] = fmt_double(lengthscale_);
  m["kernel"] = std::string(to_string(kind_));
  m["signal_variance"] = fmt_double(signal_);
  m["jitter"] = fmt_double(jitter_);
  return m;
}

BenchmarkPtr gp_prior_sample(Eigen::Index d, double lengthscale, KernelKind kind,
                             std::uint64_t seed) {
  check_dim(d);
  return std::make_unique<GpPriorSample>(d, lengthscale, kind, seed);
}

// ---------------------------------------------------------------------------

ExternalBenchmark::ExternalBenchmark(std::string command, Vector lower, Vector upper)
    : Benchmark("external:" + std::to_string(lower.size()), std::move(lower), std::move(upper)),
      command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("external benchmark: empty command");
}

std::map<std::string, std::string> ExternalBenchmark::metadata() const {
  auto m = Benchmark::metadata();
  m["command"] = command_;
  return m;
}

namespace {

struct ChildResult {
  int status = 0;
  std::string out;
  std::string err;
};

ChildResult run_child(const std::string& command, const std::string& input) {
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    throw BenchmarkError(std::string("external benchmark: pipe failed: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) throw BenchmarkError(std::string("external benchmark: fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  close(err_pipe[1]);

  // A child that exits without reading stdin must not kill us with SIGPIPE.
  struct sigaction ignore {};
  struct sigaction previous {};
  ignore.sa_handler = SIG_IGN;
  sigaction(SIGPIPE, &ignore, &previous);

  ChildResult res;
  std::size_t written = 0;
  int wfd = in_pipe[1];
  fcntl(wfd, F_SETFL, fcntl(wfd, F_GETFL) | O_NONBLOCK);
  bool out_open = true, err_open = true;
  char buf[4096];
  while (out_open || err_open) {
    std::vector<pollfd> fds;
    if (out_open) fds.push_back({out_pipe[0], POLLIN, 0});
    if (err_open) fds.push_back({err_pipe[0], POLLIN, 0});
    if (wfd >= 0) fds.push_back({wfd, POLLOUT, 0});
    if (poll(fds.data(), fds.size(), -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (const auto& p : fds) {
      if (p.revents == 0) continue;
      if (p.fd == wfd) {
        const ssize_t k = write(wfd, input.data() + written, input.size() - written);
        if (k > 0) written += static_cast<std::size_t>(k);
        if (k < 0 || written == input.size()) {
          close(wfd);
          wfd = -1;
        }
        continue;
      }
      const ssize_t k = read(p.fd, buf, sizeof(buf));
      if (k <= 0) {
        close(p.fd);
        (p.fd == out_pipe[0] ? out_open : err_open) = false;
      } else {
        (p.fd == out_pipe[0] ? res.out : res.err).append(buf, static_cast<std::size_t>(k));
      }
    }
  }
  if (wfd >= 0) close(wfd);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  sigaction(SIGPIPE, &previous, nullptr);
  res.status = status;
  return res;
}

}  // namespace

double ExternalBenchmark::evaluate_natural(const Vector& x) {
  std::string line;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) line += ' ';
    line += fmt_double(x(i));
  }
  line += '\n';
  const ChildResult res = run_child(command_, line);
  const std::string captured = res.out + res.err;
  if (!WIFEXITED(res.status) || WEXITSTATUS(res.status) != 0) {
    throw BenchmarkError("external benchmark '" + command_ + "' exited with status " +
                             std::to_string(WIFEXITED(res.status) ? WEXITSTATUS(res.status) : -1),
                         captured);
  }
  std::istringstream is(res.out);
  double value = 0.0;
  std::string extra;
  if (!(is >> value) || (is >> extra) || !std::isfinite(value)) {
    throw BenchmarkError("external benchmark '" + command_ + "' produced unparsable output", captured);
  }
  return value;
}

BenchmarkPtr external(std::string command, Vector lower, Vector upper) {
  return std::make_unique<ExternalBenchmark>(std::move(command), std::move(lower), std::move(upper));
}

BenchmarkPtr partially_active(Eigen::Index d, Eigen::Index active, double center) {
  check_dim(d);
  if (active < 0 || active > d) throw ContractError("partially_active: active count out of range");
  auto fn = [active, center](const Vector& x) {
    return (x.head(active).array() - center).square().sum();
  };
  return function_benchmark("partially_active:" + std::to_string(d) + ":active=" + std::to_string(active) +
                                ":center=" + fmt_double(center),
                            Vector::Zero(d), Vector::Ones(d), fn);
}

BenchmarkPtr function_benchmark(std::string id, Vector lower, Vector upper,
                                std::function<double(const Vector&)> fn) {
  return std::make_unique<FunctionBenchmark>(std::move(id), std::move(lower), std::move(upper),
                                             std::move(fn));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("benchmark id: cannot parse " + what + " '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& what) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("benchmark id: cannot parse " + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

BenchmarkPtr make_benchmark(const std::string& spec) {
  // external commands may themselves contain ':' so everything after cmd= is kept
  std::string head = spec;
  std::string command;
  if (const auto pos = spec.find(":cmd="); pos != std::string::npos) {
    head = spec.substr(0, pos);
    command = spec.substr(pos + 5);
  }
  const auto parts = split(head, ':');
  if (parts.size() < 2) throw ConfigError("benchmark id '" + spec + "' must look like name:dim");
  const std::string& name = parts[0];
  const long long d = parse_int(parts[1], "dimension");
  if (d < 1) throw ConfigError("benchmark id '" + spec + "': dimension must be >= 1");

  std::map<std::string, std::string> kv;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ConfigError("benchmark id: expected key=value, got '" + parts[i] + "'");
    kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  auto take = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto finish = [&](BenchmarkPtr b) {
    if (!kv.empty()) throw ConfigError("benchmark id '" + spec + "': unknown key '" + kv.begin()->first + "'");
    return b;
  };

  if (name == "levy") return finish(levy(d));
  if (name == "schwefel") return finish(schwefel(d));
  if (name == "griewank") return finish(griewank(d));
  if (name == "gp_prior") {
    const double ls = parse_double(take("lengthscale", "0.5"), "lengthscale");
    const KernelKind kind = kernel_kind_from_string(take("kernel", "matern52"));
    const auto seed = static_cast<std::uint64_t>(parse_int(take("seed", "0"), "seed"));
    return finish(gp_prior_sample(d, ls, kind, seed));
  }
  if (name == "partially_active") {
    const long long active = parse_int(take("active", std::to_string(d / 2)), "active");
    const double center = parse_double(take("center", "0.3"), "center");
    return finish(partially_active(d, active, center));
  }
  if (name == "external") {
    if (command.empty()) throw ConfigError("external benchmark id needs a trailing :cmd=<command>");
    const double lo = parse_double(take("lo", "0"), "lo");
    const double hi = parse_double(take("hi", "1"), "hi");
    return finish(external(command, Vector::Constant(d, lo), Vector::Constant(d, hi)));
  }
  throw ConfigError("unknown benchmark '" + name + "'");
}

std::vector<std::string> registered_benchmarks() {
  return {"levy", "schwefel", "griewank", "gp_prior", "partially_active", "external"};
}

}  // namespace hdbo
