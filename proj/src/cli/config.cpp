// Copyright 2026 The GD-SEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <string_view>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gdsec/cli.hpp"

namespace gdsec::cli {
namespace {

constexpr std::array<std::string_view, 35> kKnownKeys = {
    "objective.family",   "objective.lambda",     "data.generator",
    "data.workers",       "data.per_worker_n",    "data.dim",
    "data.seed",          "data.file",            "data.format",
    "data.standardize",   "strategy.name",        "strategy.j",
    "strategy.xi_tilde",  "strategy.s",           "strategy.batch",
    "params.alpha",       "params.step",          "params.step_lambda",
    "params.beta",        "params.xi",            "params.xi_over_m",
    "params.xi_mode",     "params.iterations",    "schedule.policy",
    "schedule.fraction",  "run.seed",             "run.out",
    "run.bits",           "run.compare_gd",       "run.target_error",
    "run.f_star_iterations", "run.f_star",        "sweep.axis",
    "sweep.values",       "plot.axis",
};

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Reader {
 public:
  explicit Reader(const ConfigMap& m) : m_(m) {}

  bool has(const std::string& key) const { return m_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = m_.find(key);
    return it == m_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    const auto it = m_.find(key);
    if (it == m_.end()) return fallback;
    double v = 0.0;
    const std::string& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw InvalidArgument(key + ": expected a number, got '" + s + "'");
    }
    return v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    const auto it = m_.find(key);
    if (it == m_.end()) return fallback;
    std::uint64_t v = 0;
    const std::string& s = it->second;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw InvalidArgument(key + ": expected a nonnegative integer, got '" +
                            s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const auto it = m_.find(key);
    if (it == m_.end()) return fallback;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw InvalidArgument(key + ": expected a boolean, got '" + s + "'");
  }

 private:
  const ConfigMap& m_;
};

}  // namespace

ConfigMap parse_config_text(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
  ConfigMap out;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw InvalidArgument("config: key '" + section +
                            "' must live inside a [section]");
    }
    for (const auto& [key, value] : body) {
      out[section + "." + key] = trimmed(value.get_value<std::string>());
    }
  }
  for (const auto& [key, value] : out) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      throw InvalidArgument("config: unknown key '" + key + "'");
    }
  }
  return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config '" + path.string() + "'");
  return parse_config_text(in);
}

void apply_override(ConfigMap& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw InvalidArgument("override '" + assignment + "' is not key=value");
  }
  const std::string key = trimmed(std::string_view(assignment).substr(0, eq));
  if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
    throw InvalidArgument("override: unknown key '" + key + "'");
  }
  config[key] = trimmed(std::string_view(assignment).substr(eq + 1));
}

ExperimentConfig ExperimentConfig::from_map(const ConfigMap& config) {
  const Reader r(config);
  ExperimentConfig c;
  c.family = parse_family(r.str("objective.family", "ridge"));
  c.lambda = r.str("objective.lambda", "0");

  c.seed = r.integer("run.seed", 0);
  c.workers = r.integer("data.workers", 1);
  const bool has_gen = r.has("data.generator");
  const bool has_file = r.has("data.file");
  if (has_gen == has_file) {
    throw InvalidArgument(
        "config: set exactly one of data.generator and data.file");
  }
  if (has_gen) {
    GeneratorSpec g;
    g.kind = parse_generator(r.str("data.generator", ""));
    g.workers = c.workers;
    g.per_worker_n = r.integer("data.per_worker_n", 50);
    g.dim = r.integer("data.dim", 300);
    g.seed = r.integer("data.seed", c.seed);
    g.validate();
    c.generator = g;
  } else {
    c.data_file = r.str("data.file", "");
    c.data_format = r.str("data.format", "svm");
    if (c.data_format != "svm" && c.data_format != "csv") {
      throw InvalidArgument("data.format must be svm or csv");
    }
    c.data_dim = r.integer("data.dim", 0);
    c.standardize = r.boolean("data.standardize", false);
  }

  c.strategy.kind = parse_strategy(r.str("strategy.name", "gdsec"));
  c.strategy.j = r.integer("strategy.j", 1);
  c.strategy.xi_tilde = r.real("strategy.xi_tilde", 0.0);
  c.strategy.s = static_cast<std::uint32_t>(r.integer("strategy.s", 256));
  c.strategy.batch = r.integer("strategy.batch", 0);

  c.alpha = r.str("params.alpha", "1/L");
  c.step_kind = parse_step_kind(r.str("params.step", "constant"));
  c.step_lambda = r.real("params.step_lambda", 0.0);
  c.beta = r.real("params.beta", 1.0);
  if (r.has("params.xi") && r.has("params.xi_over_m")) {
    throw InvalidArgument("config: set params.xi or params.xi_over_m, not both");
  }
  c.xi = r.has("params.xi_over_m")
             ? r.real("params.xi_over_m", 0.0) * static_cast<double>(c.workers)
             : r.real("params.xi", 0.0);
  const std::string mode = r.str("params.xi_mode", "uniform");
  if (mode == "uniform") {
    c.xi_mode = XiMode::kUniform;
  } else if (mode == "coordinate_scaled") {
    c.xi_mode = XiMode::kCoordinateScaled;
  } else {
    throw InvalidArgument("params.xi_mode must be uniform or coordinate_scaled");
  }
  c.iterations = r.integer("params.iterations", 100);
  if (c.iterations == 0) throw InvalidArgument("params.iterations must be >= 1");

  const std::string policy = r.str("schedule.policy", "full");
  if (policy == "full") {
    c.schedule = Schedule::full();
  } else if (policy == "round_robin") {
    c.schedule = Schedule::round_robin(r.real("schedule.fraction", 1.0));
  } else {
    throw InvalidArgument("schedule.policy must be full or round_robin");
  }
  c.schedule.rng_seed = c.seed;

  c.out_dir = r.str("run.out", "out");
  c.bits = parse_bit_scheme(r.str("run.bits", "ledger"));
  c.compare_gd = r.boolean("run.compare_gd", false);
  c.target_error = r.real("run.target_error", 1e-6);
  c.f_star_iterations = r.integer("run.f_star_iterations", 0);
  if (r.has("run.f_star")) c.f_star = r.real("run.f_star", 0.0);
  return c;
}

}  // namespace gdsec::cli
