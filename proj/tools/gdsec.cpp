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

// gdsec: run, sweep, check-params, gen-data, plot.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gdsec/cli.hpp"

namespace {

using gdsec::cli::ConfigMap;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> strategy;
  std::optional<std::string> alpha;
  std::optional<double> beta;
  std::optional<double> xi;
  std::optional<double> xi_over_m;
  std::optional<std::size_t> iterations;
  bool compare_gd = false;
  std::vector<std::string> sets;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "INI experiment file")->required();
    app->add_option("--seed", seed, "RNG seed (run.seed)");
    app->add_option("--out", out, "output directory (run.out)");
    app->add_option("--strategy", strategy, "strategy.name override");
    app->add_option("--alpha", alpha, "step size, a number or c/L");
    app->add_option("--beta", beta, "state smoothing beta");
    app->add_option("--xi", xi, "threshold xi");
    app->add_option("--xi-over-m", xi_over_m, "threshold xi / M");
    app->add_option("--iterations", iterations, "number of rounds K");
    app->add_flag("--compare-gd", compare_gd, "also run GD and report savings");
    app->add_option("--set", sets, "section.key=value override")
        ->take_all();
  }

  ConfigMap resolve() const {
    ConfigMap m = gdsec::cli::read_config_file(config);
    auto put = [&](const std::string& key, const std::string& value) {
      gdsec::cli::apply_override(m, key + "=" + value);
    };
    for (const auto& s : sets) gdsec::cli::apply_override(m, s);
    if (seed) put("run.seed", std::to_string(*seed));
    if (out) put("run.out", *out);
    if (strategy) put("strategy.name", *strategy);
    if (alpha) put("params.alpha", *alpha);
    if (beta) put("params.beta", gdsec::format_real(*beta));
    if (xi) {
      m.erase("params.xi_over_m");
      put("params.xi", gdsec::format_real(*xi));
    }
    if (xi_over_m) {
      m.erase("params.xi");
      put("params.xi_over_m", gdsec::format_real(*xi_over_m));
    }
    if (iterations) put("params.iterations", std::to_string(*iterations));
    if (compare_gd) put("run.compare_gd", "true");
    return m;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(',', start);
    const std::string item = s.substr(start, pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed gradient descent with sparsification and error "
               "correction: simulator and analysis tools"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run_flags.attach(run);

  CommonFlags sweep_flags;
  std::string axis;
  std::string values;
  CLI::App* sweep = app.add_subcommand("sweep", "run a one-axis grid");
  sweep_flags.attach(sweep);
  sweep->add_option("--axis", axis, "config key to vary, e.g. params.xi_over_m");
  sweep->add_option("--values", values, "comma-separated grid values");

  gdsec::TheoryParams tp;
  double eps = 1e-6;
  std::optional<double> special_delta;
  double xi_fraction = 1.0;
  bool default_family = false;
  CLI::App* check = app.add_subcommand("check-params",
                                       "evaluate the convergence conditions");
  check->add_option("--alpha", tp.alpha, "step size")->required();
  check->add_option("--beta1", tp.beta1, "Lyapunov weight beta1");
  check->add_option("--beta2", tp.beta2, "Lyapunov weight beta2");
  check->add_option("--rho", tp.rho, "Young parameter rho");
  check->add_option("--rho2", tp.rho2, "Young parameter rho2");
  check->add_option("--xi", tp.xi_max, "largest threshold xi");
  check->add_option("--L", tp.L, "smoothness constant")->required();
  check->add_option("--mu", tp.mu, "strong convexity constant");
  check->add_option("--eps", eps, "target accuracy for the complexity");
  check->add_option("--special-delta", special_delta,
                    "use alpha = (1-delta)/L with the matching beta1, beta2, xi");
  check->add_option("--xi-fraction", xi_fraction,
                    "with --special-delta: xi^2 as a fraction of its maximum");
  check->add_flag("--default-family", default_family,
                  "beta1 = (1-alpha L)/(2 alpha), beta2 = beta1/2, xi at bound");

  gdsec::GeneratorSpec gen;
  std::string gen_kind = "logistic_blocks";
  std::string gen_out = "data.csv";
  CLI::App* gen_data = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen_data->add_option("--generator", gen_kind,
                       "logistic_blocks | coord_lipschitz | gaussian_ridge");
  gen_data->add_option("--workers", gen.workers, "number of workers M");
  gen_data->add_option("--per-worker-n", gen.per_worker_n, "samples per worker");
  gen_data->add_option("--dim", gen.dim, "feature dimension d");
  gen_data->add_option("--seed", gen.seed, "generator seed");
  gen_data->add_option("--out", gen_out, "output CSV path");

  std::vector<std::string> traces;
  std::string plot_axis = "iterations";
  std::string plot_out = "plot.svg";
  CLI::App* plot = app.add_subcommand("plot", "render traces to SVG");
  plot->add_option("traces", traces, "trace.csv files")->required();
  plot->add_option("--axis", plot_axis, "iterations | bits");
  plot->add_option("--out", plot_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const ConfigMap m = run_flags.resolve();
      return gdsec::cli::cmd_run(gdsec::cli::ExperimentConfig::from_map(m),
                                 std::cout);
    }
    if (*sweep) {
      ConfigMap m = sweep_flags.resolve();
      if (axis.empty()) axis = m.count("sweep.axis") ? m.at("sweep.axis") : "";
      if (values.empty() && m.count("sweep.values")) values = m.at("sweep.values");
      if (axis.empty()) throw gdsec::InvalidArgument("sweep: --axis is required");
      return gdsec::cli::cmd_sweep(gdsec::cli::ExperimentConfig::from_map(m), m,
                                   axis, split_list(values), std::cout);
    }
    if (*check) {
      if (special_delta) {
        tp = gdsec::special_choice_params(*special_delta, tp.L, tp.mu,
                                          xi_fraction);
      } else if (default_family) {
        tp = gdsec::default_monitor_params(tp.alpha, tp.L, tp.mu);
      }
      return gdsec::cli::cmd_check_params(tp, eps, std::cout);
    }
    if (*gen_data) {
      gen.kind = gdsec::parse_generator(gen_kind);
      gen.validate();
      return gdsec::cli::cmd_gen_data(gen, gen_out, std::cout);
    }
    if (*plot) {
      std::vector<std::filesystem::path> paths(traces.begin(), traces.end());
      return gdsec::cli::cmd_plot(paths, gdsec::cli::parse_plot_axis(plot_axis),
                                  plot_out, std::cout);
    }
  } catch (const gdsec::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gdsec::cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gdsec::cli::kFailure;
  }
  return gdsec::cli::kUsage;
}
