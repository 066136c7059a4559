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

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "gdsec/cli.hpp"

namespace gdsec::cli {
namespace {

// "c/<symbol>" or a plain number.
double resolve_ratio(const std::string& expr, char symbol, double denominator,
                     const char* what) {
  const auto slash = expr.find('/');
  if (slash != std::string::npos && slash + 2 == expr.size() &&
      expr[slash + 1] == symbol) {
    double c = 0.0;
    const auto res = std::from_chars(expr.data(), expr.data() + slash, c);
    if (res.ec != std::errc() || res.ptr != expr.data() + slash) {
      throw InvalidArgument(std::string(what) + ": bad expression '" + expr + "'");
    }
    return c / denominator;
  }
  double v = 0.0;
  const auto res = std::from_chars(expr.data(), expr.data() + expr.size(), v);
  if (res.ec != std::errc() || res.ptr != expr.data() + expr.size()) {
    throw InvalidArgument(std::string(what) + ": bad value '" + expr + "'");
  }
  return v;
}

void write_trace_file(const std::filesystem::path& path, const RunResult& r,
                      std::size_t workers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  write_trace_csv(out, r.trace, workers);
}

std::optional<std::uint64_t> bits_at(std::span<const RoundTrace> trace,
                                     double target) {
  const auto row = first_reaching(trace, target);
  if (!row) return std::nullopt;
  return trace[*row].cum_bits_total;
}

std::string sweep_key(const std::string& axis) {
  if (axis.find('.') != std::string::npos) return axis;
  for (const char* section : {"params", "strategy", "schedule", "objective"}) {
    const std::string key = std::string(section) + "." + axis;
    ConfigMap probe;
    try {
      apply_override(probe, key + "=0");
      return key;
    } catch (const InvalidArgument&) {
    }
  }
  throw InvalidArgument("sweep: unknown axis '" + axis + "'");
}

}  // namespace

PreparedRun prepare(const ExperimentConfig& c) {
  PreparedRun p;
  std::vector<LocalDataset> data;
  if (c.generator) {
    data = generate(*c.generator);
  } else if (c.data_format == "csv") {
    data = load_csv(*c.data_file, c.workers, c.standardize);
  } else {
    data = load_svm_format(*c.data_file, c.workers, c.data_dim, c.standardize);
  }
  const auto n_total = static_cast<double>(data.front().n_total);
  p.problem.spec = ObjectiveSpec{c.family,
                                 resolve_ratio(c.lambda, 'N', n_total,
                                               "objective.lambda"),
                                 c.workers};
  p.problem.data = std::move(data);
  p.problem.validate();
  p.smooth = smoothness(p.problem.spec, p.problem.data);

  const std::size_t d = p.problem.dim();
  p.hp.alpha = resolve_ratio(c.alpha, 'L', p.smooth.L_global, "params.alpha");
  p.hp.beta = c.beta;
  p.hp.workers = c.workers;
  p.hp.iterations = c.iterations;
  p.hp.xi.assign(d, c.xi);
  if (c.xi_mode == XiMode::kCoordinateScaled) {
    for (std::size_t i = 0; i < d; ++i) {
      if (!(p.smooth.L_coord[i] > 0.0)) {
        throw InvalidArgument("coordinate_scaled thresholds need L_i > 0");
      }
      p.hp.xi[i] = c.xi / p.smooth.L_coord[i];
    }
  }
  p.hp.validate(d);

  p.options.strategy = c.strategy;
  p.options.schedule = c.schedule;
  p.options.step_kind = c.step_kind;
  p.options.step_lambda = c.step_lambda;
  p.options.bits = c.bits;
  p.options.seed = c.seed;
  p.options.L_worker = p.smooth.L_worker;

  if (c.f_star) {
    p.f_star = *c.f_star;
  } else {
    const std::size_t ref =
        c.f_star_iterations != 0 ? c.f_star_iterations : 10 * c.iterations;
    p.f_star = estimate_f_star(p.problem, ref);
  }
  return p;
}

std::optional<std::size_t> first_reaching(std::span<const RoundTrace> trace,
                                          double target) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].objective_error <= target) return i;
  }
  return std::nullopt;
}

std::optional<double> savings_vs_gd(std::span<const RoundTrace> strategy,
                                    std::span<const RoundTrace> gd,
                                    double target) {
  const auto a = bits_at(strategy, target);
  const auto b = bits_at(gd, target);
  if (!a || !b || *b == 0) return std::nullopt;
  return 1.0 - static_cast<double>(*a) / static_cast<double>(*b);
}

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  const PreparedRun p = prepare(config);
  std::filesystem::create_directories(config.out_dir);
  const RunResult r = run_experiment(p.problem, p.hp, p.options, p.f_star);
  const std::size_t M = p.problem.workers();
  write_trace_file(config.out_dir / "trace.csv", r, M);

  std::optional<RunResult> gd;
  if (config.compare_gd && config.strategy.kind != StrategyKind::kGd) {
    RunOptions opts = p.options;
    opts.strategy = Strategy{StrategyKind::kGd};
    gd = run_experiment(p.problem, p.hp, opts, p.f_star);
    write_trace_file(config.out_dir / "gd_trace.csv", *gd, M);
  }

  std::ofstream summary(config.out_dir / "summary.txt");
  auto emit = [&](const std::string& line) {
    summary << line << '\n';
    log << line << '\n';
  };
  emit(fmt::format("strategy: {}", to_string(config.strategy.kind)));
  emit(fmt::format("family: {}", to_string(config.family)));
  emit(fmt::format("workers: {}", M));
  emit(fmt::format("dim: {}", p.problem.dim()));
  emit(fmt::format("alpha: {}", p.hp.alpha));
  emit(fmt::format("L: {}", p.smooth.L_global));
  emit(fmt::format("f_star: {}", p.f_star));
  emit(fmt::format("rounds: {}", r.trace.size()));
  if (!r.trace.empty()) {
    emit(fmt::format("final_error: {}", r.trace.back().objective_error));
    emit(fmt::format("total_bits: {}", r.trace.back().cum_bits_total));
    emit(fmt::format("transmissions: {}", r.trace.back().transmissions_total));
  }
  const auto reached = first_reaching(r.trace, config.target_error);
  if (reached) {
    emit(fmt::format("target_error: {} reached at k={} with {} bits",
                     config.target_error, r.trace[*reached].k,
                     r.trace[*reached].cum_bits_total));
  } else {
    emit(fmt::format("target_error: {} not reached", config.target_error));
  }
  if (gd) {
    const auto s = savings_vs_gd(r.trace, gd->trace, config.target_error);
    if (s) {
      emit(fmt::format("savings_vs_gd: {:.2f}%", 100.0 * *s));
    } else {
      emit("savings_vs_gd: n/a (target not reached by both runs)");
    }
  }
  emit(fmt::format("diverged: {}", r.diverged ? "yes" : "no"));
  if (r.diverged) {
    emit("divergence: " + r.divergence_reason);
    return kDiverged;
  }
  return kOk;
}

std::optional<std::size_t> best_sweep_row(std::span<const SweepRow> rows) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].bits_at_target &&
        (!best || !rows[*best].bits_at_target ||
         *rows[i].bits_at_target < *rows[*best].bits_at_target)) {
      best = i;
    }
  }
  if (best) return best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].diverged) continue;
    if (!best || rows[i].final_error < rows[*best].final_error) best = i;
  }
  return best;
}

int cmd_sweep(const ExperimentConfig& base, const ConfigMap& base_map,
              const std::string& axis, const std::vector<std::string>& values,
              std::ostream& log) {
  if (values.empty()) throw InvalidArgument("sweep: empty grid");
  const std::string key = sweep_key(axis);
  std::filesystem::create_directories(base.out_dir);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ConfigMap m = base_map;
    if (key == "params.xi") m.erase("params.xi_over_m");
    if (key == "params.xi_over_m") m.erase("params.xi");
    apply_override(m, key + "=" + values[i]);
    ExperimentConfig c = ExperimentConfig::from_map(m);
    c.out_dir = base.out_dir / fmt::format("point_{:03d}", i);
    std::filesystem::create_directories(c.out_dir);
    const PreparedRun p = prepare(c);
    const RunResult r = run_experiment(p.problem, p.hp, p.options, p.f_star);
    write_trace_file(c.out_dir / "trace.csv", r, p.problem.workers());
    SweepRow row;
    row.value = values[i];
    row.diverged = r.diverged;
    if (!r.trace.empty()) {
      row.final_error = r.trace.back().objective_error;
      row.total_bits = r.trace.back().cum_bits_total;
    } else {
      row.final_error = std::numeric_limits<double>::infinity();
    }
    row.bits_at_target = bits_at(r.trace, c.target_error);
    rows.push_back(row);
    log << fmt::format("{}={} final_error={} total_bits={}{}\n", key, values[i],
                       row.final_error, row.total_bits,
                       r.diverged ? " (diverged)" : "");
  }

  std::ofstream csv(base.out_dir / "sweep.csv", std::ios::binary);
  csv << key << ",final_error,total_bits,bits_at_target,diverged\n";
  for (const SweepRow& row : rows) {
    csv << row.value << ',' << format_real(row.final_error) << ','
        << row.total_bits << ','
        << (row.bits_at_target ? std::to_string(*row.bits_at_target) : "") << ','
        << (row.diverged ? 1 : 0) << '\n';
  }
  const auto best = best_sweep_row(rows);
  std::ofstream best_out(base.out_dir / "best.txt");
  if (best) {
    const std::string line =
        fmt::format("best: {}={} (point_{:03d})", key, rows[*best].value, *best);
    best_out << line << '\n';
    log << line << '\n';
  } else {
    best_out << "best: none (all points diverged)\n";
    log << "best: none (all points diverged)\n";
  }
  return kOk;
}

int cmd_check_params(const TheoryParams& p, double eps, std::ostream& out) {
  const TheoryReport r = analyze(p, eps);
  fmt::print(out, "alpha={} beta1={} beta2={} rho={} rho2={} xi={} L={} mu={}\n",
             p.alpha, p.beta1, p.beta2, p.rho, p.rho2, p.xi_max, p.L, p.mu);
  fmt::print(out, "gamma  = {}\n", r.gamma);
  fmt::print(out, "sigma0 = {}\n", r.sigma0);
  fmt::print(out, "sigma1 = {}\n", r.sigma1);
  fmt::print(out, "sigma2 = {}\n", r.sigma2);
  if (r.feasible) {
    fmt::print(out, "verdict: feasible\n");
  } else {
    fmt::print(out, "verdict: infeasible ({})\n", r.violations());
  }
  try {
    const double bound =
        feasible_xi_bound(p.alpha, p.beta1, p.beta2, p.rho2, p.L, p.rho);
    fmt::print(out, "xi bound: {}\n", bound);
  } catch (const std::exception& e) {
    fmt::print(out, "xi bound: n/a ({})\n", e.what());
  }
  auto print_rate = [&](const char* name, double c) {
    fmt::print(out, "{}: c = {}\n", name, c);
    if (c > 0.0 && c < 1.0) {
      const IterationComplexity ic = iteration_complexity(c, eps);
      fmt::print(out, "  iterations to eps={}: exact {} , bound log(1/eps)/c = {}\n",
                 eps, ic.exact, ic.loose);
    }
  };
  if (r.contraction_c) {
    print_rate("contraction", *r.contraction_c);
  } else {
    try {
      contraction(p);
    } catch (const std::exception& e) {
      fmt::print(out, "contraction: n/a ({})\n", e.what());
    }
  }
  if (p.beta1 > 0.0 && p.beta2 > 0.0) {
    print_rate("contraction with gamma eliminated", contraction_reduced(p));
  }
  return kOk;
}

int cmd_gen_data(const GeneratorSpec& spec, const std::filesystem::path& out,
                 std::ostream& log) {
  const auto data = generate(spec);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + out.string() + "'");
  write_csv(f, data);
  log << fmt::format("wrote {} rows x {} features to {}\n",
                     spec.workers * spec.per_worker_n, spec.dim, out.string());
  return kOk;
}

}  // namespace gdsec::cli
