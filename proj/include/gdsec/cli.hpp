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

// Experiment front end: INI configuration, subcommands and SVG plots.
//
// Configuration keys are `section.key`. A file such as
//
//   [objective]
//   family = logistic
//   lambda = 1/N
//   [data]
//   generator = logistic_blocks
//   workers = 5
//   per_worker_n = 50
//   dim = 300
//   [strategy]
//   name = gdsec
//   [params]
//   alpha = 0.0078
//   beta = 0.01
//   xi_over_m = 80
//   iterations = 3000
//   [run]
//   seed = 1
//
// becomes {"objective.family": "logistic", ...}; command-line overrides are
// merged into the same map before it is interpreted.

#ifndef GDSEC_CLI_HPP_
#define GDSEC_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gdsec/data.hpp"
#include "gdsec/encoding.hpp"
#include "gdsec/engine.hpp"
#include "gdsec/objectives.hpp"
#include "gdsec/theory.hpp"

namespace gdsec::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDiverged = 2,
  kFailure = 3,
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap read_config_file(const std::filesystem::path& path);
ConfigMap parse_config_text(std::istream& in);
// "section.key=value"
void apply_override(ConfigMap& config, const std::string& assignment);

enum class XiMode { kUniform, kCoordinateScaled };

struct ExperimentConfig {
  Family family = Family::kRidge;
  std::string lambda = "0";  // number, or "c/N" meaning c divided by N

  std::optional<GeneratorSpec> generator;
  std::optional<std::filesystem::path> data_file;
  std::string data_format = "svm";  // svm | csv
  std::size_t data_dim = 0;         // svm only; 0 infers
  bool standardize = false;
  std::size_t workers = 1;

  Strategy strategy;
  std::string alpha = "1/L";  // number, or "c/L"
  StepKind step_kind = StepKind::kConstant;
  double step_lambda = 0.0;
  double beta = 1.0;
  double xi = 0.0;  // xi_i, before the 1/M in the threshold
  XiMode xi_mode = XiMode::kUniform;
  std::size_t iterations = 100;
  Schedule schedule;

  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  BitScheme bits = BitScheme::kLedger;
  bool compare_gd = false;
  double target_error = 1e-6;
  std::size_t f_star_iterations = 0;  // 0: 10 K
  std::optional<double> f_star;

  static ExperimentConfig from_map(const ConfigMap& config);
};

// Everything needed to call run_experiment, resolved from a config.
struct PreparedRun {
  Problem problem;
  HyperParams hp;
  RunOptions options;
  SmoothnessInfo smooth;
  double f_star = 0.0;
};

PreparedRun prepare(const ExperimentConfig& config);

// First 0-based trace row whose error is <= target.
std::optional<std::size_t> first_reaching(std::span<const RoundTrace> trace,
                                          double target);

// 1 - bits/bits_gd at the first rows where each run reaches the target.
std::optional<double> savings_vs_gd(std::span<const RoundTrace> strategy,
                                    std::span<const RoundTrace> gd,
                                    double target);

int cmd_run(const ExperimentConfig& config, std::ostream& log);

struct SweepRow {
  std::string value;
  double final_error = 0.0;
  std::uint64_t total_bits = 0;
  std::optional<std::uint64_t> bits_at_target;
  bool diverged = false;
};

// Best row: reaches the target with the fewest bits; otherwise the lowest
// final error among non-diverged rows.
std::optional<std::size_t> best_sweep_row(std::span<const SweepRow> rows);

int cmd_sweep(const ExperimentConfig& base, const ConfigMap& base_map,
              const std::string& axis, const std::vector<std::string>& values,
              std::ostream& log);

int cmd_check_params(const TheoryParams& p, double eps, std::ostream& out);

int cmd_gen_data(const GeneratorSpec& spec, const std::filesystem::path& out,
                 std::ostream& log);

// Parsed trace.csv.
struct TraceTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

TraceTable read_trace_csv(std::istream& in);

enum class PlotAxis { kIterations, kBits };

PlotAxis parse_plot_axis(const std::string& name);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Log10 y axis, linear x axis. Points with y <= 0 are dropped.
struct PlotFrame {
  double width = 640.0;
  double height = 420.0;
  double left = 70.0;
  double right = 150.0;
  double top = 30.0;
  double bottom = 50.0;
  double x_min = 0.0;
  double x_max = 1.0;
  double log_y_min = -1.0;
  double log_y_max = 0.0;

  double x_to_px(double x) const;
  double y_to_px(double y) const;
};

PlotFrame fit_frame(std::span<const Series> series);
std::string render_svg(std::span<const Series> series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

int cmd_plot(const std::vector<std::filesystem::path>& traces, PlotAxis axis,
             const std::filesystem::path& out, std::ostream& log);

}  // namespace gdsec::cli

#endif  // GDSEC_CLI_HPP_
