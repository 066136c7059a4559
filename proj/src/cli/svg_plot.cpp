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
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/core.h>

#include "gdsec/cli.hpp"

namespace gdsec::cli {
namespace {

constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#e377c2", "#17becf",
};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    std::string field = line.substr(start, pos - start);
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(std::move(field));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::size_t TraceTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw InvalidArgument("trace has no column '" + name + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

TraceTable read_trace_csv(std::istream& in) {
  TraceTable t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("trace: empty file");
  t.header = split_csv_line(line);
  if (t.header.size() < 5 || t.header.front() != "k" ||
      t.header[1] != "objective_error") {
    throw InvalidArgument("trace: unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != t.header.size()) {
      throw InvalidArgument(fmt::format("trace line {}: expected {} fields",
                                        line_no, t.header.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw InvalidArgument(
            fmt::format("trace line {}: bad number '{}'", line_no, f));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

PlotAxis parse_plot_axis(const std::string& name) {
  if (name == "iterations") return PlotAxis::kIterations;
  if (name == "bits") return PlotAxis::kBits;
  throw InvalidArgument("plot axis must be iterations or bits");
}

double PlotFrame::x_to_px(double x) const {
  const double w = width - left - right;
  return left + (x - x_min) / (x_max - x_min) * w;
}

double PlotFrame::y_to_px(double y) const {
  const double h = height - top - bottom;
  return top + (log_y_max - std::log10(y)) / (log_y_max - log_y_min) * h;
}

PlotFrame fit_frame(std::span<const Series> series) {
  PlotFrame f;
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!(y > 0.0)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, std::log10(y));
      y_hi = std::max(y_hi, std::log10(y));
    }
  }
  if (!std::isfinite(x_lo)) return f;
  f.x_min = x_lo;
  f.x_max = x_hi > x_lo ? x_hi : x_lo + 1.0;
  f.log_y_min = std::floor(y_lo);
  f.log_y_max = std::ceil(y_hi);
  if (f.log_y_max <= f.log_y_min) f.log_y_max = f.log_y_min + 1.0;
  return f;
}

std::string render_svg(std::span<const Series> series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  const PlotFrame f = fit_frame(series);
  const double plot_right = f.width - f.right;
  const double plot_bottom = f.height - f.bottom;
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      f.width, f.height);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += fmt::format(
      "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" "
      "text-anchor=\"middle\">{}</text>\n",
      (f.left + plot_right) / 2.0, escape_xml(title));
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"black\"/>\n",
      f.left, f.top, plot_right - f.left, plot_bottom - f.top);

  for (double e = f.log_y_min; e <= f.log_y_max + 1e-9; e += 1.0) {
    const double y = f.y_to_px(std::pow(10.0, e));
    svg += fmt::format(
        "<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" "
        "stroke=\"#dddddd\"/>\n",
        f.left, y, plot_right, y);
    svg += fmt::format(
        "<text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" "
        "font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
        f.left - 6.0, y + 4.0, static_cast<int>(e));
  }
  for (int t = 0; t <= 4; ++t) {
    const double xv = f.x_min + (f.x_max - f.x_min) * t / 4.0;
    const double x = f.x_to_px(xv);
    svg += fmt::format(
        "<text x=\"{:.3f}\" y=\"{:.3f}\" font-family=\"sans-serif\" "
        "font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
        x, plot_bottom + 16.0, xv);
  }
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">{}</text>\n",
      (f.left + plot_right) / 2.0, f.height - 12.0, escape_xml(x_label));
  svg += fmt::format(
      "<text x=\"16\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
      (f.top + plot_bottom) / 2.0, escape_xml(y_label));

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % kPalette.size()];
    std::string d;
    for (const auto& [x, y] : series[s].points) {
      if (!(y > 0.0)) continue;
      d += fmt::format("{}{:.3f},{:.3f}", d.empty() ? "M" : " L", f.x_to_px(x),
                       f.y_to_px(y));
    }
    svg += fmt::format(
        "<path class=\"series\" data-label=\"{}\" d=\"{}\" fill=\"none\" "
        "stroke=\"{}\" stroke-width=\"1.5\"/>\n",
        escape_xml(series[s].label), d, color);
    const double ly = f.top + 14.0 + 18.0 * static_cast<double>(s);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/>\n",
        plot_right + 10.0, ly, plot_right + 30.0, color);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"11\">{}</text>\n",
        plot_right + 35.0, ly + 4.0, escape_xml(series[s].label));
  }
  svg += "</svg>\n";
  return svg;
}

int cmd_plot(const std::vector<std::filesystem::path>& traces, PlotAxis axis,
             const std::filesystem::path& out, std::ostream& log) {
  if (traces.empty()) throw InvalidArgument("plot: no traces given");
  std::vector<Series> series;
  for (const auto& path : traces) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open trace '" + path.string() + "'");
    const TraceTable t = read_trace_csv(in);
    const std::size_t xc =
        t.column(axis == PlotAxis::kIterations ? "k" : "cum_bits_total");
    const std::size_t yc = t.column("objective_error");
    Series s;
    const std::string parent = path.parent_path().filename().string();
    s.label = parent.empty() ? path.stem().string()
                             : parent + "/" + path.stem().string();
    for (const auto& row : t.rows) s.points.emplace_back(row[xc], row[yc]);
    series.push_back(std::move(s));
  }
  const std::string svg =
      render_svg(series, "objective error",
                 axis == PlotAxis::kIterations ? "iteration k" : "cumulative bits",
                 "f(theta) - f*");
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  std::ofstream f(out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + out.string() + "'");
  f << svg;
  log << fmt::format("wrote {} series to {}\n", series.size(), out.string());
  return kOk;
}

}  // namespace gdsec::cli
