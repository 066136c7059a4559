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

#include "gdsec/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gdsec/engine.hpp"

namespace gdsec {
namespace {

constexpr std::size_t kBlock = 50;

std::mt19937_64 generator_rng(const GeneratorSpec& spec) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                    static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(spec.kind) + 1u};
  return std::mt19937_64(seq);
}

LocalDataset empty_local(const GeneratorSpec& spec) {
  LocalDataset d;
  d.rows = spec.per_worker_n;
  d.dim = spec.dim;
  d.n_total = spec.workers * spec.per_worker_n;
  d.features.assign(d.rows * d.dim, 0.0);
  d.labels.assign(d.rows, 0.0);
  return d;
}

double rademacher(std::mt19937_64& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() &&
         std::isfinite(out);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return in;
}

std::vector<LocalDataset> finish(LocalDataset all, std::size_t workers,
                                 bool standardize_features) {
  if (standardize_features) standardize(all);
  return split_even(all, workers);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kLogisticBlocks: return "logistic_blocks";
    case GeneratorKind::kCoordLipschitz: return "coord_lipschitz";
    case GeneratorKind::kGaussianRidge: return "gaussian_ridge";
  }
  return "unknown";
}

GeneratorKind parse_generator(std::string_view name) {
  for (GeneratorKind k : {GeneratorKind::kLogisticBlocks,
                          GeneratorKind::kCoordLipschitz,
                          GeneratorKind::kGaussianRidge}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown generator '" + std::string(name) + "'");
}

void GeneratorSpec::validate() const {
  if (workers == 0 || per_worker_n == 0 || dim == 0) {
    throw InvalidArgument("GeneratorSpec: workers, per_worker_n, d must be > 0");
  }
  if (kind == GeneratorKind::kLogisticBlocks &&
      dim < kBlock * workers + kBlock) {
    throw InvalidArgument("logistic_blocks needs d >= 50 M + 50");
  }
  if (kind == GeneratorKind::kCoordLipschitz && per_worker_n < dim) {
    throw InvalidArgument("coord_lipschitz needs per_worker_n >= d");
  }
}

std::vector<LocalDataset> gen_logistic_blocks(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::kLogisticBlocks) {
    throw InvalidArgument("gen_logistic_blocks: wrong generator kind");
  }
  spec.validate();
  std::mt19937_64 rng = generator_rng(spec);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LocalDataset> out;
  for (std::size_t m = 0; m < spec.workers; ++m) {
    LocalDataset d = empty_local(spec);
    for (std::size_t n = 0; n < d.rows; ++n) {
      for (std::size_t j = 0; j < d.dim; ++j) {
        double scale = 0.01;
        if (j >= d.dim - kBlock) {
          scale = 10.0;
        } else if (j >= kBlock * m && j < kBlock * (m + 1)) {
          scale = 1.0;
        }
        d.features[n * d.dim + j] = scale * unit(rng);
      }
      d.labels[n] = rademacher(rng);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LocalDataset> gen_coord_lipschitz(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::kCoordLipschitz) {
    throw InvalidArgument("gen_coord_lipschitz: wrong generator kind");
  }
  spec.validate();
  std::mt19937_64 rng = generator_rng(spec);
  std::uniform_real_distribution<double> base(0.0, 0.01);
  std::vector<LocalDataset> out;
  for (std::size_t m = 0; m < spec.workers; ++m) {
    LocalDataset d = empty_local(spec);
    for (std::size_t n = 0; n < d.rows; ++n) {
      for (std::size_t j = 0; j < d.dim; ++j) {
        d.features[n * d.dim + j] = base(rng);
      }
      d.labels[n] = rademacher(rng);
      if (n < d.dim) {
        d.features[n * d.dim + n] = static_cast<double>(m + 1) *
                                    std::pow(1.1, static_cast<double>(n + 1));
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LocalDataset> gen_gaussian_ridge(const GeneratorSpec& spec) {
  if (spec.kind != GeneratorKind::kGaussianRidge) {
    throw InvalidArgument("gen_gaussian_ridge: wrong generator kind");
  }
  spec.validate();
  std::mt19937_64 rng = generator_rng(spec);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> truth(spec.dim);
  for (double& t : truth) t = normal(rng);
  std::vector<LocalDataset> out;
  for (std::size_t m = 0; m < spec.workers; ++m) {
    LocalDataset d = empty_local(spec);
    for (std::size_t n = 0; n < d.rows; ++n) {
      double y = 0.0;
      for (std::size_t j = 0; j < d.dim; ++j) {
        const double x = normal(rng);
        d.features[n * d.dim + j] = x;
        y += x * truth[j];
      }
      d.labels[n] = y + 0.1 * normal(rng);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LocalDataset> generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::kLogisticBlocks: return gen_logistic_blocks(spec);
    case GeneratorKind::kCoordLipschitz: return gen_coord_lipschitz(spec);
    case GeneratorKind::kGaussianRidge: return gen_gaussian_ridge(spec);
  }
  throw InvalidArgument("generate: unknown generator kind");
}

std::vector<LocalDataset> split_even(const LocalDataset& all,
                                     std::size_t workers) {
  if (workers == 0) throw InvalidArgument("split_even: workers must be > 0");
  if (all.rows < workers) {
    throw InvalidArgument("split_even: fewer rows than workers");
  }
  const std::size_t share = all.rows / workers;
  std::vector<LocalDataset> out;
  std::size_t begin = 0;
  for (std::size_t m = 0; m < workers; ++m) {
    const std::size_t rows = m + 1 == workers ? all.rows - begin : share;
    LocalDataset d;
    d.rows = rows;
    d.dim = all.dim;
    d.n_total = all.rows;
    const auto f0 = all.features.begin() + static_cast<std::ptrdiff_t>(begin * all.dim);
    d.features.assign(f0, f0 + static_cast<std::ptrdiff_t>(rows * all.dim));
    const auto l0 = all.labels.begin() + static_cast<std::ptrdiff_t>(begin);
    d.labels.assign(l0, l0 + static_cast<std::ptrdiff_t>(rows));
    begin += rows;
    out.push_back(std::move(d));
  }
  return out;
}

void standardize(LocalDataset& data) {
  if (data.rows == 0) return;
  const auto n = static_cast<double>(data.rows);
  for (std::size_t j = 0; j < data.dim; ++j) {
    double mean = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) mean += data.features[r * data.dim + j];
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < data.rows; ++r) {
      const double t = data.features[r * data.dim + j] - mean;
      var += t * t;
    }
    var /= n;
    const double sd = std::sqrt(var);
    for (std::size_t r = 0; r < data.rows; ++r) {
      double& x = data.features[r * data.dim + j];
      x = sd > 0.0 ? (x - mean) / sd : 0.0;
    }
  }
}

LocalDataset parse_svm(std::istream& in, std::size_t dim) {
  struct Row {
    double label;
    std::vector<SparseEntry> entries;
  };
  std::vector<Row> rows;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    std::istringstream tokens{std::string(body)};
    std::string tok;
    tokens >> tok;
    Row row{};
    if (!parse_double(tok, row.label)) {
      throw ParseError("bad label '" + tok + "'", line_no);
    }
    std::size_t last = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ParseError("expected idx:val, got '" + tok + "'", line_no);
      }
      std::size_t idx = 0;
      const std::string_view idx_s(tok.data(), colon);
      const auto res = std::from_chars(idx_s.data(), idx_s.data() + idx_s.size(), idx);
      if (res.ec != std::errc() || res.ptr != idx_s.data() + idx_s.size() || idx == 0) {
        throw ParseError("bad index '" + std::string(idx_s) + "'", line_no);
      }
      if (idx <= last) throw ParseError("indices must ascend", line_no);
      if (dim != 0 && idx > dim) {
        throw ParseError("index " + std::to_string(idx) + " exceeds d", line_no);
      }
      double v = 0.0;
      if (!parse_double(std::string_view(tok).substr(colon + 1), v)) {
        throw ParseError("bad value in '" + tok + "'", line_no);
      }
      last = idx;
      max_index = std::max(max_index, idx);
      row.entries.push_back({idx - 1, v});
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows", line_no);
  LocalDataset out;
  out.dim = dim != 0 ? dim : max_index;
  if (out.dim == 0) throw ParseError("no features", line_no);
  out.rows = rows.size();
  out.n_total = out.rows;
  out.features.assign(out.rows * out.dim, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.labels.push_back(rows[r].label);
    for (const auto& e : rows[r].entries) out.features[r * out.dim + e.index] = e.value;
  }
  return out;
}

std::vector<LocalDataset> load_svm_format(const std::filesystem::path& path,
                                          std::size_t workers, std::size_t dim,
                                          bool standardize_features) {
  std::ifstream in = open_or_throw(path);
  return finish(parse_svm(in, dim), workers, standardize_features);
}

LocalDataset parse_csv(std::istream& in) {
  LocalDataset out;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto fields = split(body, ',');
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) {
      numeric = parse_double(fields[i], values[i]);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw ParseError("non-numeric field", line_no);
    }
    first = false;
    if (fields.size() < 2) throw ParseError("need a label and a feature", line_no);
    if (out.rows == 0) {
      out.dim = fields.size() - 1;
    } else if (fields.size() - 1 != out.dim) {
      throw ParseError("expected " + std::to_string(out.dim + 1) + " fields",
                       line_no);
    }
    out.labels.push_back(values[0]);
    out.features.insert(out.features.end(), values.begin() + 1, values.end());
    ++out.rows;
  }
  if (out.rows == 0) throw ParseError("no data rows", line_no);
  out.n_total = out.rows;
  return out;
}

std::vector<LocalDataset> load_csv(const std::filesystem::path& path,
                                   std::size_t workers,
                                   bool standardize_features) {
  std::ifstream in = open_or_throw(path);
  return finish(parse_csv(in), workers, standardize_features);
}

void write_csv(std::ostream& out, std::span<const LocalDataset> data) {
  if (data.empty()) throw InvalidArgument("write_csv: no data");
  const std::size_t d = data.front().dim;
  out << "label";
  for (std::size_t j = 1; j <= d; ++j) out << ",f" << j;
  out << '\n';
  for (const LocalDataset& part : data) {
    check_same_dim(part.dim, d, "write_csv");
    for (std::size_t r = 0; r < part.rows; ++r) {
      out << format_real(part.labels[r]);
      for (double x : part.row(r)) out << ',' << format_real(x);
      out << '\n';
    }
  }
}

}  // namespace gdsec
