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

#include "gdsec/objectives.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gdsec {
namespace {

constexpr std::size_t kDenseEigenMaxDim = 2048;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Per-sample loss at margin z.
double sample_loss(Family family, double z, double y) {
  switch (family) {
    case Family::kRidge:
    case Family::kLasso:
      return 0.5 * (y - z) * (y - z);
    case Family::kLogistic:
      return softplus(-y * z);
    case Family::kNlls: {
      const double r = y - sigmoid(z);
      return 0.5 * r * r;
    }
  }
  return 0.0;
}

// d(sample_loss)/dz.
double sample_loss_derivative(Family family, double z, double y) {
  switch (family) {
    case Family::kRidge:
    case Family::kLasso:
      return z - y;
    case Family::kLogistic:
      return -y * sigmoid(-y * z);
    case Family::kNlls: {
      const double s = sigmoid(z);
      return (s - y) * s * (1.0 - s);
    }
  }
  return 0.0;
}

double regularizer_value(const ObjectiveSpec& spec, const DenseVector& theta) {
  const double m = static_cast<double>(spec.workers);
  if (spec.family == Family::kLasso) {
    double l1 = 0.0;
    for (double v : theta.values()) l1 += std::abs(v);
    return spec.lambda / m * l1;
  }
  return spec.lambda / (2.0 * m) * norm_sq(theta);
}

// Data term of the gradient for the rows of `x`, multiplied by
// data_scale / N, plus the full local regularizer gradient.
DenseVector gradient_from_margins(const ObjectiveSpec& spec,
                                  kernels::MatrixView x,
                                  std::span<const double> labels,
                                  double n_total, double data_scale,
                                  const DenseVector& theta,
                                  std::vector<double> z) {
  for (std::size_t n = 0; n < z.size(); ++n) {
    z[n] = sample_loss_derivative(spec.family, z[n], labels[n]);
  }
  std::vector<double> g = kernels::parallel::matvec_transposed(x, z);
  const double factor = data_scale / n_total;
  const double reg = spec.lambda / static_cast<double>(spec.workers);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = spec.family == Family::kLasso ? reg * sign(theta[j])
                                                   : reg * theta[j];
    g[j] = factor * g[j] + r;
  }
  return DenseVector(std::move(g));
}

DenseVector gradient_core(const ObjectiveSpec& spec, kernels::MatrixView x,
                          std::span<const double> labels, double n_total,
                          double data_scale, const DenseVector& theta) {
  return gradient_from_margins(spec, x, labels, n_total, data_scale, theta,
                               kernels::parallel::matvec(x, theta.values()));
}

double value_from_margins(const ObjectiveSpec& spec, const LocalDataset& data,
                          const DenseVector& theta,
                          std::span<const double> z) {
  double s = 0.0;
  for (std::size_t n = 0; n < z.size(); ++n) {
    s += sample_loss(spec.family, z[n], data.labels[n]);
  }
  return s / static_cast<double>(data.n_total) + regularizer_value(spec, theta);
}

// sup_z |phi''(z)| for phi(z) = (y - sigmoid(z))^2 / 2, over the label range.
double nlls_curvature_bound(std::span<const LocalDataset> data) {
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -y_lo;
  for (const auto& d : data) {
    for (double y : d.labels) {
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  double best = 0.0;
  for (double y : {y_lo, y_hi}) {
    for (int step = -40000; step <= 40000; ++step) {
      const double z = step * 1e-3;
      const double s = sigmoid(z);
      const double s1 = s * (1.0 - s);
      const double s2 = s1 * (1.0 - 2.0 * s);
      best = std::max(best, std::abs(s1 * s1 - (y - s) * s2));
    }
  }
  return best;
}

DenseVector summed_gradient(const ObjectiveSpec& spec,
                            std::span<const LocalDataset> data,
                            const DenseVector& theta) {
  std::vector<double> g(theta.dim(), 0.0);
  for (const auto& d : data) {
    const DenseVector gm = local_gradient(spec, d, theta);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += gm[j];
  }
  return DenseVector(std::move(g));
}

// Largest observed ||grad(a + eps v) - grad(a)|| / ||eps v||, with v driven
// towards the dominant curvature direction by power iteration.
double empirical_lipschitz(const ObjectiveSpec& spec,
                           std::span<const LocalDataset> data) {
  const std::size_t d = data.front().dim;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double point_scale = 1.0 / std::sqrt(static_cast<double>(d));
  double best = 0.0;
  for (int point = 0; point < 8; ++point) {
    std::vector<double> a(d), v(d);
    for (auto& x : a) x = point_scale * normal(rng);
    for (auto& x : v) x = normal(rng);
    const DenseVector base(a);
    const DenseVector g0 = summed_gradient(spec, data, base);
    for (int it = 0; it < 40; ++it) {
      double vn = 0.0;
      for (double x : v) vn += x * x;
      vn = std::sqrt(vn);
      if (vn == 0.0) break;
      const double eps = 1e-5;
      std::vector<double> shifted(d);
      for (std::size_t j = 0; j < d; ++j) shifted[j] = a[j] + eps * v[j] / vn;
      const DenseVector g1 = summed_gradient(spec, data, DenseVector(shifted));
      double diff = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        v[j] = (g1[j] - g0[j]) / eps;
        diff += v[j] * v[j];
      }
      best = std::max(best, std::sqrt(diff));
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kRidge:
      return "ridge";
    case Family::kLogistic:
      return "logistic";
    case Family::kLasso:
      return "lasso";
    case Family::kNlls:
      return "nlls";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "ridge" || name == "ridge_linear" || name == "linear") {
    return Family::kRidge;
  }
  if (name == "logistic") return Family::kLogistic;
  if (name == "lasso") return Family::kLasso;
  if (name == "nlls") return Family::kNlls;
  throw InvalidArgument("unknown objective family '" + std::string(name) + "'");
}

void LocalDataset::validate() const {
  if (rows == 0) throw InvalidArgument("LocalDataset: no samples");
  if (dim == 0) throw InvalidArgument("LocalDataset: zero dimension");
  if (features.size() != rows * dim) {
    throw InvalidArgument("LocalDataset: feature matrix is not rows x dim");
  }
  if (labels.size() != rows) {
    throw InvalidArgument("LocalDataset: label count differs from rows");
  }
  if (n_total < rows) {
    throw InvalidArgument("LocalDataset: N_total smaller than local rows");
  }
}

void ObjectiveSpec::validate() const {
  if (!(lambda >= 0.0)) throw InvalidArgument("ObjectiveSpec: lambda < 0");
  if (workers == 0) throw InvalidArgument("ObjectiveSpec: M must be positive");
}

void Problem::validate() const {
  spec.validate();
  if (data.empty()) throw InvalidArgument("Problem: no worker datasets");
  check_same_dim(data.size(), spec.workers, "Problem workers");
  for (const auto& d : data) {
    d.validate();
    check_same_dim(d.dim, data.front().dim, "Problem datasets");
  }
}

double local_value(const ObjectiveSpec& spec, const LocalDataset& data,
                   const DenseVector& theta) {
  check_same_dim(theta.dim(), data.dim, "local_value");
  return value_from_margins(
      spec, data, theta, kernels::parallel::matvec(data.view(), theta.values()));
}

LocalEvaluation local_value_and_gradient(const ObjectiveSpec& spec,
                                         const LocalDataset& data,
                                         const DenseVector& theta) {
  check_same_dim(theta.dim(), data.dim, "local_value_and_gradient");
  std::vector<double> z = kernels::parallel::matvec(data.view(), theta.values());
  LocalEvaluation out;
  out.value = value_from_margins(spec, data, theta, z);
  out.gradient = gradient_from_margins(spec, data.view(), data.labels,
                                       static_cast<double>(data.n_total), 1.0,
                                       theta, std::move(z));
  return out;
}

DenseVector local_gradient(const ObjectiveSpec& spec, const LocalDataset& data,
                           const DenseVector& theta) {
  check_same_dim(theta.dim(), data.dim, "local_gradient");
  return gradient_core(spec, data.view(), data.labels,
                       static_cast<double>(data.n_total), 1.0, theta);
}

DenseVector stochastic_gradient(const ObjectiveSpec& spec,
                                const LocalDataset& data,
                                const DenseVector& theta,
                                std::span<const std::size_t> batch) {
  check_same_dim(theta.dim(), data.dim, "stochastic_gradient");
  if (batch.empty()) throw InvalidArgument("stochastic_gradient: empty batch");
  std::vector<double> rows;
  std::vector<double> labels;
  rows.reserve(batch.size() * data.dim);
  labels.reserve(batch.size());
  for (std::size_t n : batch) {
    if (n >= data.rows) {
      throw InvalidArgument("stochastic_gradient: index " + std::to_string(n) +
                            " out of range");
    }
    const auto r = data.row(n);
    rows.insert(rows.end(), r.begin(), r.end());
    labels.push_back(data.labels[n]);
  }
  const kernels::MatrixView x{rows, batch.size(), data.dim};
  const double data_scale = static_cast<double>(data.rows) /
                            static_cast<double>(batch.size());
  return gradient_core(spec, x, labels, static_cast<double>(data.n_total),
                       data_scale, theta);
}

std::vector<std::size_t> sample_batch(std::size_t rows, std::size_t batch_size,
                                      std::mt19937_64& rng) {
  if (batch_size == 0 || batch_size > rows) {
    throw InvalidArgument("sample_batch: batch size must be in [1, rows]");
  }
  std::vector<std::size_t> all(rows);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(batch_size);
  std::sample(all.begin(), all.end(), std::back_inserter(out), batch_size, rng);
  return out;
}

double global_value(const Problem& problem, const DenseVector& theta) {
  double s = 0.0;
  for (const auto& d : problem.data) s += local_value(problem.spec, d, theta);
  return s;
}

DenseVector global_gradient(const Problem& problem, const DenseVector& theta) {
  return summed_gradient(problem.spec, problem.data, theta);
}

LocalDataset pool(std::span<const LocalDataset> data) {
  if (data.empty()) throw InvalidArgument("pool: no datasets");
  LocalDataset out;
  out.dim = data.front().dim;
  out.n_total = data.front().n_total;
  for (const auto& d : data) {
    check_same_dim(d.dim, out.dim, "pool");
    out.features.insert(out.features.end(), d.features.begin(),
                        d.features.end());
    out.labels.insert(out.labels.end(), d.labels.begin(), d.labels.end());
    out.rows += d.rows;
  }
  out.n_total = std::max(out.n_total, out.rows);
  return out;
}

double gram_max_eigenvalue(std::span<const LocalDataset> data, double scale) {
  if (data.empty()) throw InvalidArgument("gram_max_eigenvalue: no data");
  const std::size_t d = data.front().dim;
  if (d <= kDenseEigenMaxDim) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                 static_cast<Eigen::Index>(d));
    for (const auto& ds : data) {
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                           Eigen::Dynamic, Eigen::RowMajor>>
          x(ds.features.data(), static_cast<Eigen::Index>(ds.rows),
            static_cast<Eigen::Index>(ds.dim));
      gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        gram, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff() * scale;
  }
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double eig = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> next(d, 0.0);
    for (const auto& ds : data) {
      const auto xv = kernels::parallel::matvec(ds.view(), v);
      const auto xtxv = kernels::parallel::matvec_transposed(ds.view(), xv);
      for (std::size_t j = 0; j < d; ++j) next[j] += xtxv[j];
    }
    double nrm = 0.0;
    for (double x : next) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    eig = nrm;
    for (std::size_t j = 0; j < d; ++j) v[j] = next[j] / nrm;
  }
  return eig * scale;
}

SmoothnessInfo smoothness(const ObjectiveSpec& spec,
                          std::span<const LocalDataset> data) {
  spec.validate();
  if (data.empty()) throw InvalidArgument("smoothness: empty dataset list");
  const std::size_t d = data.front().dim;
  for (const auto& ds : data) {
    ds.validate();
    check_same_dim(ds.dim, d, "smoothness");
  }
  const double n_total = static_cast<double>(data.front().n_total);
  const double m = static_cast<double>(spec.workers);

  double curvature = 1.0;  // sup of the per-sample second derivative
  double ridge = spec.lambda;
  switch (spec.family) {
    case Family::kRidge:
      break;
    case Family::kLogistic:
      curvature = 0.25;
      break;
    case Family::kLasso:
      ridge = 0.0;
      break;
    case Family::kNlls:
      curvature = nlls_curvature_bound(data);
      break;
  }

  SmoothnessInfo info;
  std::vector<double> diag(d, 0.0);
  for (const auto& ds : data) {
    const auto col = kernels::parallel::column_sq_norms(ds.view());
    for (std::size_t j = 0; j < d; ++j) diag[j] += col[j];
  }
  info.L_coord.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    info.L_coord[j] = curvature * diag[j] / n_total + ridge;
  }
  for (const auto& ds : data) {
    info.L_worker.push_back(
        curvature * gram_max_eigenvalue(std::span(&ds, 1), 1.0 / n_total) +
        ridge / m);
  }
  if (spec.family == Family::kNlls) {
    const double coord_max =
        *std::max_element(info.L_coord.begin(), info.L_coord.end());
    info.L_global = std::max(empirical_lipschitz(spec, data), coord_max);
  } else {
    info.L_global = curvature * gram_max_eigenvalue(data, 1.0 / n_total) + ridge;
  }
  info.mu = (spec.family == Family::kRidge || spec.family == Family::kLogistic)
                ? spec.lambda
                : 0.0;
  // Guard the documented invariants against round-off in the eigensolver.
  for (double lc : info.L_coord) info.L_global = std::max(info.L_global, lc);
  if (!(info.L_global > 0.0)) {
    throw InvalidArgument("smoothness: degenerate data (L = 0)");
  }
  return info;
}

}  // namespace gdsec
