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

#include "gdsec/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace gdsec {

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) +
                          ")");
  }
}

void check_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFiniteError(std::string(what) + ": non-finite entry at index " +
                           std::to_string(i));
    }
  }
}

DenseVector::DenseVector(std::vector<double> values)
    : values_(std::move(values)) {
  check_finite(values_, "DenseVector");
}

DenseVector::DenseVector(std::initializer_list<double> values)
    : DenseVector(std::vector<double>(values)) {}

DenseVector DenseVector::zeros(std::size_t dim) {
  return DenseVector(std::vector<double>(dim, 0.0));
}

SparseDelta::SparseDelta(std::size_t dim, std::vector<SparseEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
  for (std::size_t t = 0; t < entries_.size(); ++t) {
    const auto& e = entries_[t];
    if (e.index >= dim_) {
      throw InvalidArgument("SparseDelta: index " + std::to_string(e.index) +
                            " out of range for dim " + std::to_string(dim_));
    }
    if (t > 0 && entries_[t - 1].index >= e.index) {
      throw InvalidArgument("SparseDelta: indices must be strictly increasing");
    }
    if (e.value == 0.0) {
      throw InvalidArgument("SparseDelta: stored zero at index " +
                            std::to_string(e.index));
    }
    if (!std::isfinite(e.value)) {
      throw NonFiniteError("SparseDelta: non-finite value at index " +
                           std::to_string(e.index));
    }
  }
}

SparseDelta SparseDelta::from_dense(const DenseVector& v) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (v[i] != 0.0) entries.push_back({i, v[i]});
  }
  return SparseDelta(v.dim(), std::move(entries));
}

std::vector<std::size_t> SparseDelta::indices() const {
  std::vector<std::size_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.index);
  return out;
}

void HyperParams::validate(std::size_t dim) const {
  if (!(alpha > 0.0)) throw InvalidArgument("HyperParams: alpha must be > 0");
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw InvalidArgument("HyperParams: beta must lie in (0, 1]");
  }
  for (double x : xi) {
    if (!(x >= 0.0)) throw InvalidArgument("HyperParams: xi_i must be >= 0");
  }
  if (workers == 0) throw InvalidArgument("HyperParams: M must be positive");
  if (iterations == 0) throw InvalidArgument("HyperParams: K must be positive");
  if (dim != 0) check_same_dim(xi.size(), dim, "HyperParams.xi");
}

HyperParams HyperParams::uniform(double alpha, double beta, double xi,
                                 std::size_t dim, std::size_t workers,
                                 std::size_t iterations) {
  HyperParams hp;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.xi.assign(dim, xi);
  hp.workers = workers;
  hp.iterations = iterations;
  hp.validate(dim);
  return hp;
}

BitLedger::BitLedger(std::size_t workers)
    : per_worker_bits_(workers, 0), transmissions_(workers, 0) {}

void BitLedger::charge(std::size_t worker, std::uint64_t bits) {
  if (worker >= per_worker_bits_.size()) {
    throw InvalidArgument("BitLedger: worker index out of range");
  }
  if (bits == 0) return;
  per_worker_bits_[worker] += bits;
  transmissions_[worker] += 1;
  total_bits_ += bits;
}

std::uint64_t BitLedger::total_transmissions() const {
  return std::accumulate(transmissions_.begin(), transmissions_.end(),
                         std::uint64_t{0});
}

DenseVector apply_sparse(const DenseVector& v, const SparseDelta& delta) {
  check_same_dim(v.dim(), delta.dim(), "apply_sparse");
  std::vector<double> out(v.values().begin(), v.values().end());
  for (const auto& e : delta.entries()) out[e.index] = v[e.index] + e.value;
  return DenseVector(std::move(out));
}

DenseVector densify(const SparseDelta& delta) {
  std::vector<double> out(delta.dim(), 0.0);
  for (const auto& e : delta.entries()) out[e.index] = e.value;
  return DenseVector(std::move(out));
}

DenseVector add(const DenseVector& a, const DenseVector& b) {
  check_same_dim(a.dim(), b.dim(), "add");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return DenseVector(std::move(out));
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  check_same_dim(a.dim(), b.dim(), "subtract");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return DenseVector(std::move(out));
}

DenseVector scale(const DenseVector& a, double factor) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = factor * a[i];
  return DenseVector(std::move(out));
}

DenseVector axpy(const DenseVector& a, double factor, const DenseVector& b) {
  check_same_dim(a.dim(), b.dim(), "axpy");
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + factor * b[i];
  return DenseVector(std::move(out));
}

double dot(const DenseVector& a, const DenseVector& b) {
  check_same_dim(a.dim(), b.dim(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const DenseVector& a) { return dot(a, a); }

double norm(const DenseVector& a) { return std::sqrt(norm_sq(a)); }

}  // namespace gdsec
