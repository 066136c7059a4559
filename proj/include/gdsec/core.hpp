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

#ifndef GDSEC_CORE_HPP_
#define GDSEC_CORE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdsec {

// Thrown when an argument violates a documented precondition (dimension
// mismatch, out-of-range index, nonpositive step size, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a NaN or Inf reaches a value type. The engine turns this into a
// divergence flag on the trace.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A length-d vector of finite reals. Immutable after construction.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  static DenseVector zeros(std::size_t dim);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Moves the storage out so kernels can work in place on a copy.
  std::vector<double> release() && { return std::move(values_); }

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> values_;
};

struct SparseEntry {
  std::size_t index = 0;
  double value = 0.0;
  bool operator==(const SparseEntry&) const = default;
};

// Sorted (index, value) pairs over dimension d; the on-wire sparse payload.
// Indices are strictly increasing, below dim, and no stored value is zero.
class SparseDelta {
 public:
  SparseDelta() = default;
  SparseDelta(std::size_t dim, std::vector<SparseEntry> entries);

  // Keeps exactly the nonzero entries of `v`.
  static SparseDelta from_dense(const DenseVector& v);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::span<const SparseEntry> entries() const { return entries_; }
  std::vector<std::size_t> indices() const;

  bool operator==(const SparseDelta&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<SparseEntry> entries_;
};

struct HyperParams {
  double alpha = 0.0;       // step size
  double beta = 1.0;        // state smoothing, in (0, 1]
  std::vector<double> xi;   // per-coordinate thresholds, >= 0
  std::size_t workers = 1;  // M
  std::size_t iterations = 1;  // K

  // Throws InvalidArgument when an invariant fails. `dim` is checked against
  // xi.size() when nonzero.
  void validate(std::size_t dim = 0) const;

  static HyperParams uniform(double alpha, double beta, double xi,
                             std::size_t dim, std::size_t workers,
                             std::size_t iterations);
};

// Cumulative transmitted-bit accounting. Counters only ever grow.
class BitLedger {
 public:
  BitLedger() = default;
  explicit BitLedger(std::size_t workers);

  // Adds `bits` to worker `m`. A nonzero charge counts as one transmission.
  void charge(std::size_t worker, std::uint64_t bits);

  std::size_t workers() const { return per_worker_bits_.size(); }
  std::uint64_t total_bits() const { return total_bits_; }
  std::span<const std::uint64_t> per_worker_bits() const {
    return per_worker_bits_;
  }
  std::span<const std::uint64_t> transmissions() const {
    return transmissions_;
  }
  std::uint64_t total_transmissions() const;

 private:
  std::vector<std::uint64_t> per_worker_bits_;
  std::vector<std::uint64_t> transmissions_;
  std::uint64_t total_bits_ = 0;
};

// Per-round quantities the convergence monitor needs. Squared norms refer to
// the iterates theta^{k+1}, theta^k, theta^{k-1}, theta^{k-2}.
struct StepRecord {
  std::size_t k = 0;
  double f_current = 0.0;          // f(theta^k)
  double f_next = 0.0;             // f(theta^{k+1})
  double grad_norm_sq = 0.0;       // ||grad f(theta^k)||^2
  double step_next_sq = 0.0;       // ||theta^{k+1} - theta^k||^2
  double step_current_sq = 0.0;    // ||theta^k - theta^{k-1}||^2
  double step_previous_sq = 0.0;   // ||theta^{k-1} - theta^{k-2}||^2
  double compression_error_sq = 0.0;  // ||sum_m (dhat_m - delta_m + e_m)||^2
};

DenseVector apply_sparse(const DenseVector& v, const SparseDelta& delta);
DenseVector densify(const SparseDelta& delta);

DenseVector add(const DenseVector& a, const DenseVector& b);
DenseVector subtract(const DenseVector& a, const DenseVector& b);
DenseVector scale(const DenseVector& a, double factor);
// a + factor * b
DenseVector axpy(const DenseVector& a, double factor, const DenseVector& b);
double dot(const DenseVector& a, const DenseVector& b);
double norm_sq(const DenseVector& a);
double norm(const DenseVector& a);

void check_same_dim(std::size_t a, std::size_t b, const char* what);
void check_finite(std::span<const double> values, const char* what);

}  // namespace gdsec

#endif  // GDSEC_CORE_HPP_
