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

#include "gdsec/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace gdsec::kernels {

namespace {

// Wider vectors where the CPU has them. Lanes never mix, so every clone
// returns the same bits.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define GDSEC_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define GDSEC_CLONES
#endif

// Column sums walk the rows in order, so every column sees the same
// summation sequence whichever column block it lands in.
GDSEC_CLONES void accumulate_rows(MatrixView x, std::span<const double> w, std::size_t begin,
                     std::size_t end, double* __restrict out) {
  for (std::size_t n = 0; n < x.rows; ++n) {
    const double* row = x.data.data() + n * x.cols;
    const double wn = w[n];
    for (std::size_t j = begin; j < end; ++j) out[j] += row[j] * wn;
  }
}

GDSEC_CLONES void accumulate_sq_rows(MatrixView x, std::size_t begin, std::size_t end,
                        double* __restrict out) {
  for (std::size_t n = 0; n < x.rows; ++n) {
    const double* row = x.data.data() + n * x.cols;
    for (std::size_t j = begin; j < end; ++j) out[j] += row[j] * row[j];
  }
}

// Eight interleaved partial sums, combined in a fixed order. The lanes are
// independent, so the compiler can vectorize without reassociating.
GDSEC_CLONES double row_dot(const double* row, std::span<const double> theta) {
  constexpr std::size_t kLanes = 8;
  const std::size_t n = theta.size();
  const double* t = theta.data();
  double acc[kLanes] = {};
  std::size_t j = 0;
  for (; j + kLanes <= n; j += kLanes) {
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += row[j + l] * t[j + l];
  }
  for (; j < n; ++j) acc[0] += row[j] * t[j];
  return ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
         ((acc[4] + acc[5]) + (acc[6] + acc[7]));
}

}  // namespace

namespace serial {

std::vector<double> matvec(MatrixView x, std::span<const double> theta) {
  std::vector<double> out(x.rows, 0.0);
  for (std::size_t n = 0; n < x.rows; ++n) {
    out[n] = row_dot(x.data.data() + n * x.cols, theta);
  }
  return out;
}

std::vector<double> matvec_transposed(MatrixView x, std::span<const double> w) {
  std::vector<double> out(x.cols, 0.0);
  accumulate_rows(x, w, 0, x.cols, out.data());
  return out;
}

std::vector<double> column_sq_norms(MatrixView x) {
  std::vector<double> out(x.cols, 0.0);
  accumulate_sq_rows(x, 0, x.cols, out.data());
  return out;
}

}  // namespace serial

namespace parallel {

// OpenMP wants signed loop counters.
using Index = std::int64_t;
constexpr std::size_t kBlock = 64;

std::vector<double> matvec(MatrixView x, std::span<const double> theta) {
  std::vector<double> out(x.rows, 0.0);
  const auto rows = static_cast<Index>(x.rows);
#pragma omp parallel for schedule(static)
  for (Index n = 0; n < rows; ++n) {
    const auto r = static_cast<std::size_t>(n);
    out[r] = row_dot(x.data.data() + r * x.cols, theta);
  }
  return out;
}

std::vector<double> matvec_transposed(MatrixView x, std::span<const double> w) {
  std::vector<double> out(x.cols, 0.0);
  const auto blocks = static_cast<Index>((x.cols + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const auto begin = static_cast<std::size_t>(b) * kBlock;
    accumulate_rows(x, w, begin, std::min(begin + kBlock, x.cols), out.data());
  }
  return out;
}

std::vector<double> column_sq_norms(MatrixView x) {
  std::vector<double> out(x.cols, 0.0);
  const auto blocks = static_cast<Index>((x.cols + kBlock - 1) / kBlock);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const auto begin = static_cast<std::size_t>(b) * kBlock;
    accumulate_sq_rows(x, begin, std::min(begin + kBlock, x.cols), out.data());
  }
  return out;
}

}  // namespace parallel

}  // namespace gdsec::kernels
