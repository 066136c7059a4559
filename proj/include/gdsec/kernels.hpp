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

// Dense data-parallel kernels behind the objective evaluations.
//
// Every kernel has a serial reference and an OpenMP version. Each output
// element is produced by exactly one thread with the same summation order as
// the serial loop, so both versions are bitwise identical for any thread
// count. Tests compare them directly; bench/ times them.

#ifndef GDSEC_KERNELS_HPP_
#define GDSEC_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace gdsec::kernels {

// Row-major rows x cols view.
struct MatrixView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

namespace serial {

// out[n] = sum_j X[n][j] * theta[j]
std::vector<double> matvec(MatrixView x, std::span<const double> theta);
// out[j] = sum_n X[n][j] * w[n]
std::vector<double> matvec_transposed(MatrixView x, std::span<const double> w);
// out[j] = sum_n X[n][j]^2
std::vector<double> column_sq_norms(MatrixView x);

}  // namespace serial

namespace parallel {

std::vector<double> matvec(MatrixView x, std::span<const double> theta);
std::vector<double> matvec_transposed(MatrixView x, std::span<const double> w);
std::vector<double> column_sq_norms(MatrixView x);

}  // namespace parallel

}  // namespace gdsec::kernels

#endif  // GDSEC_KERNELS_HPP_
