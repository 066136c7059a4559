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

#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "gdsec/kernels.hpp"

namespace gdsec::kernels {
namespace {

struct Case {
  std::size_t rows;
  std::size_t cols;
};

class KernelsTest : public ::testing::TestWithParam<Case> {};

TEST_P(KernelsTest, ParallelMatchesSerialBitwise) {
  const Case c = GetParam();
  std::mt19937_64 rng(c.rows * 131 + c.cols);
  std::normal_distribution<double> normal;
  std::vector<double> data(c.rows * c.cols), x(c.cols), w(c.rows);
  for (double& v : data) v = normal(rng);
  for (double& v : x) v = normal(rng);
  for (double& v : w) v = normal(rng);
  const MatrixView X{data, c.rows, c.cols};
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    EXPECT_EQ(parallel::matvec(X, x), serial::matvec(X, x));
    EXPECT_EQ(parallel::matvec_transposed(X, w), serial::matvec_transposed(X, w));
    EXPECT_EQ(parallel::column_sq_norms(X), serial::column_sq_norms(X));
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, KernelsTest,
                         ::testing::Values(Case{1, 1}, Case{7, 3}, Case{50, 300},
                                           Case{513, 17}));

TEST(KernelsSerialTest, MatchesHandComputation) {
  const std::vector<double> data = {1, 2, 3, 4, 5, 6};  // 2 x 3
  const MatrixView X{data, 2, 3};
  const std::vector<double> x = {1, 0, -1};
  const std::vector<double> w = {1, 2};
  EXPECT_EQ(serial::matvec(X, x), (std::vector<double>{-2, -2}));
  EXPECT_EQ(serial::matvec_transposed(X, w), (std::vector<double>{9, 12, 15}));
  EXPECT_EQ(serial::column_sq_norms(X), (std::vector<double>{17, 29, 45}));
}

}  // namespace
}  // namespace gdsec::kernels
