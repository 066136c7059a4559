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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gdsec/objectives.hpp"
#include "test_support.hpp"

namespace gdsec {
namespace {

using testing::central_difference;
using testing::random_problem;
using testing::reference_value;
using testing::relative_error;

LocalDataset one_sample(std::vector<double> x, double y) {
  LocalDataset d;
  d.dim = x.size();
  d.rows = 1;
  d.n_total = 1;
  d.features = std::move(x);
  d.labels = {y};
  return d;
}

TEST(LocalValueTest, HandEvaluatedCases) {
  const ObjectiveSpec ridge{Family::kRidge, 0.0, 1};
  EXPECT_DOUBLE_EQ(local_value(ridge, one_sample({1, 0}, 1), DenseVector{0, 0}),
                   0.5);
  const ObjectiveSpec logistic{Family::kLogistic, 0.0, 1};
  EXPECT_NEAR(local_value(logistic, one_sample({3, -2}, -1), DenseVector{0, 0}),
              0.693147, 1e-6);
  const ObjectiveSpec nlls{Family::kNlls, 0.0, 1};
  EXPECT_DOUBLE_EQ(local_value(nlls, one_sample({0}, 1), DenseVector{0}), 0.125);
}

TEST(LocalValueTest, DimensionMismatchThrows) {
  const ObjectiveSpec ridge{Family::kRidge, 0.0, 1};
  EXPECT_THROW(local_value(ridge, one_sample({1, 0}, 1), DenseVector{0}),
               InvalidArgument);
  EXPECT_THROW(local_gradient(ridge, one_sample({1, 0}, 1), DenseVector{0}),
               InvalidArgument);
}

TEST(LocalGradientTest, HandEvaluatedCases) {
  const ObjectiveSpec ridge{Family::kRidge, 0.0, 1};
  EXPECT_EQ(local_gradient(ridge, one_sample({1, 0}, 1), DenseVector{0, 0}),
            (DenseVector{-1, 0}));
  const ObjectiveSpec logistic{Family::kLogistic, 0.0, 1};
  EXPECT_DOUBLE_EQ(
      local_gradient(logistic, one_sample({1}, 1), DenseVector{0})[0], -0.5);
}

TEST(LocalGradientTest, LassoSignOfZeroIsZero) {
  const ObjectiveSpec lasso{Family::kLasso, 1.0, 5};
  LocalDataset d = one_sample({0, 0, 0}, 0.0);
  EXPECT_EQ(local_gradient(lasso, d, DenseVector::zeros(3)),
            DenseVector::zeros(3));
}

class GradientFamilyTest : public ::testing::TestWithParam<Family> {};

TEST_P(GradientFamilyTest, MatchesCentralDifferences) {
  const Family family = GetParam();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = random_problem(family, 3, 6, 5, 100 + seed, 0.1);
    std::mt19937_64 rng(seed);
    std::vector<double> theta = testing::random_vector(5, rng, 0.5);
    if (family == Family::kLasso) {
      for (double& t : theta) {
        if (std::abs(t) < 1e-2) t = 0.1;
      }
    }
    for (const auto& data : p.data) {
      const auto f = [&](const std::vector<double>& th) {
        return local_value(p.spec, data, DenseVector(th));
      };
      const auto fd = central_difference(f, theta, 1e-6);
      const DenseVector g = local_gradient(p.spec, data, DenseVector(theta));
      EXPECT_LE(relative_error(g.values(), fd), 1e-5) << "seed " << seed;
    }
  }
}

TEST_P(GradientFamilyTest, LocalValuesSumToPooledLoss) {
  const Family family = GetParam();
  const Problem p = random_problem(family, 4, 5, 6, 7, 0.3);
  std::mt19937_64 rng(1);
  const std::vector<double> theta = testing::random_vector(6, rng);
  const double pooled = reference_value(p, theta);
  EXPECT_NEAR(global_value(p, DenseVector(theta)), pooled,
              1e-12 * std::abs(pooled));
}

TEST_P(GradientFamilyTest, FullBatchStochasticGradientIsExact) {
  const Problem p = random_problem(GetParam(), 2, 9, 4, 11, 0.2);
  const DenseVector theta{0.1, -0.2, 0.3, 0.4};
  std::vector<std::size_t> all(9);
  for (std::size_t i = 0; i < 9; ++i) all[i] = i;
  EXPECT_EQ(stochastic_gradient(p.spec, p.data[0], theta, all),
            local_gradient(p.spec, p.data[0], theta));
}

TEST_P(GradientFamilyTest, SingletonBatchesAverageToLocalGradient) {
  const Problem p = random_problem(GetParam(), 2, 7, 3, 5, 0.2);
  const DenseVector theta{0.3, -0.1, 0.2};
  std::vector<double> mean(3, 0.0);
  for (std::size_t n = 0; n < 7; ++n) {
    const std::size_t idx[] = {n};
    const DenseVector g = stochastic_gradient(p.spec, p.data[1], theta, idx);
    for (std::size_t i = 0; i < 3; ++i) mean[i] += g[i] / 7.0;
  }
  const DenseVector full = local_gradient(p.spec, p.data[1], theta);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(mean[i], full[i], 1e-12);
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, GradientFamilyTest,
                         ::testing::Values(Family::kRidge, Family::kLogistic,
                                           Family::kLasso, Family::kNlls));

TEST(StochasticGradientTest, RejectsBadBatches) {
  const Problem p = random_problem(Family::kRidge, 1, 3, 2, 1, 0.0);
  const DenseVector theta{0, 0};
  EXPECT_THROW(stochastic_gradient(p.spec, p.data[0], theta, {}),
               InvalidArgument);
  const std::size_t bad[] = {3};
  EXPECT_THROW(stochastic_gradient(p.spec, p.data[0], theta, bad),
               InvalidArgument);
}

TEST(SampleBatchTest, DistinctSortedInRange) {
  std::mt19937_64 rng(2);
  const auto b = sample_batch(20, 8, rng);
  ASSERT_EQ(b.size(), 8u);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_LT(b[i], 20u);
    if (i > 0) {
      EXPECT_LT(b[i - 1], b[i]);
    }
  }
}

TEST(SmoothnessTest, IsotropicGram) {
  // Rows sqrt(N) e_i give (1/N) X'X = I.
  LocalDataset d;
  d.dim = 3;
  d.rows = 3;
  d.n_total = 3;
  const double s = std::sqrt(3.0);
  d.features = {s, 0, 0, 0, s, 0, 0, 0, s};
  d.labels = {0, 0, 0};
  const LocalDataset parts[] = {d};
  const SmoothnessInfo info =
      smoothness(ObjectiveSpec{Family::kRidge, 0.0, 1}, parts);
  EXPECT_NEAR(info.L_global, 1.0, 1e-12);
  for (double l : info.L_coord) EXPECT_NEAR(l, 1.0, 1e-12);
  EXPECT_EQ(info.mu, 0.0);
}

TEST(SmoothnessTest, DuplicatedColumnGivesEqualCoordinateConstants) {
  const Problem base = random_problem(Family::kRidge, 2, 4, 1, 3, 0.0);
  Problem p;
  p.spec = ObjectiveSpec{Family::kRidge, 0.0, 2};
  for (const auto& d : base.data) {
    LocalDataset two = d;
    two.dim = 2;
    two.features.clear();
    for (double x : d.features) {
      two.features.push_back(x);
      two.features.push_back(x);
    }
    p.data.push_back(two);
  }
  const SmoothnessInfo info = smoothness(p.spec, p.data);
  EXPECT_DOUBLE_EQ(info.L_coord[0], info.L_coord[1]);
}

TEST(SmoothnessTest, MatchesPowerIterationOracle) {
  for (double lambda : {0.0, 0.5}) {
    const Problem p = random_problem(Family::kRidge, 1, 5, 3, 21, lambda);
    const double n = 5.0;
    const double oracle = testing::power_iteration(testing::gram(p, 1.0 / n)) + lambda;
    const SmoothnessInfo info = smoothness(p.spec, p.data);
    EXPECT_NEAR(info.L_global, oracle, 1e-8 * oracle);
    EXPECT_DOUBLE_EQ(info.mu, lambda);
  }
}

TEST(SmoothnessTest, LogisticUsesQuarterCurvature) {
  const Problem p = random_problem(Family::kLogistic, 2, 10, 4, 8, 0.01);
  const double oracle =
      0.25 * testing::power_iteration(testing::gram(p, 1.0 / 20.0)) + 0.01;
  const SmoothnessInfo info = smoothness(p.spec, p.data);
  EXPECT_NEAR(info.L_global, oracle, 1e-8 * oracle);
}

TEST(SmoothnessTest, OrderingInvariantOnL2Families) {
  for (Family f : {Family::kRidge, Family::kLogistic}) {
    const Problem p = random_problem(f, 3, 8, 6, 31, 0.2);
    const SmoothnessInfo info = smoothness(p.spec, p.data);
    for (double l : info.L_coord) {
      EXPECT_LE(info.mu, l);
      EXPECT_LE(l, info.L_global * (1.0 + 1e-12));
    }
    ASSERT_EQ(info.L_worker.size(), 3u);
    for (double l : info.L_worker) EXPECT_GT(l, 0.0);
  }
}

TEST(SmoothnessTest, NllsEstimateBelowAnalyticCurvatureBound) {
  // |phi''| <= sigma'^2 + |sigma''| <= 1/16 + 0.0963 for labels in [0, 1].
  const Problem p = random_problem(Family::kNlls, 2, 10, 4, 4, 0.0);
  const SmoothnessInfo info = smoothness(p.spec, p.data);
  const double bound =
      (1.0 / 16.0 + 0.0963) * testing::power_iteration(testing::gram(p, 1.0 / 20.0));
  EXPECT_GT(info.L_global, 0.0);
  EXPECT_LE(info.L_global, bound);
}

TEST(ParseFamilyTest, AcceptsAliases) {
  EXPECT_EQ(parse_family("ridge_linear"), Family::kRidge);
  EXPECT_EQ(parse_family("logistic"), Family::kLogistic);
  EXPECT_EQ(parse_family("lasso"), Family::kLasso);
  EXPECT_EQ(parse_family("nlls"), Family::kNlls);
  EXPECT_THROW(parse_family("svm"), InvalidArgument);
}

}  // namespace
}  // namespace gdsec
