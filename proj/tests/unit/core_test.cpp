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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gdsec/core.hpp"

namespace gdsec {
namespace {

TEST(DenseVectorTest, RejectsNonFiniteEntries) {
  EXPECT_THROW(DenseVector({1.0, std::nan("")}), NonFiniteError);
  EXPECT_THROW(DenseVector({std::numeric_limits<double>::infinity()}),
               NonFiniteError);
  EXPECT_NO_THROW(DenseVector({0.0, -1.5}));
}

TEST(DenseVectorTest, ZerosHasRequestedDimension) {
  const DenseVector z = DenseVector::zeros(7);
  EXPECT_EQ(z.dim(), 7u);
  for (double x : z.values()) EXPECT_EQ(x, 0.0);
}

TEST(SparseDeltaTest, ValidatesEntries) {
  EXPECT_THROW(SparseDelta(4, {{2, 1.0}, {1, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseDelta(4, {{1, 1.0}, {1, 2.0}}), InvalidArgument);
  EXPECT_THROW(SparseDelta(4, {{4, 1.0}}), InvalidArgument);
  EXPECT_THROW(SparseDelta(4, {{0, 0.0}}), InvalidArgument);
  EXPECT_THROW(SparseDelta(4, {{0, std::nan("")}}), NonFiniteError);
  EXPECT_NO_THROW(SparseDelta(4, {{0, 1.0}, {3, -2.0}}));
}

TEST(SparseDeltaTest, FromDenseKeepsExactlyTheNonzeros) {
  const DenseVector v{0.0, 2.0, 0.0, -3.0, 0.0};
  const SparseDelta s = SparseDelta::from_dense(v);
  EXPECT_EQ(s.nnz(), 2u);
  EXPECT_EQ(s.indices(), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(densify(s), v);
}

TEST(SparseDeltaTest, ApplySparseMatchesDenseAddition) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> base(20), delta(20, 0.0);
    for (std::size_t i = 0; i < 20; ++i) {
      base[i] = normal(rng);
      if (keep(rng)) delta[i] = normal(rng);
    }
    const DenseVector b(base);
    const DenseVector dd(delta);
    EXPECT_EQ(apply_sparse(b, SparseDelta::from_dense(dd)), add(b, dd));
  }
}

TEST(SparseDeltaTest, EmptyDeltaIsIdentity) {
  const DenseVector v{1.0, 2.0, 3.0};
  EXPECT_EQ(apply_sparse(v, SparseDelta(3, {})), v);
}

TEST(SparseDeltaTest, DimensionMismatchThrows) {
  EXPECT_THROW(apply_sparse(DenseVector::zeros(3), SparseDelta(4, {})),
               InvalidArgument);
}

TEST(HyperParamsTest, Validation) {
  HyperParams hp = HyperParams::uniform(0.1, 0.5, 1.0, 3, 2, 10);
  EXPECT_NO_THROW(hp.validate(3));
  EXPECT_THROW(hp.validate(4), InvalidArgument);
  hp.alpha = 0.0;
  EXPECT_THROW(hp.validate(), InvalidArgument);
  hp.alpha = 0.1;
  hp.beta = 0.0;
  EXPECT_THROW(hp.validate(), InvalidArgument);
  hp.beta = 1.0;
  EXPECT_NO_THROW(hp.validate());
  hp.beta = 1.5;
  EXPECT_THROW(hp.validate(), InvalidArgument);
  hp.beta = 1.0;
  hp.xi[1] = -1.0;
  EXPECT_THROW(hp.validate(), InvalidArgument);
  hp.xi[1] = 0.0;
  hp.workers = 0;
  EXPECT_THROW(hp.validate(), InvalidArgument);
}

TEST(BitLedgerTest, CountersOnlyGrowAndSumToTotal) {
  BitLedger ledger(3);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::uint64_t> bits(0, 500);
  std::uint64_t previous = 0;
  for (int i = 0; i < 200; ++i) {
    ledger.charge(static_cast<std::size_t>(i % 3), bits(rng));
    EXPECT_GE(ledger.total_bits(), previous);
    previous = ledger.total_bits();
  }
  std::uint64_t sum = 0;
  for (auto b : ledger.per_worker_bits()) sum += b;
  EXPECT_EQ(sum, ledger.total_bits());
}

TEST(BitLedgerTest, ZeroChargeIsNotATransmission) {
  BitLedger ledger(2);
  ledger.charge(0, 0);
  ledger.charge(1, 64);
  EXPECT_EQ(ledger.transmissions()[0], 0u);
  EXPECT_EQ(ledger.transmissions()[1], 1u);
  EXPECT_EQ(ledger.total_transmissions(), 1u);
  EXPECT_THROW(ledger.charge(2, 1), InvalidArgument);
}

TEST(VectorOpsTest, Arithmetic) {
  const DenseVector a{1.0, 2.0, 3.0};
  const DenseVector b{4.0, -5.0, 6.0};
  EXPECT_EQ(add(a, b), (DenseVector{5.0, -3.0, 9.0}));
  EXPECT_EQ(subtract(a, b), (DenseVector{-3.0, 7.0, -3.0}));
  EXPECT_EQ(scale(a, 2.0), (DenseVector{2.0, 4.0, 6.0}));
  EXPECT_EQ(axpy(a, 2.0, b), (DenseVector{9.0, -8.0, 15.0}));
  EXPECT_DOUBLE_EQ(dot(a, b), 12.0);
  EXPECT_DOUBLE_EQ(norm_sq(a), 14.0);
  EXPECT_DOUBLE_EQ(norm(a), std::sqrt(14.0));
  EXPECT_THROW(add(a, DenseVector::zeros(2)), InvalidArgument);
}

}  // namespace
}  // namespace gdsec
