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
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gdsec/data.hpp"

namespace gdsec {
namespace {

GeneratorSpec spec(GeneratorKind kind, std::size_t M, std::size_t n,
                   std::size_t d, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = kind;
  s.workers = M;
  s.per_worker_n = n;
  s.dim = d;
  s.seed = seed;
  return s;
}

TEST(LogisticBlocksTest, BlockRangesPerWorker) {
  const auto data = gen_logistic_blocks(
      spec(GeneratorKind::kLogisticBlocks, 5, 50, 300, 1));
  ASSERT_EQ(data.size(), 5u);
  for (std::size_t m = 0; m < 5; ++m) {
    const LocalDataset& w = data[m];
    ASSERT_EQ(w.rows, 50u);
    ASSERT_EQ(w.dim, 300u);
    EXPECT_EQ(w.n_total, 250u);
    double own_max = 0.0, shared_max = 0.0;
    for (std::size_t n = 0; n < w.rows; ++n) {
      for (std::size_t j = 0; j < 300; ++j) {
        const double x = w.features[n * 300 + j];
        EXPECT_GE(x, 0.0);
        if (j >= 50 * m && j < 50 * m + 50) {
          EXPECT_LE(x, 1.0);
          own_max = std::max(own_max, x);
        } else if (j >= 250) {
          EXPECT_LE(x, 10.0);
          shared_max = std::max(shared_max, x);
        } else {
          EXPECT_LE(x, 0.01);
        }
      }
      EXPECT_TRUE(w.labels[n] == 1.0 || w.labels[n] == -1.0);
    }
    EXPECT_GT(own_max, 0.9);
    EXPECT_GT(shared_max, 9.0);
  }
}

TEST(LogisticBlocksTest, DeterministicPerSeed) {
  const auto s = spec(GeneratorKind::kLogisticBlocks, 5, 20, 300, 7);
  const auto a = gen_logistic_blocks(s);
  const auto b = gen_logistic_blocks(s);
  auto other = s;
  other.seed = 8;
  const auto c = gen_logistic_blocks(other);
  for (std::size_t m = 0; m < 5; ++m) {
    EXPECT_EQ(a[m].features, b[m].features);
    EXPECT_EQ(a[m].labels, b[m].labels);
    EXPECT_NE(a[m].features, c[m].features);
  }
}

TEST(LogisticBlocksTest, LabelsAreBalanced) {
  const auto data = gen_logistic_blocks(
      spec(GeneratorKind::kLogisticBlocks, 5, 2000, 300, 3));
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& w : data) {
    for (double y : w.labels) {
      sum += y;
      ++count;
    }
  }
  ASSERT_EQ(count, 10000u);
  EXPECT_LE(std::abs(sum / count), 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST(LogisticBlocksTest, RejectsIncompatibleShape) {
  EXPECT_THROW(
      gen_logistic_blocks(spec(GeneratorKind::kLogisticBlocks, 6, 10, 300, 1)),
      InvalidArgument);
}

TEST(CoordLipschitzTest, ReplacedEntryFollowsGeometricScale) {
  const auto data = gen_coord_lipschitz(
      spec(GeneratorKind::kCoordLipschitz, 10, 50, 50, 2));
  // Worker 3 and sample 5, counted from one.
  const double entry = data[2].features[4 * 50 + 4];
  EXPECT_NEAR(entry, 3.0 * std::pow(1.1, 5), 1e-12);
  EXPECT_NEAR(entry, 4.83153, 1e-5);
  EXPECT_LE(data[2].features[4 * 50 + 5], 0.01);
}

TEST(CoordLipschitzTest, SmoothnessIncreasesAcrossCoordinatesAndWorkers) {
  const auto data = gen_coord_lipschitz(
      spec(GeneratorKind::kCoordLipschitz, 10, 50, 50, 4));
  const ObjectiveSpec obj{Family::kRidge, 0.0, 10};
  for (const auto& w : data) {
    const LocalDataset parts[] = {w};
    const SmoothnessInfo info = smoothness(obj, parts);
    for (std::size_t i = 1; i < info.L_coord.size(); ++i) {
      EXPECT_GT(info.L_coord[i], info.L_coord[i - 1]);
    }
  }
  const SmoothnessInfo all = smoothness(obj, data);
  for (std::size_t m = 1; m < all.L_worker.size(); ++m) {
    EXPECT_GT(all.L_worker[m], all.L_worker[m - 1]);
  }
}

TEST(GaussianRidgeTest, ShapeAndDeterminism) {
  const auto s = spec(GeneratorKind::kGaussianRidge, 3, 7, 4, 5);
  const auto a = generate(s);
  ASSERT_EQ(a.size(), 3u);
  for (const auto& w : a) {
    EXPECT_EQ(w.features.size(), 28u);
    EXPECT_EQ(w.n_total, 21u);
  }
  EXPECT_EQ(generate(s)[1].features, a[1].features);
  EXPECT_EQ(parse_generator("gaussian_ridge"), GeneratorKind::kGaussianRidge);
  EXPECT_THROW(parse_generator("mnist"), InvalidArgument);
}

TEST(SvmFormatTest, ParsesSparseLine) {
  std::istringstream in("+1 1:0.5 3:2\n");
  const LocalDataset d = parse_svm(in, 3);
  ASSERT_EQ(d.rows, 1u);
  EXPECT_EQ(d.labels, (std::vector<double>{1.0}));
  EXPECT_EQ(d.features, (std::vector<double>{0.5, 0.0, 2.0}));
}

TEST(SvmFormatTest, InfersDimensionFromLargestIndex) {
  std::istringstream in("-1 2:1\n1 5:3 7:1\n");
  const LocalDataset d = parse_svm(in);
  EXPECT_EQ(d.dim, 7u);
  EXPECT_EQ(d.features[1], 1.0);
  EXPECT_EQ(d.features[7 + 4], 3.0);
}

TEST(SvmFormatTest, ErrorsCarryLineNumbers) {
  const char* bad[] = {"1 1:0.5\n1 0:2\n", "1 1:0.5\n1 3:1 2:1\n",
                       "1 1:0.5\n1 2:x\n", "1 1:0.5\nfoo 1:1\n"};
  for (const char* text : bad) {
    std::istringstream in(text);
    try {
      parse_svm(in);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2u) << text;
    }
  }
  std::istringstream empty("");
  EXPECT_THROW(parse_svm(empty), ParseError);
  std::istringstream wide("1 4:1\n");
  EXPECT_THROW(parse_svm(wide, 3), ParseError);
}

LocalDataset rows(std::size_t n, std::size_t d) {
  LocalDataset all;
  all.rows = n;
  all.dim = d;
  all.n_total = n;
  for (std::size_t i = 0; i < n * d; ++i) all.features.push_back(static_cast<double>(i));
  for (std::size_t i = 0; i < n; ++i) all.labels.push_back(static_cast<double>(i));
  return all;
}

TEST(SplitEvenTest, ContiguousWithRemainderOnLastWorker) {
  const auto even = split_even(rows(10, 2), 5);
  ASSERT_EQ(even.size(), 5u);
  for (const auto& w : even) {
    EXPECT_EQ(w.rows, 2u);
    EXPECT_EQ(w.n_total, 10u);
  }
  const auto uneven = split_even(rows(11, 2), 3);
  EXPECT_EQ(uneven[0].rows, 3u);
  EXPECT_EQ(uneven[1].rows, 3u);
  EXPECT_EQ(uneven[2].rows, 5u);
  std::vector<double> labels;
  for (const auto& w : uneven) labels.insert(labels.end(), w.labels.begin(), w.labels.end());
  EXPECT_EQ(labels, rows(11, 2).labels);
  EXPECT_THROW(split_even(rows(2, 2), 3), InvalidArgument);
}

TEST(StandardizeTest, ZeroMeanUnitVariance) {
  LocalDataset d = rows(9, 3);
  for (std::size_t i = 0; i < d.features.size(); ++i) {
    d.features[i] = std::sin(1.7 * static_cast<double>(i)) * 5.0 + 3.0;
  }
  for (std::size_t n = 0; n < 9; ++n) d.features[n * 3 + 2] = 4.0;
  standardize(d);
  for (std::size_t j = 0; j < 2; ++j) {
    double mean = 0.0;
    for (std::size_t n = 0; n < 9; ++n) mean += d.features[n * 3 + j] / 9.0;
    double var = 0.0;
    for (std::size_t n = 0; n < 9; ++n) {
      var += (d.features[n * 3 + j] - mean) * (d.features[n * 3 + j] - mean) / 9.0;
    }
    EXPECT_NEAR(mean, 0.0, 1e-10);
    EXPECT_NEAR(var, 1.0, 1e-10);
  }
  for (std::size_t n = 0; n < 9; ++n) EXPECT_EQ(d.features[n * 3 + 2], 0.0);
}

TEST(CsvTest, RoundTripThroughWriter) {
  const auto data = generate(spec(GeneratorKind::kGaussianRidge, 2, 3, 4, 9));
  std::ostringstream out;
  write_csv(out, data);
  EXPECT_EQ(out.str().substr(0, 18), "label,f1,f2,f3,f4\n");
  std::istringstream in(out.str());
  const LocalDataset back = parse_csv(in);
  ASSERT_EQ(back.rows, 6u);
  ASSERT_EQ(back.dim, 4u);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_EQ(back.labels[3 + n], data[1].labels[n]);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_EQ(back.features[(3 + n) * 4 + j], data[1].features[n * 4 + j]);
    }
  }
}

TEST(CsvTest, HeaderIsOptionalAndRaggedRowsFail) {
  std::istringstream plain("1,2,3\n-1,4,5\n");
  const LocalDataset d = parse_csv(plain);
  EXPECT_EQ(d.rows, 2u);
  EXPECT_EQ(d.dim, 2u);
  std::istringstream ragged("label,f1,f2\n1,2,3\n-1,4\n");
  try {
    parse_csv(ragged);
    ADD_FAILURE() << "ragged csv accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadFileTest, SvmFileSplitsAcrossWorkers) {
  const auto path = std::filesystem::temp_directory_path() / "gdsec_data_test.svm";
  {
    std::ofstream f(path);
    for (int i = 0; i < 10; ++i) f << (i % 2 ? "+1" : "-1") << " 1:" << i << " 2:1\n";
  }
  const auto parts = load_svm_format(path, 5, 2);
  ASSERT_EQ(parts.size(), 5u);
  for (const auto& w : parts) EXPECT_EQ(w.rows, 2u);
  EXPECT_EQ(parts[4].features[2], 9.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_svm_format(path, 5), std::exception);
}

}  // namespace
}  // namespace gdsec
