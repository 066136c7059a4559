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

// Synthetic generators and text loaders. Every generator is a pure function
// of its GeneratorSpec.
//
// logistic_blocks (0-based coordinates, worker m = 0..M-1):
//   [50m, 50m + 50)   U(0, 1)      worker-private block
//   [d - 50, d)       U(0, 10)     block shared by every worker
//   elsewhere         U(0, 0.01)
//   labels +1 / -1 with equal probability.
//
// coord_lipschitz (1-based worker m and sample n): features U(0, 0.01), then
//   entry n of sample n is replaced by m * 1.1^n; labels +1 / -1.
//
// gaussian_ridge: features N(0, 1), y = x' theta_true + 0.1 N(0, 1) with
//   theta_true ~ N(0, 1).

#ifndef GDSEC_DATA_HPP_
#define GDSEC_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gdsec/objectives.hpp"

namespace gdsec {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class GeneratorKind { kLogisticBlocks, kCoordLipschitz, kGaussianRidge };

std::string_view to_string(GeneratorKind kind);
GeneratorKind parse_generator(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kLogisticBlocks;
  std::size_t workers = 5;
  std::size_t per_worker_n = 50;
  std::size_t dim = 300;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<LocalDataset> gen_logistic_blocks(const GeneratorSpec& spec);
std::vector<LocalDataset> gen_coord_lipschitz(const GeneratorSpec& spec);
std::vector<LocalDataset> gen_gaussian_ridge(const GeneratorSpec& spec);
std::vector<LocalDataset> generate(const GeneratorSpec& spec);

// Contiguous split: floor(N/M) rows per worker, remainder to the last.
std::vector<LocalDataset> split_even(const LocalDataset& all,
                                     std::size_t workers);

// Per-feature z-score (population variance). Constant columns become zero.
void standardize(LocalDataset& data);

// `label idx:val ...` with 1-based ascending indices. dim = 0 infers the
// dimension from the largest index seen. Blank lines and '#' comments are
// skipped.
LocalDataset parse_svm(std::istream& in, std::size_t dim = 0);
std::vector<LocalDataset> load_svm_format(const std::filesystem::path& path,
                                          std::size_t workers,
                                          std::size_t dim = 0,
                                          bool standardize_features = false);

// `label,f1,...,fd`, header line optional.
LocalDataset parse_csv(std::istream& in);
std::vector<LocalDataset> load_csv(const std::filesystem::path& path,
                                   std::size_t workers,
                                   bool standardize_features = false);
void write_csv(std::ostream& out, std::span<const LocalDataset> data);

}  // namespace gdsec

#endif  // GDSEC_DATA_HPP_
