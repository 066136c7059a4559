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

// Local loss families f_m for the distributed problem f = sum_m f_m.
//
// All families normalize the data term by the global sample count N (not the
// local N_m), and split the regularizer evenly across the M workers, so the
// sum of the local functions is exactly the pooled loss:
//
//   ridge     1/(2N) sum (y - x'theta)^2              + lambda/(2M) ||theta||^2
//   logistic  1/N    sum log(1 + exp(-y x'theta))     + lambda/(2M) ||theta||^2
//   lasso     1/(2N) sum (y - x'theta)^2              + lambda/M    ||theta||_1
//   nlls      1/(2N) sum (y - sigmoid(x'theta))^2     + lambda/(2M) ||theta||^2
//
// The lasso gradient is the subgradient with sign(0) = 0.

#ifndef GDSEC_OBJECTIVES_HPP_
#define GDSEC_OBJECTIVES_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdsec/core.hpp"
#include "gdsec/kernels.hpp"

namespace gdsec {

enum class Family { kRidge, kLogistic, kLasso, kNlls };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

// Samples held by one worker. Features are row-major, rows x dim.
struct LocalDataset {
  std::vector<double> features;
  std::vector<double> labels;
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::size_t n_total = 0;  // global N used in the 1/N normalization

  void validate() const;
  kernels::MatrixView view() const { return {features, rows, dim}; }
  std::span<const double> row(std::size_t n) const {
    return std::span<const double>(features).subspan(n * dim, dim);
  }
};

struct ObjectiveSpec {
  Family family = Family::kRidge;
  double lambda = 0.0;
  std::size_t workers = 1;

  void validate() const;
};

struct SmoothnessInfo {
  double L_global = 0.0;
  std::vector<double> L_worker;
  std::vector<double> L_coord;
  double mu = 0.0;
};

// The full distributed objective: one dataset per worker.
struct Problem {
  ObjectiveSpec spec;
  std::vector<LocalDataset> data;

  std::size_t dim() const { return data.empty() ? 0 : data.front().dim; }
  std::size_t workers() const { return data.size(); }
  void validate() const;
};

double local_value(const ObjectiveSpec& spec, const LocalDataset& data,
                   const DenseVector& theta);
DenseVector local_gradient(const ObjectiveSpec& spec, const LocalDataset& data,
                           const DenseVector& theta);

struct LocalEvaluation {
  double value = 0.0;
  DenseVector gradient;
};

// local_value and local_gradient from a single pass over the margins; both
// results match the separate calls bit for bit.
LocalEvaluation local_value_and_gradient(const ObjectiveSpec& spec,
                                         const LocalDataset& data,
                                         const DenseVector& theta);

// Minibatch gradient whose data term is rescaled by N_m/|batch| so that its
// mean over uniformly drawn batches equals local_gradient. Indices may repeat.
DenseVector stochastic_gradient(const ObjectiveSpec& spec,
                                const LocalDataset& data,
                                const DenseVector& theta,
                                std::span<const std::size_t> batch);

// Draws `batch_size` distinct row indices (sorted) uniformly from [0, rows).
std::vector<std::size_t> sample_batch(std::size_t rows, std::size_t batch_size,
                                      std::mt19937_64& rng);

double global_value(const Problem& problem, const DenseVector& theta);
DenseVector global_gradient(const Problem& problem, const DenseVector& theta);

// Smoothness and strong-convexity constants.
//
// ridge/lasso: eigen/diagonal of G = X'X/N (plus lambda for ridge; lasso
//   reports the smooth part only).
// logistic: G/4 plus lambda.
// nlls: coordinate and worker constants use the sup of the per-sample
//   curvature over the label range times G; L_global is an empirical
//   estimate (finite-difference power iteration at random points), raised to
//   at least max_i L_coord_i. It is a step-size suggestion, not a bound.
// mu = lambda for ridge and logistic, 0 otherwise.
SmoothnessInfo smoothness(const ObjectiveSpec& spec,
                          std::span<const LocalDataset> data);

// Largest eigenvalue of X'X * scale (dense eigensolver for moderate d, power
// iteration otherwise).
double gram_max_eigenvalue(std::span<const LocalDataset> data, double scale);

// Concatenates all worker rows into one dataset (row order preserved).
LocalDataset pool(std::span<const LocalDataset> data);

}  // namespace gdsec

#endif  // GDSEC_OBJECTIVES_HPP_
