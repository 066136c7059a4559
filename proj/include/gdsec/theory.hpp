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

// Convergence machinery for the sparsified method.
//
// Lyapunov function
//   V^k = f(theta^k) - f* + beta1 ||theta^k - theta^{k-1}||^2
//                         + beta2 ||theta^{k-1} - theta^{k-2}||^2
// decreases by at least
//   sigma0 ||grad f||^2 + sigma1 ||theta^k - theta^{k-1}||^2
//                       + sigma2 ||theta^{k-1} - theta^{k-2}||^2
// per step whenever
//   gamma  = L/2 - 1/(2 alpha) + beta1                         >= 0
//   sigma0 = alpha/2 - gamma (1 + rho) alpha^2                 >= 0
//   kappa  = alpha/2 + gamma (1 + 1/rho) alpha^2
//   sigma1 = beta1 - beta2 - (1 + rho2) xi^2 kappa             >= 0
//   sigma2 = beta2 - (1 + 1/rho2) xi^2 kappa                   >= 0
// with xi = max_i xi_i.

#ifndef GDSEC_THEORY_HPP_
#define GDSEC_THEORY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "gdsec/core.hpp"

namespace gdsec {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TheoryParams {
  double alpha = 0.0;
  double xi_max = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double rho = 1.0;
  double rho2 = 1.0;
  double L = 0.0;
  double mu = 0.0;

  void validate() const;
};

struct IterationComplexity {
  double exact = 0.0;  // ceil(log(1/eps) / -log(1-c))
  double loose = 0.0;  // log(1/eps) / c
};

struct TheoryReport {
  double gamma = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  bool feasible = false;
  std::optional<double> contraction_c;
  std::optional<IterationComplexity> iter_complexity;

  // Names the violated conditions, empty when feasible.
  std::string violations() const;
};

TheoryReport sigmas(const TheoryParams& p);

// Largest xi keeping sigma1 and sigma2 nonnegative. With
// beta1 = (1 - alpha L) / (2 alpha) this is
//   min{ sqrt(2 (beta1 - beta2) / ((1 + rho2) alpha)),
//        sqrt(2 beta2 / ((1 + 1/rho2) alpha)) }.
// Throws InfeasibleError when alpha > 1/L, gamma < 0 or beta1 < beta2.
double feasible_xi_bound(double alpha, double beta1, double beta2, double rho2,
                         double L, double rho = 1.0);

// Requires f_err >= -1e-12.
double lyapunov(double f_err, double d1_sq, double d2_sq, double beta1,
                double beta2);

// c = min{2 sigma0 mu, sigma1 / beta1, sigma2 / beta2}. Throws
// InfeasibleError naming the failed condition when the parameters do not
// qualify (infeasible, a zero sigma, zero beta1/beta2, or mu <= 0).
double contraction(const TheoryParams& p);

// The contraction with gamma eliminated, i.e. evaluated as if
// beta1 = (1 - alpha L) / (2 alpha):
//   min{ alpha mu, 1 - beta2/beta1 - (1 + rho2) alpha xi^2 / (2 beta1),
//        1 - (1 + 1/rho2) alpha xi^2 / (2 beta2) }.
double contraction_reduced(const TheoryParams& p);

IterationComplexity iteration_complexity(double c, double eps);

// rho = rho2 = 1, beta1 = (1 - alpha L) / (2 alpha), beta2 = beta1 / 2 and
// xi_max at feasible_xi_bound (both radicals equal). At alpha >= 1/L this
// collapses to beta1 = beta2 = xi_max = 0.
TheoryParams default_monitor_params(double alpha, double L, double mu);

// rho2 = 1, alpha = (1 - delta) / L, xi^2 = xi_fraction (1 - alpha mu) / alpha,
// beta2 = alpha xi^2 / (1 - alpha mu), beta1 = beta2 + 1 / (1 - alpha mu).
// contraction_reduced() of the result equals alpha mu.
TheoryParams special_choice_params(double delta, double L, double mu,
                                   double xi_fraction = 1.0);

// Full report: sigmas, plus contraction and complexity when they exist.
TheoryReport analyze(const TheoryParams& p, double eps = 1e-6);

// Folds a trajectory of StepRecords and checks the per-step inequalities.
struct MonitorReport {
  std::size_t steps = 0;
  bool nonincreasing = true;     // V^{k+1} <= V^k + slack
  bool drop_bound_holds = true;  // sigma-weighted drop
  bool descent_holds = true;     // descent inequality on f
  bool rate_holds = true;        // V^{k+1} <= (1 - c) V^k + slack, when c set
  double worst_increase = 0.0;   // max(V^{k+1} - V^k)
  double worst_drop_violation = 0.0;
  double worst_descent_violation = 0.0;
  double worst_rate_violation = 0.0;
  std::size_t first_failure_k = 0;  // 0 when everything held
};

MonitorReport monitor_trajectory(std::span<const StepRecord> steps,
                                 const TheoryParams& p, double f_star,
                                 std::optional<double> contraction_c = {},
                                 double slack = 1e-9);

}  // namespace gdsec

#endif  // GDSEC_THEORY_HPP_
