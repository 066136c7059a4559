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

#include "gdsec/theory.hpp"

#include <algorithm>
#include <cmath>

namespace gdsec {
namespace {

// Boundary choices such as beta1 = (1 - alpha L)/(2 alpha) cancel gamma only
// up to round-off; values that small are treated as exactly zero.
// Differences of nearly equal terms below this relative size count as zero.
double snap_roundoff(double value, double scale) {
  return std::abs(value) <= 1e-12 * scale ? 0.0 : value;
}

double gamma_of(const TheoryParams& p) {
  return snap_roundoff(p.L / 2.0 - 1.0 / (2.0 * p.alpha) + p.beta1,
                       p.L + 1.0 / p.alpha + p.beta1);
}

double kappa_of(const TheoryParams& p, double gamma) {
  return p.alpha / 2.0 + gamma * (1.0 + 1.0 / p.rho) * p.alpha * p.alpha;
}

double lyapunov_unchecked(double f_err, double d1_sq, double d2_sq,
                          double beta1, double beta2) {
  return f_err + beta1 * d1_sq + beta2 * d2_sq;
}

}  // namespace

void TheoryParams::validate() const {
  if (!(alpha > 0.0)) throw InvalidArgument("TheoryParams: alpha must be > 0");
  if (!(rho > 0.0) || !(rho2 > 0.0)) {
    throw InvalidArgument("TheoryParams: rho and rho2 must be > 0");
  }
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0)) {
    throw InvalidArgument("TheoryParams: beta1, beta2 must be >= 0");
  }
  if (!(xi_max >= 0.0)) throw InvalidArgument("TheoryParams: xi < 0");
  if (!(L > 0.0)) throw InvalidArgument("TheoryParams: L must be > 0");
  if (!(mu >= 0.0)) throw InvalidArgument("TheoryParams: mu must be >= 0");
}

std::string TheoryReport::violations() const {
  std::string out;
  auto add = [&](bool bad, const char* name) {
    if (!bad) return;
    if (!out.empty()) out += ", ";
    out += name;
  };
  add(gamma < 0.0, "gamma < 0");
  add(sigma0 < 0.0, "sigma0 < 0");
  add(sigma1 < 0.0, "sigma1 < 0");
  add(sigma2 < 0.0, "sigma2 < 0");
  return out;
}

TheoryReport sigmas(const TheoryParams& p) {
  p.validate();
  TheoryReport r;
  r.gamma = gamma_of(p);
  const double s0_loss = r.gamma * (1.0 + p.rho) * p.alpha * p.alpha;
  r.sigma0 = snap_roundoff(p.alpha / 2.0 - s0_loss, p.alpha / 2.0 + s0_loss);
  const double kappa = kappa_of(p, r.gamma);
  const double xi_sq = p.xi_max * p.xi_max;
  const double s1_loss = (1.0 + p.rho2) * xi_sq * kappa;
  const double s2_loss = (1.0 + 1.0 / p.rho2) * xi_sq * kappa;
  r.sigma1 = snap_roundoff(p.beta1 - p.beta2 - s1_loss, p.beta1 + p.beta2 + s1_loss);
  r.sigma2 = snap_roundoff(p.beta2 - s2_loss, p.beta2 + s2_loss);
  r.feasible =
      r.gamma >= 0.0 && r.sigma0 >= 0.0 && r.sigma1 >= 0.0 && r.sigma2 >= 0.0;
  return r;
}

double feasible_xi_bound(double alpha, double beta1, double beta2, double rho2,
                         double L, double rho) {
  if (!(alpha > 0.0) || !(L > 0.0) || !(rho > 0.0) || !(rho2 > 0.0)) {
    throw InvalidArgument("feasible_xi_bound: alpha, L, rho, rho2 must be > 0");
  }
  if (alpha * L > 1.0 + 1e-12) {
    throw InfeasibleError("feasible_xi_bound: alpha > 1/L");
  }
  if (!(beta2 >= 0.0) || beta1 < beta2) {
    throw InfeasibleError("feasible_xi_bound: need beta1 >= beta2 >= 0");
  }
  TheoryParams p;
  p.alpha = alpha;
  p.L = L;
  p.beta1 = beta1;
  const double g = gamma_of(p);
  if (g < 0.0) throw InfeasibleError("feasible_xi_bound: gamma < 0");
  const double kappa = alpha / 2.0 + g * (1.0 + 1.0 / rho) * alpha * alpha;
  const double first = (beta1 - beta2) / ((1.0 + rho2) * kappa);
  const double second = beta2 / ((1.0 + 1.0 / rho2) * kappa);
  return std::sqrt(std::min(first, second));
}

double lyapunov(double f_err, double d1_sq, double d2_sq, double beta1,
                double beta2) {
  if (f_err < -1e-12) {
    throw InvalidArgument("lyapunov: objective error below -1e-12");
  }
  return lyapunov_unchecked(f_err, d1_sq, d2_sq, beta1, beta2);
}

double contraction(const TheoryParams& p) {
  const TheoryReport r = sigmas(p);
  if (!r.feasible) {
    throw InfeasibleError("contraction: infeasible parameters (" +
                          r.violations() + ")");
  }
  if (r.sigma0 == 0.0 || r.sigma1 == 0.0 || r.sigma2 == 0.0) {
    throw InfeasibleError("contraction: sigma0 sigma1 sigma2 must be nonzero");
  }
  if (p.beta1 == 0.0 || p.beta2 == 0.0) {
    throw InfeasibleError("contraction: beta1 beta2 must be nonzero");
  }
  if (!(p.mu > 0.0)) {
    throw InfeasibleError("contraction: requires strong convexity (mu > 0)");
  }
  return std::min({2.0 * r.sigma0 * p.mu, r.sigma1 / p.beta1,
                   r.sigma2 / p.beta2});
}

double contraction_reduced(const TheoryParams& p) {
  p.validate();
  if (p.beta1 == 0.0 || p.beta2 == 0.0) {
    throw InfeasibleError("contraction_reduced: beta1 beta2 must be nonzero");
  }
  const double a_xi_sq = p.alpha * p.xi_max * p.xi_max;
  return std::min(
      {p.alpha * p.mu,
       1.0 - p.beta2 / p.beta1 - (1.0 + p.rho2) * a_xi_sq / (2.0 * p.beta1),
       1.0 - (1.0 + 1.0 / p.rho2) * a_xi_sq / (2.0 * p.beta2)});
}

IterationComplexity iteration_complexity(double c, double eps) {
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidArgument("iteration_complexity: c must lie in (0, 1)");
  }
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw InvalidArgument("iteration_complexity: eps must lie in (0, 1]");
  }
  IterationComplexity out;
  const double log_inv_eps = std::log(1.0 / eps);
  const double ratio = log_inv_eps / -std::log1p(-c);
  // ln(4)/ln(2) may land a few ulps above 2.
  out.exact = std::max(0.0, std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
  out.loose = log_inv_eps / c;
  return out;
}

TheoryParams default_monitor_params(double alpha, double L, double mu) {
  TheoryParams p;
  p.alpha = alpha;
  p.L = L;
  p.mu = mu;
  p.rho = 1.0;
  p.rho2 = 1.0;
  const double beta1 = (1.0 - alpha * L) / (2.0 * alpha);
  if (beta1 <= 0.0) {
    p.beta1 = 0.0;
    p.beta2 = 0.0;
    p.xi_max = 0.0;
    return p;
  }
  p.beta1 = beta1;
  p.beta2 = beta1 / 2.0;
  p.xi_max = feasible_xi_bound(alpha, p.beta1, p.beta2, p.rho2, L, p.rho);
  return p;
}

TheoryParams special_choice_params(double delta, double L, double mu,
                                   double xi_fraction) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("special_choice_params: delta must lie in (0, 1)");
  }
  if (!(xi_fraction >= 0.0 && xi_fraction <= 1.0)) {
    throw InvalidArgument("special_choice_params: xi_fraction in [0, 1]");
  }
  TheoryParams p;
  p.L = L;
  p.mu = mu;
  p.rho = 1.0;
  p.rho2 = 1.0;
  p.alpha = (1.0 - delta) / L;
  const double shrink = 1.0 - p.alpha * mu;
  const double xi_sq = xi_fraction * shrink / p.alpha;
  p.xi_max = std::sqrt(xi_sq);
  p.beta2 = p.alpha * xi_sq / shrink;
  p.beta1 = p.beta2 + 1.0 / shrink;
  p.validate();
  return p;
}

TheoryReport analyze(const TheoryParams& p, double eps) {
  TheoryReport r = sigmas(p);
  try {
    r.contraction_c = contraction(p);
    if (*r.contraction_c > 0.0 && *r.contraction_c < 1.0) {
      r.iter_complexity = iteration_complexity(*r.contraction_c, eps);
    }
  } catch (const InfeasibleError&) {
  }
  return r;
}

MonitorReport monitor_trajectory(std::span<const StepRecord> steps,
                                 const TheoryParams& p, double f_star,
                                 std::optional<double> contraction_c,
                                 double slack) {
  const TheoryReport r = sigmas(p);
  MonitorReport out;
  auto fail = [&](std::size_t k) {
    if (out.first_failure_k == 0) out.first_failure_k = k;
  };
  for (const StepRecord& s : steps) {
    ++out.steps;
    const double v_now =
        lyapunov_unchecked(s.f_current - f_star, s.step_current_sq,
                           s.step_previous_sq, p.beta1, p.beta2);
    const double v_next =
        lyapunov_unchecked(s.f_next - f_star, s.step_next_sq,
                           s.step_current_sq, p.beta1, p.beta2);
    const double increase = v_next - v_now;
    out.worst_increase = std::max(out.worst_increase, increase);
    if (increase > slack) {
      out.nonincreasing = false;
      fail(s.k);
    }

    const double bound = -r.sigma0 * s.grad_norm_sq -
                         r.sigma1 * s.step_current_sq -
                         r.sigma2 * s.step_previous_sq;
    const double drop_violation = increase - bound;
    out.worst_drop_violation = std::max(out.worst_drop_violation, drop_violation);
    if (drop_violation > slack) {
      out.drop_bound_holds = false;
      fail(s.k);
    }

    const double descent_rhs =
        -(p.alpha / 2.0) * s.grad_norm_sq +
        (p.alpha / 2.0) * s.compression_error_sq +
        (p.L / 2.0 - 1.0 / (2.0 * p.alpha)) * s.step_next_sq;
    const double descent_violation = (s.f_next - s.f_current) - descent_rhs;
    out.worst_descent_violation =
        std::max(out.worst_descent_violation, descent_violation);
    if (descent_violation > slack) {
      out.descent_holds = false;
      fail(s.k);
    }

    if (contraction_c) {
      const double rate_violation = v_next - (1.0 - *contraction_c) * v_now;
      out.worst_rate_violation =
          std::max(out.worst_rate_violation, rate_violation);
      if (rate_violation > slack) {
        out.rate_holds = false;
        fail(s.k);
      }
    }
  }
  return out;
}

}  // namespace gdsec
