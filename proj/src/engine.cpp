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

#include "gdsec/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace gdsec {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<double> sum_received(std::span<const WireMessage> messages,
                                 std::size_t dim) {
  std::vector<double> sum(dim, 0.0);
  for (const WireMessage& msg : messages) {
    switch (msg.kind()) {
      case MessageKind::kNone:
        break;
      case MessageKind::kSparseDelta: {
        const auto& sd = std::get<SparseDelta>(msg.payload);
        check_same_dim(sd.dim(), dim, "server aggregate");
        for (const auto& e : sd.entries()) sum[e.index] += e.value;
        break;
      }
      default: {
        const DenseVector v = received_vector(msg, dim);
        for (std::size_t i = 0; i < dim; ++i) sum[i] += v[i];
        break;
      }
    }
  }
  return sum;
}

std::mt19937_64 round_rng(std::uint64_t seed, std::size_t k, std::size_t m) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k),
                    static_cast<std::uint32_t>(m), 0x9d5au};
  return std::mt19937_64(seq);
}

// Objective at theta plus every local gradient, one data pass per worker.
// The values are summed in worker order, matching global_value.
double evaluate_workers(const Problem& problem, const DenseVector& theta,
                        std::vector<DenseVector>& grads) {
  const std::size_t M = problem.workers();
  grads.assign(M, DenseVector());
  std::vector<double> values(M, 0.0);
  std::vector<std::exception_ptr> errors(M);
  const auto M64 = static_cast<std::int64_t>(M);
#pragma omp parallel for schedule(static)
  for (std::int64_t mi = 0; mi < M64; ++mi) {
    const auto m = static_cast<std::size_t>(mi);
    try {
      LocalEvaluation e =
          local_value_and_gradient(problem.spec, problem.data[m], theta);
      values[m] = e.value;
      grads[m] = std::move(e.gradient);
    } catch (...) {
      errors[m] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

bool draws_random(StrategyKind kind) {
  return kind == StrategyKind::kSgdsec || kind == StrategyKind::kQsgdsec ||
         kind == StrategyKind::kQgd;
}

bool uses_state_variable(StrategyKind kind) {
  return kind == StrategyKind::kGdsec || kind == StrategyKind::kGdsecNoEc ||
         kind == StrategyKind::kSgdsec || kind == StrategyKind::kQsgdsec;
}

// Server keeps the last message per worker and sums the table.
bool uses_gradient_table(StrategyKind kind) {
  return kind == StrategyKind::kCgd || kind == StrategyKind::kNounifIag;
}

double squared_distance(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

void count_coordinates(const WireMessage& msg, std::vector<std::uint64_t>& c) {
  switch (msg.kind()) {
    case MessageKind::kNone:
      return;
    case MessageKind::kSparseDelta:
      for (const auto& e : std::get<SparseDelta>(msg.payload).entries()) {
        ++c[e.index];
      }
      return;
    case MessageKind::kDenseGradient:
      for (auto& x : c) ++x;
      return;
    case MessageKind::kQuantizedGradient:
      if (std::get<QuantizedVector>(msg.payload).norm != 0.0) {
        for (auto& x : c) ++x;
      }
      return;
  }
}

double ridge_f_star(const Problem& problem) {
  const LocalDataset all = pool(problem.data);
  const auto n = static_cast<double>(all.n_total);
  const Eigen::Map<const RowMatrix> X(all.features.data(),
                                      static_cast<Eigen::Index>(all.rows),
                                      static_cast<Eigen::Index>(all.dim));
  const Eigen::Map<const Eigen::VectorXd> y(
      all.labels.data(), static_cast<Eigen::Index>(all.rows));
  Eigen::MatrixXd A = X.transpose() * X / n;
  A.diagonal().array() += problem.spec.lambda;
  const Eigen::VectorXd b = X.transpose() * y / n;
  Eigen::VectorXd theta = A.ldlt().solve(b);
  if (!((A * theta - b).norm() <= 1e-9 * (1.0 + b.norm()))) {
    theta = A.completeOrthogonalDecomposition().solve(b);
  }
  return global_value(problem,
                      DenseVector(std::vector<double>(theta.data(),
                                                      theta.data() + theta.size())));
}

double logistic_newton_f_star(const Problem& problem) {
  const LocalDataset all = pool(problem.data);
  const auto n = static_cast<double>(all.n_total);
  const Eigen::Index d = static_cast<Eigen::Index>(all.dim);
  const Eigen::Map<const RowMatrix> X(all.features.data(),
                                      static_cast<Eigen::Index>(all.rows), d);
  std::vector<double> theta(all.dim, 0.0);
  double f = global_value(problem, DenseVector(theta));
  for (int it = 0; it < 100; ++it) {
    const DenseVector g = global_gradient(problem, DenseVector(theta));
    const Eigen::Map<const Eigen::VectorXd> gv(g.values().data(), d);
    const Eigen::Map<const Eigen::VectorXd> tv(theta.data(), d);
    const Eigen::VectorXd z = X * tv;
    Eigen::VectorXd w(z.size());
    for (Eigen::Index r = 0; r < z.size(); ++r) {
      const double y = all.labels[static_cast<std::size_t>(r)];
      const double s = 1.0 / (1.0 + std::exp(-y * z(r)));
      w(r) = y * y * s * (1.0 - s) / n;
    }
    Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    H.diagonal().array() += problem.spec.lambda;
    const Eigen::VectorXd step = H.ldlt().solve(gv);
    const double decrement = gv.dot(step);
    if (!(decrement > 1e-28)) break;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      std::vector<double> trial(theta);
      for (Eigen::Index i = 0; i < d; ++i) {
        trial[static_cast<std::size_t>(i)] -= t * step(i);
      }
      const double ft = global_value(problem, DenseVector(trial));
      if (ft <= f - 1e-4 * t * decrement) {
        theta = std::move(trial);
        f = ft;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return f;
}

double lasso_f_star(const Problem& problem, std::size_t iterations) {
  const double L = smoothness(problem.spec, problem.data).L_global;
  const ObjectiveSpec smooth{Family::kRidge, 0.0, problem.spec.workers};
  const double thresh = problem.spec.lambda / L;
  const std::size_t d = problem.dim();
  auto prox = [&](std::vector<double>& v) {
    for (double& x : v) {
      const double a = std::abs(x) - thresh;
      x = a > 0.0 ? std::copysign(a, x) : 0.0;
    }
  };
  std::vector<double> x(d, 0.0), y(d, 0.0);
  double t = 1.0;
  double best = global_value(problem, DenseVector(x));
  double previous = best;
  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<double> g(d, 0.0);
    const DenseVector yv(y);
    for (const LocalDataset& data : problem.data) {
      const DenseVector gm = local_gradient(smooth, data, yv);
      for (std::size_t i = 0; i < d; ++i) g[i] += gm[i];
    }
    std::vector<double> next(d);
    for (std::size_t i = 0; i < d; ++i) next[i] = y[i] - g[i] / L;
    prox(next);
    const double f = global_value(problem, DenseVector(next));
    if (!std::isfinite(f)) throw NonFiniteError("estimate_f_star: diverged");
    best = std::min(best, f);
    if (f > previous) {
      // Adaptive restart.
      t = 1.0;
      y = x;
      continue;
    }
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t i = 0; i < d; ++i) {
      y[i] = next[i] + (t - 1.0) / t_next * (next[i] - x[i]);
    }
    x = std::move(next);
    t = t_next;
    previous = f;
  }
  return best;
}

double gradient_descent_f_star(const Problem& problem, std::size_t iterations) {
  const double L = smoothness(problem.spec, problem.data).L_global;
  std::vector<double> theta(problem.dim(), 0.0);
  double best = global_value(problem, DenseVector(theta));
  for (std::size_t it = 0; it < iterations; ++it) {
    const DenseVector g = global_gradient(problem, DenseVector(theta));
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= g[i] / L;
    const double f = global_value(problem, DenseVector(theta));
    if (!std::isfinite(f)) throw NonFiniteError("estimate_f_star: diverged");
    best = std::min(best, f);
  }
  return best;
}

}  // namespace

ServerState ServerState::initial(const DenseVector& theta0,
                                 std::span<const WorkerState> workers) {
  std::vector<double> h(theta0.dim(), 0.0);
  for (const WorkerState& w : workers) {
    check_same_dim(w.h.dim(), theta0.dim(), "ServerState::initial");
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += w.h[i];
  }
  return ServerState{theta0, theta0, DenseVector(std::move(h)), 1};
}

ServerState server_step(const ServerState& s,
                        std::span<const WireMessage> messages, double alpha,
                        double beta) {
  const std::size_t d = s.theta_k.dim();
  check_same_dim(s.h.dim(), d, "server_step h");
  check_same_dim(s.theta_km1.dim(), d, "server_step theta_km1");
  const std::vector<double> sum = sum_received(messages, d);
  std::vector<double> theta(d), h(d);
  for (std::size_t i = 0; i < d; ++i) {
    theta[i] = s.theta_k[i] - alpha * (s.h[i] + sum[i]);
    h[i] = s.h[i] + beta * sum[i];
  }
  return ServerState{DenseVector(std::move(theta)), s.theta_k,
                     DenseVector(std::move(h)), s.k + 1};
}

ServerState server_step(const ServerState& s,
                        std::span<const WireMessage> messages,
                        const HyperParams& hp) {
  return server_step(s, messages, hp.alpha, hp.beta);
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kGd: return "gd";
    case StrategyKind::kGdsec: return "gdsec";
    case StrategyKind::kGdsecNoEc: return "gdsec_no_ec";
    case StrategyKind::kTopj: return "topj";
    case StrategyKind::kCgd: return "cgd";
    case StrategyKind::kQgd: return "qgd";
    case StrategyKind::kNounifIag: return "nounif_iag";
    case StrategyKind::kSgdsec: return "sgdsec";
    case StrategyKind::kQsgdsec: return "qsgdsec";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  for (StrategyKind k :
       {StrategyKind::kGd, StrategyKind::kGdsec, StrategyKind::kGdsecNoEc,
        StrategyKind::kTopj, StrategyKind::kCgd, StrategyKind::kQgd,
        StrategyKind::kNounifIag, StrategyKind::kSgdsec,
        StrategyKind::kQsgdsec}) {
    if (to_string(k) == name) return k;
  }
  if (name == "gdsoec") return StrategyKind::kGdsecNoEc;
  throw InvalidArgument("unknown strategy '" + std::string(name) + "'");
}

void Strategy::validate(std::size_t dim) const {
  if (kind == StrategyKind::kTopj && (j < 1 || j > dim)) {
    throw InvalidArgument("Strategy: top-j needs 1 <= j <= d");
  }
  if ((kind == StrategyKind::kQgd || kind == StrategyKind::kQsgdsec) && s < 1) {
    throw InvalidArgument("Strategy: quantization needs s >= 1");
  }
  if (kind == StrategyKind::kCgd && !(xi_tilde >= 0.0)) {
    throw InvalidArgument("Strategy: censoring threshold must be >= 0");
  }
}

Schedule Schedule::round_robin(double fraction) {
  Schedule s;
  s.policy = Policy::kRoundRobin;
  s.fraction = fraction;
  s.validate();
  return s;
}

void Schedule::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument("Schedule: fraction must lie in (0, 1]");
  }
}

std::size_t Schedule::cohorts() const {
  if (policy == Policy::kFull) return 1;
  validate();
  return static_cast<std::size_t>(std::ceil(1.0 / fraction - 1e-9));
}

std::vector<bool> Schedule::active(std::size_t k, std::size_t workers) const {
  if (k < 1) throw InvalidArgument("Schedule::active: rounds are 1-based");
  std::vector<bool> out(workers, policy == Policy::kFull);
  if (policy == Policy::kFull) return out;
  const std::size_t c = std::min(cohorts(), workers);
  const std::size_t cohort = (k - 1) % c;
  const std::size_t begin = cohort * workers / c;
  const std::size_t end = (cohort + 1) * workers / c;
  for (std::size_t m = begin; m < end; ++m) out[m] = true;
  return out;
}

StepKind parse_step_kind(std::string_view name) {
  if (name == "constant") return StepKind::kConstant;
  if (name == "decreasing") return StepKind::kDecreasing;
  throw InvalidArgument("unknown step schedule '" + std::string(name) + "'");
}

double step_size_schedule(StepKind kind, double gamma0, double lambda,
                          std::size_t k) {
  if (!(gamma0 > 0.0)) throw InvalidArgument("step size must be positive");
  if (kind == StepKind::kConstant) return gamma0;
  if (!(lambda >= 0.0)) throw InvalidArgument("step decay must be >= 0");
  return gamma0 / (1.0 + gamma0 * lambda * static_cast<double>(k));
}

RunResult run_experiment(const Problem& problem, const HyperParams& hp,
                         const RunOptions& options, double f_star) {
  problem.validate();
  const std::size_t d = problem.dim();
  const std::size_t M = problem.workers();
  hp.validate(d);
  check_same_dim(hp.workers, M, "run_experiment workers");
  options.schedule.validate();
  const Strategy& strat = options.strategy;
  strat.validate(d);

  const DenseVector theta0 = options.theta0.value_or(DenseVector::zeros(d));
  check_same_dim(theta0.dim(), d, "run_experiment theta0");
  std::vector<WorkerState> workers;
  workers.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    if (options.h0) {
      check_same_dim(options.h0->size(), M, "run_experiment h0");
      check_same_dim((*options.h0)[m].dim(), d, "run_experiment h0");
      workers.push_back(WorkerState::initial((*options.h0)[m]));
    } else {
      workers.push_back(WorkerState::initial(d));
    }
  }

  std::vector<double> iag_weights;
  if (strat.kind == StrategyKind::kNounifIag) {
    iag_weights = iag_selection_weights(
        options.L_worker.empty()
            ? std::span<const double>(smoothness(problem.spec, problem.data).L_worker)
            : std::span<const double>(options.L_worker));
    check_same_dim(iag_weights.size(), M, "run_experiment L_worker");
  }

  RunResult result;
  result.coord_transmissions.assign(M, std::vector<std::uint64_t>(d, 0));
  ServerState server = ServerState::initial(theta0, workers);
  DenseVector theta_km2 = theta0;
  std::vector<DenseVector> table(M, DenseVector::zeros(d));
  BitLedger ledger(M);

  // Local gradients at the current iterate, carried over from the previous
  // round's objective evaluation.
  std::vector<DenseVector> full_grad;
  double f_k = 0.0;
  try {
    f_k = evaluate_workers(problem, theta0, full_grad);
  } catch (const NonFiniteError&) {
    f_k = std::numeric_limits<double>::quiet_NaN();
  }
  result.f_initial = f_k;
  result.theta = theta0;
  if (!std::isfinite(f_k)) {
    result.diverged = true;
    result.divergence_reason = "non-finite objective at the initial point";
    return result;
  }

  for (std::size_t k = 1; k <= hp.iterations; ++k) {
    try {
      const double alpha =
          step_size_schedule(options.step_kind, hp.alpha, options.step_lambda, k);
      std::vector<bool> active = options.schedule.active(k, M);
      if (strat.kind == StrategyKind::kNounifIag) {
        std::mt19937_64 rng = round_rng(options.seed, k, M);
        std::discrete_distribution<std::size_t> pick(iag_weights.begin(),
                                                     iag_weights.end());
        const std::size_t chosen = pick(rng);
        std::fill(active.begin(), active.end(), false);
        active[chosen] = true;
      }

      // Worker phase: independent per worker, joined in index order.
      std::vector<std::optional<WorkerRound>> rounds(M);
      std::vector<std::exception_ptr> errors(M);
      const auto M64 = static_cast<std::int64_t>(M);
#pragma omp parallel for schedule(static)
      for (std::int64_t mi = 0; mi < M64; ++mi) {
        const auto m = static_cast<std::size_t>(mi);
        try {
          const LocalDataset& data = problem.data[m];
          if (!active[m]) continue;
          // Seeding costs more than a small round, so only randomized
          // strategies pay for it.
          std::optional<std::mt19937_64> rng;
          if (draws_random(strat.kind)) rng = round_rng(options.seed, k, m);
          DenseVector grad = full_grad[m];
          const bool stochastic = strat.kind == StrategyKind::kSgdsec ||
                                  strat.kind == StrategyKind::kQsgdsec;
          if (stochastic && strat.batch > 0 && strat.batch < data.rows) {
            const auto batch = sample_batch(data.rows, strat.batch, *rng);
            grad = stochastic_gradient(problem.spec, data, server.theta_k, batch);
          }
          switch (strat.kind) {
            case StrategyKind::kGd:
            case StrategyKind::kNounifIag:
              rounds[m] = WorkerRound{WireMessage{grad}, workers[m], grad};
              break;
            case StrategyKind::kGdsec:
            case StrategyKind::kSgdsec:
              rounds[m] = gdsec_worker_round(workers[m], grad, server.theta_k,
                                             server.theta_km1, hp, true);
              break;
            case StrategyKind::kGdsecNoEc:
              rounds[m] = gdsec_worker_round(workers[m], grad, server.theta_k,
                                             server.theta_km1, hp, false);
              break;
            case StrategyKind::kQsgdsec:
              rounds[m] = qsgdsec_worker_round(workers[m], grad, server.theta_k,
                                               server.theta_km1, hp, strat.s,
                                               *rng);
              break;
            case StrategyKind::kTopj:
              rounds[m] = topj_worker_round(workers[m], grad, strat.j);
              break;
            case StrategyKind::kCgd:
              rounds[m] = cgd_worker_round(workers[m], grad, server.theta_k,
                                           server.theta_km1, strat.xi_tilde, M);
              break;
            case StrategyKind::kQgd: {
              WireMessage msg;
              QuantizedVector q = quantize(grad, strat.s, *rng);
              if (q.norm != 0.0) msg.payload = std::move(q);
              rounds[m] = WorkerRound{std::move(msg), workers[m], grad};
              break;
            }
          }
        } catch (...) {
          errors[m] = std::current_exception();
        }
      }
      for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }

      std::vector<double> grad_sum(d, 0.0);
      for (const DenseVector& g : full_grad) {
        for (std::size_t i = 0; i < d; ++i) grad_sum[i] += g[i];
      }
      const DenseVector grad_global(std::move(grad_sum));

      std::vector<WireMessage> messages(M);
      for (std::size_t m = 0; m < M; ++m) {
        if (!rounds[m]) continue;
        messages[m] = std::move(rounds[m]->message);
        workers[m] = std::move(rounds[m]->state);
        ledger.charge(m, message_bits(messages[m], options.bits));
        count_coordinates(messages[m], result.coord_transmissions[m]);
      }

      // Direction v with theta^{k+1} = theta^k - alpha v.
      std::vector<double> direction;
      ServerState next;
      if (uses_state_variable(strat.kind)) {
        const std::vector<double> sum = sum_received(messages, d);
        direction.resize(d);
        for (std::size_t i = 0; i < d; ++i) direction[i] = server.h[i] + sum[i];
        next = server_step(server, messages, alpha, hp.beta);
      } else {
        if (uses_gradient_table(strat.kind)) {
          for (std::size_t m = 0; m < M; ++m) {
            if (!messages[m].empty()) table[m] = received_vector(messages[m], d);
          }
          direction.assign(d, 0.0);
          for (const DenseVector& t : table) {
            for (std::size_t i = 0; i < d; ++i) direction[i] += t[i];
          }
        } else {
          direction = sum_received(messages, d);
        }
        std::vector<double> theta(d);
        for (std::size_t i = 0; i < d; ++i) {
          theta[i] = server.theta_k[i] - alpha * direction[i];
        }
        next = ServerState{DenseVector(std::move(theta)), server.theta_k,
                           server.h, server.k + 1};
      }

      std::vector<DenseVector> next_grad;
      const double f_next = evaluate_workers(problem, next.theta_k, next_grad);
      if (!std::isfinite(f_next)) throw NonFiniteError("non-finite objective");
      if (result.f_initial > 0.0 && f_next > options.blowup * result.f_initial) {
        result.diverged = true;
        result.divergence_reason = "objective exceeded blow-up threshold at k=" +
                                   std::to_string(k);
        break;
      }

      double comp = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double t = direction[i] - grad_global[i];
        comp += t * t;
      }
      const double grad_norm_sq = norm_sq(grad_global);
      if (options.on_step) {
        StepRecord rec;
        rec.k = k;
        rec.f_current = f_k;
        rec.f_next = f_next;
        rec.grad_norm_sq = grad_norm_sq;
        rec.step_next_sq = squared_distance(next.theta_k, server.theta_k);
        rec.step_current_sq = squared_distance(server.theta_k, server.theta_km1);
        rec.step_previous_sq = squared_distance(server.theta_km1, theta_km2);
        rec.compression_error_sq = comp;
        options.on_step(rec);
      }

      RoundTrace row;
      row.k = k;
      row.objective_error = f_next - f_star;
      row.grad_norm_sq = grad_norm_sq;
      row.cum_bits_total = ledger.total_bits();
      row.cum_bits_worker.assign(ledger.per_worker_bits().begin(),
                                 ledger.per_worker_bits().end());
      row.transmissions_total = ledger.total_transmissions();
      result.trace.push_back(std::move(row));

      theta_km2 = server.theta_km1;
      server = std::move(next);
      f_k = f_next;
      full_grad = std::move(next_grad);
      result.theta = server.theta_k;
    } catch (const NonFiniteError& e) {
      result.diverged = true;
      result.divergence_reason =
          std::string(e.what()) + " at k=" + std::to_string(k);
      break;
    }
  }
  result.worker_transmissions.assign(ledger.transmissions().begin(),
                                     ledger.transmissions().end());
  return result;
}

double estimate_f_star(const Problem& problem,
                       std::size_t reference_iterations) {
  problem.validate();
  switch (problem.spec.family) {
    case Family::kRidge:
      return ridge_f_star(problem);
    case Family::kLogistic:
      if (problem.spec.lambda > 0.0 && problem.dim() <= 4096) {
        return logistic_newton_f_star(problem);
      }
      return gradient_descent_f_star(problem, reference_iterations);
    case Family::kLasso:
      return lasso_f_star(problem, reference_iterations);
    case Family::kNlls:
      return gradient_descent_f_star(problem, reference_iterations);
  }
  throw InvalidArgument("estimate_f_star: unknown family");
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace,
                     std::size_t workers) {
  out << "k,objective_error,grad_norm_sq,cum_bits_total";
  for (std::size_t m = 0; m < workers; ++m) out << ",cum_bits_w" << m;
  out << ",transmissions_total\n";
  for (const RoundTrace& r : trace) {
    check_same_dim(r.cum_bits_worker.size(), workers, "write_trace_csv");
    out << r.k << ',' << format_real(r.objective_error) << ','
        << format_real(r.grad_norm_sq) << ',' << r.cum_bits_total;
    for (std::uint64_t b : r.cum_bits_worker) out << ',' << b;
    out << ',' << r.transmissions_total << '\n';
  }
}

}  // namespace gdsec
