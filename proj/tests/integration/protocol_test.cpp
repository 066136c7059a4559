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

// Whole-protocol properties: the engine against a hand-rolled round loop,
// server/worker state agreement, and the Lyapunov monitor on real runs.

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "gdsec/engine.hpp"
#include "gdsec/theory.hpp"
#include "test_support.hpp"

namespace gdsec {
namespace {

using testing::random_problem;

struct ManualRun {
  DenseVector theta;
  double worst_state_gap = 0.0;  // max_k ||h_server - sum_m h_m||_inf
  double largest_state = 1.0;    // max(1, max_k ||h_server||_inf)
};

// Drives the round protocol directly from the worker and server primitives.
ManualRun manual_gdsec(const Problem& p, const HyperParams& hp,
                       const Schedule& schedule) {
  const std::size_t d = p.dim();
  const std::size_t M = p.workers();
  std::vector<WorkerState> ws(M, WorkerState::initial(d));
  ServerState server = ServerState::initial(DenseVector::zeros(d), ws);
  ManualRun out;
  for (std::size_t k = 1; k <= hp.iterations; ++k) {
    const auto active = schedule.active(k, M);
    std::vector<WireMessage> msgs(M);
    for (std::size_t m = 0; m < M; ++m) {
      if (!active[m]) continue;
      const DenseVector g = local_gradient(p.spec, p.data[m], server.theta_k);
      auto r = gdsec_worker_round(ws[m], g, server.theta_k, server.theta_km1, hp);
      msgs[m] = std::move(r.message);
      ws[m] = std::move(r.state);
    }
    server = server_step(server, msgs, hp);
    for (std::size_t i = 0; i < d; ++i) {
      double sum = 0.0;
      for (const auto& w : ws) sum += w.h[i];
      out.worst_state_gap = std::max(out.worst_state_gap, std::abs(server.h[i] - sum));
      out.largest_state = std::max(out.largest_state, std::abs(server.h[i]));
    }
  }
  out.theta = server.theta_k;
  return out;
}

TEST(ProtocolTest, ServerStateMirrorsWorkerStates) {
  const Problem p = random_problem(Family::kLogistic, 6, 10, 8, 13, 0.02);
  const double L = smoothness(p.spec, p.data).L_global;
  const HyperParams hp = HyperParams::uniform(0.5 / L, 0.3, 5.0, 8, 6, 150);
  for (const Schedule& s : {Schedule::full(), Schedule::round_robin(0.5),
                            Schedule::round_robin(0.3)}) {
    const ManualRun manual = manual_gdsec(p, hp, s);
    EXPECT_LE(manual.worst_state_gap, 1e-12 * manual.largest_state);
    RunOptions o;
    o.strategy.kind = StrategyKind::kGdsec;
    o.schedule = s;
    const RunResult r = run_experiment(p, hp, o, 0.0);
    ASSERT_FALSE(r.diverged);
    EXPECT_EQ(r.theta, manual.theta);
  }
}

TEST(ProtocolTest, SuppressionActuallyHappensAtModerateThreshold) {
  const Problem p = random_problem(Family::kLogistic, 4, 10, 8, 14, 0.02);
  const double L = smoothness(p.spec, p.data).L_global;
  const HyperParams hp = HyperParams::uniform(0.5 / L, 0.3, 5.0, 8, 4, 200);
  RunOptions o;
  o.strategy.kind = StrategyKind::kGdsec;
  const RunResult sec = run_experiment(p, hp, o, 0.0);
  ASSERT_FALSE(sec.diverged);
  ASSERT_EQ(sec.trace.size(), 200u);
  o.strategy.kind = StrategyKind::kGd;
  const RunResult gd = run_experiment(p, hp, o, 0.0);
  EXPECT_LT(sec.trace.back().cum_bits_total, gd.trace.back().cum_bits_total);
}

TEST(ProtocolTest, LyapunovMonitorHoldsAlongFeasibleRuns) {
  for (Family f : {Family::kRidge, Family::kLogistic}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Problem p = random_problem(f, 4, 12, 6, 200 + seed, 0.05);
      const SmoothnessInfo info = smoothness(p.spec, p.data);
      const double alpha = 0.5 / info.L_global;
      const TheoryParams tp = default_monitor_params(alpha, info.L_global, info.mu);
      const HyperParams hp =
          HyperParams::uniform(alpha, 0.5, tp.xi_max, 6, 4, 300);
      std::vector<StepRecord> steps;
      RunOptions o;
      o.strategy.kind = StrategyKind::kGdsec;
      o.on_step = [&](const StepRecord& s) { steps.push_back(s); };
      const double f_star = estimate_f_star(p, 3000);
      run_experiment(p, hp, o, f_star);
      const MonitorReport m = monitor_trajectory(steps, tp, f_star);
      EXPECT_TRUE(m.nonincreasing) << "seed " << seed << " k " << m.first_failure_k;
      EXPECT_TRUE(m.drop_bound_holds) << m.worst_drop_violation;
      EXPECT_TRUE(m.descent_holds) << m.worst_descent_violation;
    }
  }
}

TEST(ProtocolTest, GradientNormDecaysAtLeastInverselyOnNonconvexLoss) {
  const Problem p = random_problem(Family::kNlls, 4, 15, 5, 77, 0.0);
  const SmoothnessInfo info = smoothness(p.spec, p.data);
  const double alpha = 0.5 / info.L_global;
  const TheoryParams tp = default_monitor_params(alpha, info.L_global, 0.0);
  const HyperParams hp = HyperParams::uniform(alpha, 0.5, tp.xi_max, 5, 4, 1000);
  RunOptions o;
  o.strategy.kind = StrategyKind::kGdsec;
  const RunResult r = run_experiment(p, hp, o, 0.0);
  ASSERT_EQ(r.trace.size(), 1000u);
  double running_min = INFINITY;
  double first_half = 0.0, second_half = 0.0;
  for (const auto& t : r.trace) {
    running_min = std::min(running_min, t.grad_norm_sq);
    const double scaled = static_cast<double>(t.k) * running_min;
    if (t.k < 100) continue;
    if (t.k <= 550) {
      first_half = std::max(first_half, scaled);
    } else {
      second_half = std::max(second_half, scaled);
    }
  }
  EXPECT_LE(second_half, 2.0 * first_half);
}

TEST(ProtocolTest, ParallelWorkerPhaseIsThreadCountInvariant) {
  const Problem p = random_problem(Family::kLogistic, 7, 9, 5, 8, 0.01);
  const double L = smoothness(p.spec, p.data).L_global;
  const HyperParams hp = HyperParams::uniform(0.5 / L, 0.5, 20.0, 5, 7, 60);
  RunOptions o;
  o.strategy.kind = StrategyKind::kQsgdsec;
  o.strategy.batch = 4;
  o.seed = 5;
  std::vector<DenseVector> thetas;
  for (int threads : {1, 2, 3}) {
    omp_set_num_threads(threads);
    thetas.push_back(run_experiment(p, hp, o, 0.0).theta);
  }
  EXPECT_EQ(thetas[0], thetas[1]);
  EXPECT_EQ(thetas[0], thetas[2]);
}

TEST(ProtocolTest, BaselinesConvergeOnEasyProblem) {
  const Problem p = random_problem(Family::kRidge, 3, 20, 4, 50, 0.1);
  const double L = smoothness(p.spec, p.data).L_global;
  const double f_star = estimate_f_star(p, 10);
  const HyperParams hp = HyperParams::uniform(0.5 / L, 0.5, 2.0, 4, 3, 3000);
  for (StrategyKind kind :
       {StrategyKind::kGd, StrategyKind::kGdsec, StrategyKind::kGdsecNoEc,
        StrategyKind::kTopj, StrategyKind::kCgd, StrategyKind::kNounifIag}) {
    RunOptions o;
    o.strategy.kind = kind;
    o.strategy.j = 2;
    o.strategy.xi_tilde = 1.0;
    const RunResult r = run_experiment(p, hp, o, f_star);
    ASSERT_FALSE(r.diverged) << to_string(kind);
    // Error feedback leaves nonzero residuals when local gradients differ at
    // the optimum, so top-j only reaches a neighbourhood.
    const double target = kind == StrategyKind::kTopj ? 1e-3 : 1e-6;
    EXPECT_LT(r.trace.back().objective_error, target) << to_string(kind);
  }
}

}  // namespace
}  // namespace gdsec
