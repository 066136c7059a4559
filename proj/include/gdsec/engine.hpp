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

// Synchronous worker/server round loop.
//
// Each round k = 1..K: the server broadcasts theta^k, every scheduled worker
// builds a message from its local gradient, the server aggregates the
// messages in worker-index order and steps. The initial point doubles as
// theta^0, so the first round's thresholds are zero and everything nonzero is
// sent.

#ifndef GDSEC_ENGINE_HPP_
#define GDSEC_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gdsec/compressors.hpp"
#include "gdsec/core.hpp"
#include "gdsec/encoding.hpp"
#include "gdsec/objectives.hpp"

namespace gdsec {

struct ServerState {
  DenseVector theta_k;
  DenseVector theta_km1;
  DenseVector h;
  std::size_t k = 1;

  // theta^0 = theta^1 = theta0 and h = sum of the worker states' h_m.
  static ServerState initial(const DenseVector& theta0,
                             std::span<const WorkerState> workers);
};

// theta <- theta - alpha (h + sum dhat), h <- h + beta sum dhat. Messages are
// summed in the order given; kind none contributes zero.
ServerState server_step(const ServerState& s,
                        std::span<const WireMessage> messages, double alpha,
                        double beta);
ServerState server_step(const ServerState& s,
                        std::span<const WireMessage> messages,
                        const HyperParams& hp);

enum class StrategyKind {
  kGd,
  kGdsec,
  kGdsecNoEc,
  kTopj,
  kCgd,
  kQgd,
  kNounifIag,
  kSgdsec,
  kQsgdsec,
};

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

struct Strategy {
  StrategyKind kind = StrategyKind::kGdsec;
  std::size_t j = 1;         // top-j
  double xi_tilde = 0.0;     // censoring threshold
  std::uint32_t s = 256;     // quantization levels
  std::size_t batch = 0;     // minibatch size, 0 = full local batch

  void validate(std::size_t dim) const;
};

struct Schedule {
  enum class Policy { kFull, kRoundRobin };
  Policy policy = Policy::kFull;
  double fraction = 1.0;
  std::uint64_t rng_seed = 0;

  static Schedule full() { return {}; }
  static Schedule round_robin(double fraction);

  void validate() const;
  std::size_t cohorts() const;
  // Which workers transmit in round k (1-based). Round robin splits the
  // workers into ceil(1/fraction) contiguous cohorts of (nearly) equal size
  // and activates cohort (k-1) mod cohorts.
  std::vector<bool> active(std::size_t k, std::size_t workers) const;
};

enum class StepKind { kConstant, kDecreasing };

StepKind parse_step_kind(std::string_view name);

// constant: gamma0; decreasing: gamma0 / (1 + gamma0 lambda k).
double step_size_schedule(StepKind kind, double gamma0, double lambda,
                          std::size_t k);

struct RoundTrace {
  std::size_t k = 0;
  double objective_error = 0.0;  // f(theta^{k+1}) - f*
  double grad_norm_sq = 0.0;     // ||grad f(theta^k)||^2
  std::uint64_t cum_bits_total = 0;
  std::vector<std::uint64_t> cum_bits_worker;
  std::uint64_t transmissions_total = 0;
};

struct RunOptions {
  Strategy strategy;
  Schedule schedule;
  StepKind step_kind = StepKind::kConstant;
  double step_lambda = 0.0;  // decay for StepKind::kDecreasing
  BitScheme bits = BitScheme::kLedger;
  std::uint64_t seed = 0;
  std::optional<DenseVector> theta0;          // zero when unset
  std::optional<std::vector<DenseVector>> h0;  // h_m^1, zero when unset
  // Required by NoUnif-IAG; computed from the data when empty.
  std::vector<double> L_worker;
  // Called once per completed round.
  std::function<void(const StepRecord&)> on_step;
  // Divergence: f(theta^{k+1}) > blowup * f(theta^1) (skipped when f(theta^1)
  // is not positive) or any non-finite value.
  double blowup = 1e6;
};

struct RunResult {
  std::vector<RoundTrace> trace;
  bool diverged = false;
  std::string divergence_reason;
  double f_initial = 0.0;
  DenseVector theta;                              // last finite iterate
  std::vector<std::uint64_t> worker_transmissions;  // rounds with a message
  // [m][i]: rounds in which worker m put coordinate i on the wire.
  std::vector<std::vector<std::uint64_t>> coord_transmissions;
};

RunResult run_experiment(const Problem& problem, const HyperParams& hp,
                         const RunOptions& options, double f_star);

// Reference optimum. ridge: regularized normal equations. logistic with
// lambda > 0: damped Newton. lasso: accelerated proximal gradient. nlls and
// unregularized logistic: minimum over a plain gradient run of
// `reference_iterations` steps at 1/L. Throws NonFiniteError when the
// reference run diverges.
double estimate_f_star(const Problem& problem,
                       std::size_t reference_iterations);

// Header: k,objective_error,grad_norm_sq,cum_bits_total,cum_bits_w0..,
// transmissions_total. Reals use the shortest round-trip form.
void write_trace_csv(std::ostream& out, std::span<const RoundTrace> trace,
                     std::size_t workers);
std::string format_real(double v);

}  // namespace gdsec

#endif  // GDSEC_ENGINE_HPP_
