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

// Worker-side message generation: the adaptive sparsifier with state
// variables and error correction, plus the top-j, censoring, quantization and
// nonuniform-IAG baselines.

#ifndef GDSEC_COMPRESSORS_HPP_
#define GDSEC_COMPRESSORS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "gdsec/core.hpp"

namespace gdsec {

// Memory a worker keeps between rounds. Each strategy touches only the fields
// it owns.
struct WorkerState {
  DenseVector h;                               // state variable h_m
  DenseVector e;                               // error accumulator e_m
  std::optional<DenseVector> last_sent_grad;   // censoring memory
  DenseVector ef_memory;                       // top-j residual

  // h_m = h0 (zero when omitted), e_m = 0, nothing sent yet.
  static WorkerState initial(std::size_t dim);
  static WorkerState initial(DenseVector h0);
};

// Norm-scaled stochastic quantization of a vector onto s levels per sign.
struct QuantizedVector {
  double norm = 0.0;
  std::vector<std::int8_t> signs;     // +1 or -1
  std::vector<std::uint32_t> levels;  // each in 0..s
  std::uint32_t s = 1;

  std::size_t dim() const { return levels.size(); }
  void validate() const;
  bool operator==(const QuantizedVector&) const = default;
};

enum class MessageKind : std::uint8_t {
  kNone = 0,
  kSparseDelta = 1,
  kDenseGradient = 2,
  kQuantizedGradient = 3,
};

struct WireMessage {
  std::variant<std::monostate, SparseDelta, DenseVector, QuantizedVector>
      payload;

  MessageKind kind() const {
    return static_cast<MessageKind>(payload.index());
  }
  bool empty() const { return kind() == MessageKind::kNone; }
  bool operator==(const WireMessage&) const = default;
};

// What the server adds to its aggregate for this message (zero vector of the
// given dimension for kind none).
DenseVector received_vector(const WireMessage& msg, std::size_t dim);

struct WorkerRound {
  WireMessage message;
  WorkerState state;
  DenseVector delta;  // pre-sparsification difference (sparsifying rounds)
};

// One sparsify-and-correct round:
//   delta = grad - h + e
//   component i suppressed iff |delta_i| <= (xi_i / M) |theta_k,i - theta_km1,i|
//   h <- h + beta * dhat,  e <- delta - dhat
// With error_correction = false, e is held at zero (the no-correction
// ablation).
WorkerRound gdsec_worker_round(const WorkerState& state,
                               const DenseVector& grad,
                               const DenseVector& theta_k,
                               const DenseVector& theta_km1,
                               const HyperParams& hp,
                               bool error_correction = true);

// Same sparsifier, but the surviving components are sent through quantize().
// The worker updates h and e with what the server will reconstruct so both
// mirrors stay in step.
WorkerRound qsgdsec_worker_round(const WorkerState& state,
                                 const DenseVector& grad,
                                 const DenseVector& theta_k,
                                 const DenseVector& theta_km1,
                                 const HyperParams& hp, std::uint32_t s,
                                 std::mt19937_64& rng);

// h^{k+1} = (1-beta)^k h^1 + sum_j (1-beta)^{k-j} beta grad_j. Only valid
// when nothing is ever suppressed; used as a test oracle.
DenseVector state_recursion_closed_form(const DenseVector& h1,
                                        std::span<const DenseVector> grads,
                                        double beta);

// Sends the j largest-magnitude entries of grad + residual (lowest index
// wins ties); the rest stays in the residual.
WorkerRound topj_worker_round(const WorkerState& state,
                              const DenseVector& grad, std::size_t j);

// Sends the full gradient when it moved more than (xi_tilde / M) ||theta_k -
// theta_km1|| since the last transmission; the first round always sends.
WorkerRound cgd_worker_round(const WorkerState& state,
                             const DenseVector& grad,
                             const DenseVector& theta_k,
                             const DenseVector& theta_km1, double xi_tilde,
                             std::size_t workers);

QuantizedVector quantize(const DenseVector& v, std::uint32_t s,
                         std::mt19937_64& rng);
DenseVector dequantize(const QuantizedVector& q);

// p_m = L_m / sum L.
std::vector<double> iag_selection_weights(std::span<const double> l_worker);

}  // namespace gdsec

#endif  // GDSEC_COMPRESSORS_HPP_
