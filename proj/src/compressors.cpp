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

#include "gdsec/compressors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gdsec {
namespace {

struct Sparsified {
  std::vector<double> delta;
  std::vector<double> kept;  // delta with suppressed components zeroed
  bool any = false;
};

Sparsified sparsify(const WorkerState& state, const DenseVector& grad,
                    const DenseVector& theta_k, const DenseVector& theta_km1,
                    const HyperParams& hp, bool error_correction) {
  const std::size_t d = grad.dim();
  check_same_dim(state.h.dim(), d, "sparsify h");
  check_same_dim(state.e.dim(), d, "sparsify e");
  check_same_dim(theta_k.dim(), d, "sparsify theta_k");
  check_same_dim(theta_km1.dim(), d, "sparsify theta_km1");
  check_same_dim(hp.xi.size(), d, "sparsify xi");
  const double m = static_cast<double>(hp.workers);

  Sparsified out;
  out.delta.resize(d);
  out.kept.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double correction = error_correction ? state.e[i] : 0.0;
    const double delta = grad[i] - state.h[i] + correction;
    const double threshold = hp.xi[i] / m * std::abs(theta_k[i] - theta_km1[i]);
    out.delta[i] = delta;
    if (std::abs(delta) <= threshold) {
      out.kept[i] = 0.0;
    } else {
      out.kept[i] = delta;
      out.any = true;
    }
  }
  return out;
}

}  // namespace

WorkerState WorkerState::initial(std::size_t dim) {
  return initial(DenseVector::zeros(dim));
}

WorkerState WorkerState::initial(DenseVector h0) {
  const std::size_t d = h0.dim();
  return WorkerState{std::move(h0), DenseVector::zeros(d), std::nullopt,
                     DenseVector::zeros(d)};
}

void QuantizedVector::validate() const {
  if (s == 0) throw InvalidArgument("QuantizedVector: s must be positive");
  if (signs.size() != levels.size()) {
    throw InvalidArgument("QuantizedVector: signs/levels length mismatch");
  }
  if (!(norm >= 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("QuantizedVector: norm must be finite and >= 0");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] > s) throw InvalidArgument("QuantizedVector: level > s");
    if (signs[i] != 1 && signs[i] != -1) {
      throw InvalidArgument("QuantizedVector: sign must be +1 or -1");
    }
    if (norm == 0.0 && levels[i] != 0) {
      throw InvalidArgument("QuantizedVector: zero norm with nonzero level");
    }
  }
}

DenseVector received_vector(const WireMessage& msg, std::size_t dim) {
  switch (msg.kind()) {
    case MessageKind::kNone:
      return DenseVector::zeros(dim);
    case MessageKind::kSparseDelta: {
      const auto& sd = std::get<SparseDelta>(msg.payload);
      check_same_dim(sd.dim(), dim, "received_vector");
      return densify(sd);
    }
    case MessageKind::kDenseGradient: {
      const auto& v = std::get<DenseVector>(msg.payload);
      check_same_dim(v.dim(), dim, "received_vector");
      return v;
    }
    case MessageKind::kQuantizedGradient: {
      const auto& q = std::get<QuantizedVector>(msg.payload);
      check_same_dim(q.dim(), dim, "received_vector");
      return dequantize(q);
    }
  }
  throw InvalidArgument("received_vector: unknown message kind");
}

WorkerRound gdsec_worker_round(const WorkerState& state,
                               const DenseVector& grad,
                               const DenseVector& theta_k,
                               const DenseVector& theta_km1,
                               const HyperParams& hp, bool error_correction) {
  Sparsified sp =
      sparsify(state, grad, theta_k, theta_km1, hp, error_correction);
  const std::size_t d = grad.dim();

  WorkerRound out{WireMessage{}, state, DenseVector(sp.delta)};
  std::vector<double> h(state.h.values().begin(), state.h.values().end());
  std::vector<double> e(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    h[i] += hp.beta * sp.kept[i];
    if (error_correction) e[i] = sp.delta[i] - sp.kept[i];
  }
  if (sp.any) {
    out.message.payload = SparseDelta::from_dense(DenseVector(sp.kept));
  }
  out.state.h = DenseVector(std::move(h));
  out.state.e = DenseVector(std::move(e));
  return out;
}

WorkerRound qsgdsec_worker_round(const WorkerState& state,
                                 const DenseVector& grad,
                                 const DenseVector& theta_k,
                                 const DenseVector& theta_km1,
                                 const HyperParams& hp, std::uint32_t s,
                                 std::mt19937_64& rng) {
  Sparsified sp = sparsify(state, grad, theta_k, theta_km1, hp, true);
  const std::size_t d = grad.dim();
  WorkerRound out{WireMessage{}, state, DenseVector(sp.delta)};
  std::vector<double> received(d, 0.0);
  if (sp.any) {
    QuantizedVector q = quantize(DenseVector(sp.kept), s, rng);
    const DenseVector r = dequantize(q);
    received.assign(r.values().begin(), r.values().end());
    out.message.payload = std::move(q);
  }
  std::vector<double> h(state.h.values().begin(), state.h.values().end());
  std::vector<double> e(d);
  for (std::size_t i = 0; i < d; ++i) {
    h[i] += hp.beta * received[i];
    e[i] = sp.delta[i] - received[i];
  }
  out.state.h = DenseVector(std::move(h));
  out.state.e = DenseVector(std::move(e));
  return out;
}

DenseVector state_recursion_closed_form(const DenseVector& h1,
                                        std::span<const DenseVector> grads,
                                        double beta) {
  const std::size_t k = grads.size();
  std::vector<double> out(h1.dim());
  const double decay = std::pow(1.0 - beta, static_cast<double>(k));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = decay * h1[i];
  for (std::size_t j = 1; j <= k; ++j) {
    const DenseVector& g = grads[j - 1];
    check_same_dim(g.dim(), h1.dim(), "state_recursion_closed_form");
    const double w = std::pow(1.0 - beta, static_cast<double>(k - j)) * beta;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * g[i];
  }
  return DenseVector(std::move(out));
}

WorkerRound topj_worker_round(const WorkerState& state,
                              const DenseVector& grad, std::size_t j) {
  const std::size_t d = grad.dim();
  if (j < 1 || j > d) {
    throw InvalidArgument("topj_worker_round: j must lie in [1, d]");
  }
  check_same_dim(state.ef_memory.dim(), d, "topj_worker_round");
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = grad[i] + state.ef_memory[i];

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v[a]) > std::abs(v[b]);
  });
  std::vector<std::size_t> chosen;
  for (std::size_t t = 0; t < j && v[order[t]] != 0.0; ++t) {
    chosen.push_back(order[t]);
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<SparseEntry> entries;
  std::vector<double> residual = v;
  for (std::size_t i : chosen) {
    entries.push_back({i, v[i]});
    residual[i] = 0.0;
  }
  WorkerRound out{WireMessage{}, state, DenseVector(v)};
  if (!entries.empty()) {
    out.message.payload = SparseDelta(d, std::move(entries));
  }
  out.state.ef_memory = DenseVector(std::move(residual));
  return out;
}

WorkerRound cgd_worker_round(const WorkerState& state,
                             const DenseVector& grad,
                             const DenseVector& theta_k,
                             const DenseVector& theta_km1, double xi_tilde,
                             std::size_t workers) {
  check_same_dim(theta_k.dim(), grad.dim(), "cgd_worker_round");
  check_same_dim(theta_km1.dim(), grad.dim(), "cgd_worker_round");
  WorkerRound out{WireMessage{}, state, grad};
  bool send = true;
  if (state.last_sent_grad) {
    check_same_dim(state.last_sent_grad->dim(), grad.dim(), "cgd_worker_round");
    const double moved = norm(subtract(grad, *state.last_sent_grad));
    const double threshold = xi_tilde / static_cast<double>(workers) *
                             norm(subtract(theta_k, theta_km1));
    send = moved > threshold;
  }
  if (send) {
    out.message.payload = grad;
    out.state.last_sent_grad = grad;
  }
  return out;
}

QuantizedVector quantize(const DenseVector& v, std::uint32_t s,
                         std::mt19937_64& rng) {
  if (s == 0) throw InvalidArgument("quantize: s must be positive");
  QuantizedVector q;
  q.s = s;
  q.norm = norm(v);
  q.signs.assign(v.dim(), 1);
  q.levels.assign(v.dim(), 0);
  if (q.norm == 0.0) return q;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double sd = static_cast<double>(s);
  for (std::size_t i = 0; i < v.dim(); ++i) {
    q.signs[i] = v[i] < 0.0 ? -1 : 1;
    const double scaled = std::abs(v[i]) * sd / q.norm;
    double l = std::floor(scaled);
    if (l >= sd) l = sd;  // |v_i| == ||v|| up to rounding
    const double p = scaled - l;
    std::uint32_t level = static_cast<std::uint32_t>(l);
    if (level < s && uniform(rng) < p) ++level;
    q.levels[i] = level;
  }
  return q;
}

DenseVector dequantize(const QuantizedVector& q) {
  q.validate();
  std::vector<double> out(q.dim());
  const double sd = static_cast<double>(q.s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = q.norm * static_cast<double>(q.signs[i]) *
             static_cast<double>(q.levels[i]) / sd;
  }
  return DenseVector(std::move(out));
}

std::vector<double> iag_selection_weights(std::span<const double> l_worker) {
  if (l_worker.empty()) throw InvalidArgument("iag_selection_weights: empty");
  double total = 0.0;
  for (double l : l_worker) {
    if (!(l > 0.0)) {
      throw InvalidArgument("iag_selection_weights: L_m must be positive");
    }
    total += l;
  }
  std::vector<double> p(l_worker.size());
  for (std::size_t m = 0; m < p.size(); ++m) p[m] = l_worker[m] / total;
  return p;
}

}  // namespace gdsec
