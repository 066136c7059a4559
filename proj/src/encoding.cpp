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

#include "gdsec/encoding.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

namespace gdsec {
namespace {

constexpr std::uint64_t kValueBits = 32;
constexpr std::uint64_t kQuantizedEntryBits = 9;  // 8 magnitude + 1 sign

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_f32(std::vector<std::uint8_t>& out, double v) {
  const auto f = static_cast<float>(v);
  if (!std::isfinite(f) || (v != 0.0 && f == 0.0f)) {
    throw InvalidArgument("serialize: value not representable as float32");
  }
  const auto bits = std::bit_cast<std::uint32_t>(f);
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ == bytes_.size(); }

  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) throw DecodeError("unexpected end", pos_);
    return bytes_[pos_++];
  }

  std::uint64_t varint() {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if ((b & 0x80) == 0) return v;
    }
    throw DecodeError("varint too long", start);
  }

  double f32() {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(byte()) << (8 * b);
    }
    return static_cast<double>(std::bit_cast<float>(bits));
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

DecodeError::DecodeError(const std::string& what, std::size_t offset)
    : std::runtime_error("decode error at byte " + std::to_string(offset) +
                         ": " + what),
      offset_(offset) {}

BitScheme parse_bit_scheme(std::string_view name) {
  if (name == "ledger" || name == "paper") return BitScheme::kLedger;
  if (name == "serialized") return BitScheme::kSerialized;
  throw InvalidArgument("unknown bit scheme '" + std::string(name) + "'");
}

std::size_t varint_bytes(std::uint64_t value) {
  std::size_t n = 1;
  while (value >= 0x80) {
    value >>= 7;
    ++n;
  }
  return n;
}

RleIndices rle_encode_indices(std::span<const std::size_t> indices,
                              std::size_t dim) {
  RleIndices out;
  out.runs.reserve(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= dim) {
      throw InvalidArgument("rle_encode_indices: index " +
                            std::to_string(indices[t]) + " >= d");
    }
    if (t > 0 && indices[t] <= indices[t - 1]) {
      throw InvalidArgument("rle_encode_indices: indices not increasing");
    }
    const std::uint64_t run =
        t == 0 ? indices[0] : indices[t] - indices[t - 1] - 1;
    out.runs.push_back(run);
    out.bit_count += varint_bits(run);
  }
  return out;
}

std::vector<std::size_t> rle_decode_indices(
    std::span<const std::uint64_t> runs) {
  std::vector<std::size_t> out;
  out.reserve(runs.size());
  std::size_t next = 0;
  for (std::uint64_t run : runs) {
    next += static_cast<std::size_t>(run);
    out.push_back(next);
    ++next;
  }
  return out;
}

std::uint64_t message_bits(const WireMessage& msg, BitScheme scheme) {
  if (scheme == BitScheme::kSerialized) {
    return msg.empty() ? 0 : 8 * serialize(msg).size();
  }
  switch (msg.kind()) {
    case MessageKind::kNone:
      return 0;
    case MessageKind::kDenseGradient:
      return kValueBits * std::get<DenseVector>(msg.payload).dim();
    case MessageKind::kSparseDelta: {
      const auto& sd = std::get<SparseDelta>(msg.payload);
      const auto idx = sd.indices();
      return kValueBits * sd.nnz() + rle_encode_indices(idx, sd.dim()).bit_count;
    }
    case MessageKind::kQuantizedGradient: {
      const auto& q = std::get<QuantizedVector>(msg.payload);
      if (q.norm == 0.0) return 0;
      return kQuantizedEntryBits * q.dim() + kValueBits;
    }
  }
  throw InvalidArgument("message_bits: unknown message kind");
}

std::vector<std::uint8_t> serialize(const WireMessage& msg) {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(msg.kind()));
  switch (msg.kind()) {
    case MessageKind::kNone:
      break;
    case MessageKind::kSparseDelta: {
      const auto& sd = std::get<SparseDelta>(msg.payload);
      put_varint(out, sd.dim());
      put_varint(out, sd.nnz());
      const auto idx = sd.indices();
      for (std::uint64_t run : rle_encode_indices(idx, sd.dim()).runs) {
        put_varint(out, run);
      }
      for (const auto& e : sd.entries()) put_f32(out, e.value);
      break;
    }
    case MessageKind::kDenseGradient: {
      const auto& v = std::get<DenseVector>(msg.payload);
      put_varint(out, v.dim());
      for (double x : v.values()) put_f32(out, x);
      break;
    }
    case MessageKind::kQuantizedGradient: {
      const auto& q = std::get<QuantizedVector>(msg.payload);
      q.validate();
      put_varint(out, q.dim());
      put_varint(out, q.s);
      put_f32(out, q.norm);
      for (std::uint32_t l : q.levels) put_varint(out, l);
      std::vector<std::uint8_t> sign_bits((q.dim() + 7) / 8, 0);
      for (std::size_t i = 0; i < q.dim(); ++i) {
        if (q.signs[i] < 0) sign_bits[i / 8] |= std::uint8_t(1u << (i % 8));
      }
      out.insert(out.end(), sign_bits.begin(), sign_bits.end());
      break;
    }
  }
  return out;
}

WireMessage deserialize(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  const std::uint8_t kind = in.byte();
  WireMessage msg;
  try {
    switch (kind) {
      case 0:
        break;
      case 1: {
        const std::uint64_t dim = in.varint();
        const std::uint64_t nnz = in.varint();
        if (nnz > dim) throw DecodeError("nnz exceeds dimension", in.offset());
        std::vector<std::uint64_t> runs(nnz);
        for (auto& r : runs) r = in.varint();
        const auto idx = rle_decode_indices(runs);
        std::vector<SparseEntry> entries(nnz);
        for (std::size_t t = 0; t < nnz; ++t) {
          if (idx[t] >= dim) {
            throw DecodeError("run lengths overflow dimension", in.offset());
          }
          entries[t] = {idx[t], in.f32()};
        }
        msg.payload = SparseDelta(dim, std::move(entries));
        break;
      }
      case 2: {
        const std::uint64_t dim = in.varint();
        if (dim > bytes.size()) throw DecodeError("dimension too large", 1);
        std::vector<double> v(dim);
        for (auto& x : v) x = in.f32();
        msg.payload = DenseVector(std::move(v));
        break;
      }
      case 3: {
        const std::uint64_t dim = in.varint();
        if (dim > bytes.size()) throw DecodeError("dimension too large", 1);
        QuantizedVector q;
        q.s = static_cast<std::uint32_t>(in.varint());
        q.norm = in.f32();
        q.levels.resize(dim);
        for (auto& l : q.levels) l = static_cast<std::uint32_t>(in.varint());
        q.signs.assign(dim, 1);
        std::vector<std::uint8_t> sign_bits((dim + 7) / 8);
        for (auto& b : sign_bits) b = in.byte();
        for (std::size_t i = 0; i < dim; ++i) {
          if (sign_bits[i / 8] & (1u << (i % 8))) q.signs[i] = -1;
        }
        q.validate();
        msg.payload = std::move(q);
        break;
      }
      default:
        throw DecodeError("unknown message kind " + std::to_string(kind), 0);
    }
  } catch (const DecodeError&) {
    throw;
  } catch (const std::exception& e) {
    throw DecodeError(e.what(), in.offset());
  }
  if (!in.done()) throw DecodeError("trailing bytes", in.offset());
  return msg;
}

}  // namespace gdsec
