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

// Message costing and byte serialization.
//
// Ledger convention (BitScheme::kLedger):
//   none               0
//   dense gradient     32 * d
//   sparse delta       32 * nnz + sum of run-length varint bits
//   quantized          9 * d + 32, or 0 when the norm is zero
//
// Run lengths are the zero gaps between consecutive nonzero indices, the
// first run being the first index. Each run is a LEB128 varint (7 data bits
// per byte), so a run costs 8 bits when below 128, 16 below 16384, ...
//
// Serialized form (little endian, BitScheme::kSerialized counts its bytes):
//   none       [kind u8 = 0]
//   sparse     [kind = 1][d varint][nnz varint][runs varint...][values f32...]
//   dense      [kind = 2][d varint][values f32 x d]
//   quantized  [kind = 3][d varint][s varint][norm f32][levels varint x d]
//              [sign bits, ceil(d/8) bytes, bit i set = negative]
// Values are narrowed to float32 on the wire; round trips are exact for
// float-representable inputs.

#ifndef GDSEC_ENCODING_HPP_
#define GDSEC_ENCODING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "gdsec/compressors.hpp"

namespace gdsec {

class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

enum class BitScheme { kLedger, kSerialized };

BitScheme parse_bit_scheme(std::string_view name);

std::size_t varint_bytes(std::uint64_t value);
inline std::uint64_t varint_bits(std::uint64_t value) {
  return 8 * varint_bytes(value);
}

struct RleIndices {
  std::vector<std::uint64_t> runs;
  std::uint64_t bit_count = 0;
};

RleIndices rle_encode_indices(std::span<const std::size_t> indices,
                              std::size_t dim);
std::vector<std::size_t> rle_decode_indices(
    std::span<const std::uint64_t> runs);

std::uint64_t message_bits(const WireMessage& msg,
                           BitScheme scheme = BitScheme::kLedger);

std::vector<std::uint8_t> serialize(const WireMessage& msg);
WireMessage deserialize(std::span<const std::uint8_t> bytes);

}  // namespace gdsec

#endif  // GDSEC_ENCODING_HPP_
