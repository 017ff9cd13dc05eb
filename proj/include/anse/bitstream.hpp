// Copyright 2026 The anse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "anse/error.hpp"

namespace anse {

// Bit i of the stream lives in byte i / 8 at bit position i % 8 (LSB first).
// Padding bits in the last byte are zero when produced by BitWriter.
struct BitPayload {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bit_length = 0;

  bool bit(std::uint64_t i) const { return (bytes[i >> 3] >> (i & 7)) & 1u; }

  friend bool operator==(const BitPayload&, const BitPayload&) = default;
};

inline std::size_t bytes_for_bits(std::uint64_t bits) {
  return static_cast<std::size_t>((bits + 7) / 8);
}

class BitWriter {
 public:
  void write_bit(unsigned bit) {
    if ((payload_.bit_length & 7) == 0) payload_.bytes.push_back(0);
    payload_.bytes.back() |= static_cast<std::uint8_t>((bit & 1u) << (payload_.bit_length & 7));
    ++payload_.bit_length;
  }

  // Writes the low `count` bits of value, most significant first.
  void write_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;) write_bit(static_cast<unsigned>(value >> i) & 1u);
  }

  void reserve_bits(std::uint64_t bits) { payload_.bytes.reserve(bytes_for_bits(bits)); }

  std::uint64_t bit_length() const noexcept { return payload_.bit_length; }
  BitPayload finish() && { return std::move(payload_); }

 private:
  BitPayload payload_;
};

// What a reader does when asked for bits past the end of the payload.
enum class Underrun {
  kThrow,     // truncated-stream error
  kZeroFill,  // missing bits read as zero
};

class BitReader {
 public:
  explicit BitReader(const BitPayload& payload, Underrun policy = Underrun::kThrow)
      : payload_(&payload), policy_(policy) {}

  unsigned read_bit() {
    if (position_ >= payload_->bit_length) {
      detail::require(policy_ == Underrun::kZeroFill, ErrorCode::kTruncatedStream,
                      "payload exhausted");
      ++position_;
      ++overrun_;
      return 0;
    }
    return payload_->bit(position_++) ? 1u : 0u;
  }

  // Reads `count` bits; the first bit read becomes the most significant.
  std::uint32_t read_bits(unsigned count) {
    std::uint32_t value = 0;
    for (unsigned i = 0; i < count; ++i) value = (value << 1) | read_bit();
    return value;
  }

  std::uint64_t position() const noexcept { return position_; }
  std::uint64_t remaining() const noexcept {
    return position_ >= payload_->bit_length ? 0 : payload_->bit_length - position_;
  }
  // Number of zero bits synthesized past the end (kZeroFill only).
  std::uint64_t overrun() const noexcept { return overrun_; }

 private:
  const BitPayload* payload_;
  Underrun policy_;
  std::uint64_t position_ = 0;
  std::uint64_t overrun_ = 0;
};

}  // namespace anse
