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

// Streaming tANS coder.
//
// Direction contract: the encoder consumes the message last symbol first and
// the payload is the exact reversal of everything it emitted. The decoder then
// starts from the encoder's final state, reads the payload front to back and
// produces the symbols in message order, ending in the encoder's initial
// state.
//
// Within one renormalization step the encoder emits the low bits of x least
// significant first; after the reversal the decoder sees them most
// significant first, which is what its x = 2x + bit refill expects.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "anse/bitstream.hpp"
#include "anse/error.hpp"
#include "anse/tables.hpp"

namespace anse {

// Coder state x in I = {L, ..., 2L - 1}.
struct CoderState {
  std::uint32_t x = 0;

  // X = x - L, the table index form.
  std::uint32_t index(unsigned radix_log) const { return x - (1u << radix_log); }

  static CoderState from_index(std::uint32_t X, unsigned radix_log) {
    return CoderState{X + (1u << radix_log)};
  }

  bool valid(unsigned radix_log) const {
    return x >= (1u << radix_log) && x < (2u << radix_log);
  }

  friend bool operator==(const CoderState&, const CoderState&) = default;
};

struct EncodedStep {
  CoderState state;
  std::uint32_t bits;  // the emitted low bits of the old state
  unsigned nb_bits;
};

inline EncodedStep encode_step(CoderState state, Symbol s, const EncodingTable& table) {
  detail::require(s < table.alphabet_size(), ErrorCode::kInvalidInput,
                  "symbol not in the alphabet");
  detail::require(state.valid(table.radix_log()), ErrorCode::kInvalidInput,
                  "coder state outside I");
  const std::uint32_t nb_bits = table.nb_bits(state.x, s);
  const std::uint32_t bits = state.x & ((1u << nb_bits) - 1);
  return {CoderState{table.transition(state.x >> nb_bits, s)}, bits, nb_bits};
}

struct DecodedStep {
  Symbol symbol;
  CoderState state;
};

inline DecodedStep decode_step(CoderState state, const DecodingTable& table,
                               BitReader& reader) {
  const unsigned R = table.radix_log();
  detail::require(state.valid(R), ErrorCode::kInvalidInput, "coder state outside I");
  const DecodeEntry& t = table[state.index(R)];
  const std::uint32_t X = t.new_x + reader.read_bits(t.nb_bits);
  return {t.symbol, CoderState::from_index(X, R)};
}

struct EncodedFrame {
  BitPayload payload;
  CoderState final_state;
};

inline EncodedFrame encode_frame(std::span<const Symbol> symbols, const EncodingTable& table,
                                 CoderState initial) {
  detail::require(initial.valid(table.radix_log()), ErrorCode::kInvalidInput,
                  "initial state outside I");
  struct Group {
    std::uint32_t bits;
    unsigned count;
  };
  std::vector<Group> groups;
  groups.reserve(symbols.size());
  std::uint64_t total_bits = 0;
  CoderState state = initial;
  for (std::size_t i = symbols.size(); i-- > 0;) {
    const EncodedStep step = encode_step(state, symbols[i], table);
    groups.push_back({step.bits, step.nb_bits});
    total_bits += step.nb_bits;
    state = step.state;
  }

  BitWriter writer;
  writer.reserve_bits(total_bits);
  for (auto it = groups.rbegin(); it != groups.rend(); ++it)
    writer.write_bits(it->bits, it->count);
  return {std::move(writer).finish(), state};
}

struct DecodedFrame {
  std::vector<Symbol> symbols;
  CoderState final_state;  // equals the encoder's initial state
};

inline DecodedFrame decode_frame(BitReader& reader, const DecodingTable& table,
                                 CoderState state, std::size_t count) {
  DecodedFrame out;
  out.symbols.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const DecodedStep step = decode_step(state, table, reader);
    out.symbols.push_back(step.symbol);
    state = step.state;
  }
  out.final_state = state;
  return out;
}

inline DecodedFrame decode_frame(const BitPayload& payload, const DecodingTable& table,
                                 CoderState state, std::size_t count,
                                 Underrun policy = Underrun::kThrow) {
  BitReader reader(payload, policy);
  return decode_frame(reader, table, state, count);
}

}  // namespace anse
