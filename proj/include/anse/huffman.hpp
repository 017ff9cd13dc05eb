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

// Canonical Huffman baseline, and the check that a range-spread tANS table
// with power-of-two frequencies is a prefix-code decoder.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "anse/bitstream.hpp"
#include "anse/codec.hpp"
#include "anse/error.hpp"
#include "anse/freq.hpp"
#include "anse/spread.hpp"
#include "anse/tables.hpp"

namespace anse {

inline constexpr unsigned kMaxCodeLength = 63;

// Codewords are read most significant bit first. Length 0 marks a symbol
// without a codeword, except in the single-symbol case where the only symbol
// costs zero bits.
struct PrefixCode {
  std::vector<std::uint8_t> lengths;
  std::vector<std::uint64_t> codewords;

  std::size_t alphabet_size() const noexcept { return lengths.size(); }
};

inline double kraft_sum(const PrefixCode& code) {
  double sum = 0.0;
  for (auto len : code.lengths)
    if (len > 0) sum += std::ldexp(1.0, -static_cast<int>(len));
  return sum;
}

namespace detail {

// Two-queue Huffman over the nonzero counts; returns code lengths.
inline std::vector<std::uint8_t> huffman_lengths(std::span<const std::uint64_t> counts) {
  struct Node {
    std::uint64_t weight;
    std::size_t parent;
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<std::size_t> leaves;
  for (std::size_t s = 0; s < counts.size(); ++s)
    if (counts[s] > 0) leaves.push_back(s);
  std::stable_sort(leaves.begin(), leaves.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

  std::vector<std::uint8_t> lengths(counts.size(), 0);
  if (leaves.size() < 2) return lengths;

  std::vector<Node> nodes;
  nodes.reserve(2 * leaves.size());
  for (std::size_t s : leaves) nodes.push_back({counts[s], kNone});

  std::size_t leaf = 0;
  std::size_t internal = leaves.size();
  auto take = [&]() {
    // Leaves win ties, which keeps the tree shallow.
    if (leaf < leaves.size() &&
        (internal == nodes.size() || nodes[leaf].weight <= nodes[internal].weight))
      return leaf++;
    return internal++;
  };
  while (nodes.size() < 2 * leaves.size() - 1) {
    const std::size_t a = take();
    const std::size_t b = take();
    nodes[a].parent = nodes[b].parent = nodes.size();
    nodes.push_back({nodes[a].weight + nodes[b].weight, kNone});
  }

  // Parents always come after children, so depths fill in from the root down.
  std::vector<unsigned> depth(nodes.size(), 0);
  for (std::size_t i = nodes.size() - 1; i-- > 0;) depth[i] = depth[nodes[i].parent] + 1;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    require(depth[i] <= kMaxCodeLength, ErrorCode::kCapacity, "code too long");
    lengths[leaves[i]] = static_cast<std::uint8_t>(depth[i]);
  }
  return lengths;
}

}  // namespace detail

// Canonical assignment: shorter codes first, ties in symbol order.
inline PrefixCode canonical_code(std::vector<std::uint8_t> lengths) {
  PrefixCode code;
  code.codewords.assign(lengths.size(), 0);
  std::vector<std::size_t> order;
  for (std::size_t s = 0; s < lengths.size(); ++s)
    if (lengths[s] > 0) order.push_back(s);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  std::uint64_t next = 0;
  unsigned prev_len = order.empty() ? 0 : lengths[order.front()];
  for (std::size_t s : order) {
    next <<= (lengths[s] - prev_len);
    prev_len = lengths[s];
    code.codewords[s] = next++;
  }
  code.lengths = std::move(lengths);
  return code;
}

inline PrefixCode huffman_build(std::span<const std::uint64_t> counts) {
  detail::require(std::any_of(counts.begin(), counts.end(), [](auto c) { return c > 0; }),
                  ErrorCode::kInvalidInput, "all counts are zero");
  return canonical_code(detail::huffman_lengths(counts));
}

namespace detail {

// A single-symbol alphabet gets no codewords at all.
inline bool no_codewords(const PrefixCode& code) {
  return std::all_of(code.lengths.begin(), code.lengths.end(), [](auto len) { return len == 0; });
}

}  // namespace detail

inline BitPayload prefix_encode(std::span<const Symbol> symbols, const PrefixCode& code) {
  BitWriter writer;
  const bool trivial = detail::no_codewords(code);
  for (Symbol s : symbols) {
    detail::require(s < code.alphabet_size(), ErrorCode::kInvalidInput,
                    "symbol not in the alphabet");
    if (trivial) continue;
    detail::require(code.lengths[s] > 0, ErrorCode::kInvalidInput, "symbol has no codeword");
    writer.write_bits(code.codewords[s], code.lengths[s]);
  }
  return std::move(writer).finish();
}

// The symbol count is carried externally. For a single-symbol code the
// decoder cannot know which symbol had a count; pass it as `trivial_symbol`.
inline std::vector<Symbol> prefix_decode(const BitPayload& payload, const PrefixCode& code,
                                         std::size_t count, Symbol trivial_symbol = 0) {
  std::vector<Symbol> out;
  out.reserve(count);
  if (detail::no_codewords(code)) {
    out.assign(count, trivial_symbol);
    return out;
  }

  // Canonical decoding: per length, the first codeword and where its symbols
  // start in length-sorted order.
  const unsigned max_len = *std::max_element(code.lengths.begin(), code.lengths.end());
  std::vector<std::size_t> sorted;
  for (std::size_t s = 0; s < code.alphabet_size(); ++s)
    if (code.lengths[s] > 0) sorted.push_back(s);
  std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    return code.lengths[a] < code.lengths[b];
  });
  std::vector<std::uint64_t> first_code(max_len + 1, 0);
  std::vector<std::size_t> first_index(max_len + 1, 0), per_length(max_len + 1, 0);
  for (std::size_t s : sorted) ++per_length[code.lengths[s]];
  std::size_t index = 0;
  for (unsigned len = 1; len <= max_len; ++len) {
    first_index[len] = index;
    if (per_length[len] > 0) first_code[len] = code.codewords[sorted[index]];
    index += per_length[len];
  }

  BitReader reader(payload);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t value = 0;
    for (unsigned len = 1;; ++len) {
      detail::require(len <= max_len, ErrorCode::kInvalidInput, "invalid codeword");
      value = (value << 1) | reader.read_bit();
      if (per_length[len] > 0 && value >= first_code[len] &&
          value - first_code[len] < per_length[len]) {
        out.push_back(static_cast<Symbol>(sorted[first_index[len] + (value - first_code[len])]));
        break;
      }
    }
  }
  return out;
}

// True iff the range-spread tANS coder for `freq` behaves exactly like the
// prefix code with Huffman lengths and codewords assigned in symbol order:
//  - every encoding step for symbol s emits exactly len(s) bits, from every
//    state and along `message`;
//  - decoding table slot X holds the symbol whose codeword prefixes the R-bit
//    value X, consumes len bits and shifts the buffer: newX = (X << len) & mask;
//  - final-state bits followed by the payload equal the prefix-coded message
//    followed by the initial-state bits.
// Requires every L_s to be a power of two.
inline bool degenerate_equivalence_check(const FrequencyTable& freq,
                                         std::span<const Symbol> message) {
  for (auto f : freq.freqs())
    detail::require(std::has_single_bit(f), ErrorCode::kInvalidInput,
                    "frequencies must be powers of two");
  const unsigned R = freq.radix_log();
  const std::uint32_t L = freq.table_size();
  const std::size_t m = freq.alphabet_size();

  const std::vector<std::uint64_t> counts(freq.freqs().begin(), freq.freqs().end());
  const PrefixCode huffman = huffman_build(counts);
  const SymbolSpread spread = range_spread(freq);
  const DecodingTable dec = build_decoding_table(spread, freq);
  const EncodingTable enc = build_encoding_table(spread, freq);

  // Codewords in symbol order are the slot ranges of the range spread.
  std::vector<std::uint64_t> codeword(m);
  for (std::size_t s = 0; s < m; ++s) {
    if (R - detail::floor_log2(freq[s]) != huffman.lengths[s]) return false;
    const std::uint32_t start = freq.cumulative(s);
    if (start % freq[s] != 0) return false;
    codeword[s] = start / freq[s];
  }
  const auto length = [&](std::size_t s) -> unsigned { return huffman.lengths[s]; };

  for (std::size_t s = 0; s < m; ++s)
    for (std::uint32_t x = L; x < 2 * L; ++x)
      if (enc.nb_bits(x, static_cast<Symbol>(s)) != length(s)) return false;

  for (std::uint32_t X = 0; X < L; ++X) {
    const DecodeEntry& t = dec[X];
    const unsigned len = length(t.symbol);
    if ((X >> (R - len)) != codeword[t.symbol]) return false;
    if (t.nb_bits != len) return false;
    if (t.new_x != ((X << len) & (L - 1))) return false;
  }

  CoderState state{L};
  for (std::size_t i = message.size(); i-- > 0;) {
    const EncodedStep step = encode_step(state, message[i], enc);
    if (step.nb_bits != length(message[i])) return false;
    state = step.state;
  }

  BitWriter expected;
  for (Symbol s : message) expected.write_bits(codeword[s], length(s));
  expected.write_bits(0, R);

  const EncodedFrame frame = encode_frame(message, enc, CoderState{L});
  BitWriter actual;
  actual.write_bits(frame.final_state.index(R), R);
  for (std::uint64_t i = 0; i < frame.payload.bit_length; ++i) actual.write_bit(frame.payload.bit(i));
  return std::move(expected).finish() == std::move(actual).finish();
}

}  // namespace anse
