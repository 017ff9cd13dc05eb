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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "anse/error.hpp"
#include "anse/freq.hpp"
#include "anse/spread.hpp"

namespace anse {

namespace detail {

inline unsigned floor_log2(std::uint32_t x) {
  return static_cast<unsigned>(std::bit_width(x)) - 1;
}

inline void check_spread(const SymbolSpread& spread, const FrequencyTable& freq) {
  require(consistent(spread, freq), ErrorCode::kInvalidInput,
          "spread does not match the frequency table");
}

}  // namespace detail

struct DecodeEntry {
  Symbol symbol;
  std::uint8_t nb_bits;
  std::uint16_t new_x;  // refill base, X = new_x + readBits(nb_bits)

  friend bool operator==(const DecodeEntry&, const DecodeEntry&) = default;
};

// Indexed by X = x - L.
class DecodingTable {
 public:
  DecodingTable(unsigned radix_log, std::vector<DecodeEntry> entries)
      : radix_log_(radix_log), entries_(std::move(entries)) {}

  unsigned radix_log() const noexcept { return radix_log_; }
  std::uint32_t table_size() const noexcept { return 1u << radix_log_; }
  const DecodeEntry& operator[](std::size_t X) const { return entries_[X]; }
  const std::vector<DecodeEntry>& entries() const noexcept { return entries_; }

 private:
  unsigned radix_log_;
  std::vector<DecodeEntry> entries_;
};

// Walks the spread in slot order and numbers the appearances of each symbol
// starting from L_s, so slot X decodes to (symbol[X], x) with x in I_s.
inline DecodingTable build_decoding_table(const SymbolSpread& spread,
                                          const FrequencyTable& freq) {
  detail::check_spread(spread, freq);
  const unsigned R = freq.radix_log();
  const std::uint32_t L = freq.table_size();
  std::vector<std::uint32_t> next(freq.freqs().begin(), freq.freqs().end());
  std::vector<DecodeEntry> entries(L);
  for (std::uint32_t X = 0; X < L; ++X) {
    DecodeEntry& t = entries[X];
    t.symbol = spread[X];
    const std::uint32_t x = next[t.symbol]++;
    t.nb_bits = static_cast<std::uint8_t>(R - detail::floor_log2(x));
    t.new_x = static_cast<std::uint16_t>((x << t.nb_bits) - L);
  }
  return DecodingTable(R, std::move(entries));
}

// Flattened encoding function: C(s, x) = next_state[start[s] + x] for
// x in I_s = {L_s, ..., 2 L_s - 1}, plus the per-symbol renormalization
// constants. start[s] may be negative; start[s] + x always lands in [0, L).
class EncodingTable {
 public:
  unsigned radix_log() const noexcept { return radix_log_; }
  std::uint32_t table_size() const noexcept { return 1u << radix_log_; }
  std::size_t alphabet_size() const noexcept { return start_.size(); }

  // r = R + 1, so 2^r = 2L.
  unsigned shift() const noexcept { return radix_log_ + 1; }

  std::span<const std::uint16_t> next_state() const noexcept { return next_state_; }
  std::span<const std::int32_t> start() const noexcept { return start_; }
  std::span<const std::uint8_t> k() const noexcept { return k_; }
  std::span<const std::int32_t> nb() const noexcept { return nb_; }

  std::uint32_t nb_bits(std::uint32_t x, Symbol s) const {
    return static_cast<std::uint32_t>((static_cast<std::int64_t>(x) + nb_[s]) >> shift());
  }

  std::uint32_t transition(std::uint32_t reduced_x, Symbol s) const {
    return next_state_[static_cast<std::size_t>(start_[s] + static_cast<std::int32_t>(reduced_x))];
  }

 private:
  friend EncodingTable build_encoding_table(const SymbolSpread&, const FrequencyTable&);

  unsigned radix_log_ = 0;
  std::vector<std::uint16_t> next_state_;
  std::vector<std::int32_t> start_;
  std::vector<std::uint8_t> k_;
  std::vector<std::int32_t> nb_;
};

inline EncodingTable build_encoding_table(const SymbolSpread& spread,
                                          const FrequencyTable& freq) {
  detail::check_spread(spread, freq);
  const unsigned R = freq.radix_log();
  const unsigned r = R + 1;
  const std::uint32_t L = freq.table_size();
  const std::size_t m = freq.alphabet_size();

  EncodingTable table;
  table.radix_log_ = R;
  table.next_state_.resize(L);
  table.start_.resize(m);
  table.k_.resize(m);
  table.nb_.resize(m);

  std::int32_t cumulative = 0;
  for (std::size_t s = 0; s < m; ++s) {
    const auto Ls = static_cast<std::int32_t>(freq[s]);
    const unsigned k = R - detail::floor_log2(freq[s]);
    table.k_[s] = static_cast<std::uint8_t>(k);
    table.nb_[s] = static_cast<std::int32_t>((std::int64_t{k} << r) - (std::int64_t{Ls} << k));
    table.start_[s] = cumulative - Ls;
    cumulative += Ls;
  }

  std::vector<std::int32_t> next(freq.freqs().begin(), freq.freqs().end());
  for (std::uint32_t x = L; x < 2 * L; ++x) {
    const Symbol s = spread[x - L];
    table.next_state_[static_cast<std::size_t>(table.start_[s] + next[s]++)] =
        static_cast<std::uint16_t>(x);
  }
  return table;
}

// Bytes of a decoding table with byte-aligned entries: symbol (1 byte up to
// 256 symbols, else 2), nbBits (1 byte), newX (2 bytes).
inline std::size_t decoding_table_bytes(const FrequencyTable& freq) {
  const std::size_t symbol_bytes = freq.alphabet_size() <= 256 ? 1 : 2;
  return std::size_t{freq.table_size()} * (symbol_bytes + 1 + 2);
}

// Same table with every field packed to its minimal bit width.
inline std::size_t decoding_table_packed_bits(const FrequencyTable& freq) {
  const auto width = [](std::size_t max_value) {
    return static_cast<std::size_t>(std::bit_width(max_value));
  };
  const std::size_t symbol_bits = width(freq.alphabet_size() - 1);
  const std::size_t nb_bits = width(freq.radix_log());
  const std::size_t new_x_bits = freq.radix_log();
  return std::size_t{freq.table_size()} * (symbol_bits + nb_bits + new_x_bits);
}

}  // namespace anse
