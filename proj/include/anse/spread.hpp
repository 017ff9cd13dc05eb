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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "anse/error.hpp"
#include "anse/freq.hpp"

namespace anse {

inline constexpr std::uint32_t kDefaultBlockSize = 8;

// symbol[X] is the symbol owning state x = X + L.
struct SymbolSpread {
  std::vector<Symbol> symbols;

  std::size_t size() const noexcept { return symbols.size(); }
  Symbol operator[](std::size_t X) const { return symbols[X]; }

  friend bool operator==(const SymbolSpread&, const SymbolSpread&) = default;
};

inline std::vector<std::uint32_t> occurrence_counts(const SymbolSpread& spread,
                                                    std::size_t alphabet_size) {
  std::vector<std::uint32_t> counts(alphabet_size, 0);
  for (Symbol s : spread.symbols) {
    detail::require(s < alphabet_size, ErrorCode::kInvalidInput,
                    "spread symbol outside the alphabet");
    ++counts[s];
  }
  return counts;
}

inline bool consistent(const SymbolSpread& spread, const FrequencyTable& freq) {
  if (spread.size() != freq.table_size()) return false;
  for (Symbol s : spread.symbols)
    if (s >= freq.alphabet_size()) return false;
  auto counts = occurrence_counts(spread, freq.alphabet_size());
  return std::equal(counts.begin(), counts.end(), freq.freqs().begin());
}

// Pseudorandom spread: walk the table with an odd step, which is coprime to
// the power-of-two table size, so every slot is hit exactly once.
inline SymbolSpread fast_spread(const FrequencyTable& freq) {
  const std::uint32_t table = freq.table_size();
  // Forced odd: (5L)/8 + 3 is even for L = 2 and L = 8.
  const std::uint32_t step = ((5 * table) / 8 + 3) | 1u;
  SymbolSpread spread{std::vector<Symbol>(table)};
  std::uint32_t X = 0;
  for (std::size_t s = 0; s < freq.alphabet_size(); ++s) {
    for (std::uint32_t i = 0; i < freq[s]; ++i) {
      spread.symbols[X] = static_cast<Symbol>(s);
      X = (X + step) & (table - 1);
    }
  }
  return spread;
}

// Contiguous blocks in symbol order. With power-of-two L_s this turns the tANS
// decoder into a prefix-code decoder.
inline SymbolSpread range_spread(const FrequencyTable& freq) {
  SymbolSpread spread;
  spread.symbols.reserve(freq.table_size());
  for (std::size_t s = 0; s < freq.alphabet_size(); ++s)
    spread.symbols.insert(spread.symbols.end(), freq[s], static_cast<Symbol>(s));
  return spread;
}

namespace detail {

inline void check_blocks(const SymbolSpread& spread, std::size_t block,
                         std::size_t shift_count) {
  require(block >= 1 && spread.size() % block == 0, ErrorCode::kInvalidInput,
          "block size must divide the table size");
  require(shift_count >= spread.size() / block, ErrorCode::kInvalidInput,
          "need one shift per block");
}

}  // namespace detail

// Rotates block i of the spread left by shifts[i] mod B.
inline SymbolSpread perturb_spread(const SymbolSpread& spread, std::size_t block,
                                   std::span<const std::uint8_t> shifts) {
  detail::check_blocks(spread, block, shifts.size());
  SymbolSpread out = spread;
  for (std::size_t i = 0; i < spread.size() / block; ++i) {
    auto first = out.symbols.begin() + static_cast<std::ptrdiff_t>(i * block);
    std::rotate(first, first + static_cast<std::ptrdiff_t>(shifts[i] % block),
                first + static_cast<std::ptrdiff_t>(block));
  }
  return out;
}

// Inverse of perturb_spread for the same shifts.
inline SymbolSpread unperturb_spread(const SymbolSpread& spread, std::size_t block,
                                     std::span<const std::uint8_t> shifts) {
  detail::check_blocks(spread, block, shifts.size());
  SymbolSpread out = spread;
  for (std::size_t i = 0; i < spread.size() / block; ++i) {
    auto first = out.symbols.begin() + static_cast<std::ptrdiff_t>(i * block);
    std::rotate(first, first + static_cast<std::ptrdiff_t>(block - shifts[i] % block),
                first + static_cast<std::ptrdiff_t>(block));
  }
  return out;
}

}  // namespace anse
