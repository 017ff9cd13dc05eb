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

// Exact ANS over unbounded naturals. Slow; kept as a reference for the
// tabled coder.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anse/error.hpp"
#include "anse/spread.hpp"

namespace anse {

using BigNat = boost::multiprecision::cpp_int;

// Extends a length-L spread to all naturals: symbol(x) = spread[x mod L].
class PeriodicSpread {
 public:
  PeriodicSpread(SymbolSpread spread, std::size_t alphabet_size)
      : spread_(std::move(spread)),
        positions_(alphabet_size),
        rank_(spread_.size()) {
    detail::require(!spread_.symbols.empty(), ErrorCode::kInvalidInput,
                    "spread must not be empty");
    for (std::size_t X = 0; X < spread_.size(); ++X) {
      const Symbol s = spread_[X];
      detail::require(s < alphabet_size, ErrorCode::kInvalidInput,
                      "spread symbol outside the alphabet");
      rank_[X] = static_cast<std::uint32_t>(positions_[s].size());
      positions_[s].push_back(static_cast<std::uint32_t>(X));
    }
  }

  std::size_t period() const noexcept { return spread_.size(); }
  std::size_t alphabet_size() const noexcept { return positions_.size(); }
  const SymbolSpread& spread() const noexcept { return spread_; }

  // Occurrences of s within one period.
  std::size_t occurrences(Symbol s) const { return positions_.at(s).size(); }

  Symbol symbol_at(const BigNat& x) const {
    return spread_[static_cast<std::size_t>(x % period())];
  }

  // Position of the i-th occurrence of s inside one period.
  std::uint32_t position(Symbol s, std::size_t i) const { return positions_[s][i]; }
  std::uint32_t rank(std::size_t X) const { return rank_[X]; }

 private:
  SymbolSpread spread_;
  std::vector<std::vector<std::uint32_t>> positions_;
  std::vector<std::uint32_t> rank_;
};

// C(s, x): the x-th (0-based) appearance of s.
inline BigNat bignum_encode(Symbol s, const BigNat& x, const PeriodicSpread& spread) {
  detail::require(s < spread.alphabet_size() && spread.occurrences(s) > 0,
                  ErrorCode::kInvalidInput, "symbol not in the alphabet");
  detail::require(x >= 0, ErrorCode::kInvalidInput, "negative state");
  const std::size_t per_period = spread.occurrences(s);
  const BigNat periods = x / per_period;
  const auto within = static_cast<std::size_t>(x % per_period);
  return periods * spread.period() + spread.position(s, within);
}

// D(x') = (symbol at x', number of earlier appearances of that symbol).
inline std::pair<Symbol, BigNat> bignum_decode(const BigNat& x, const PeriodicSpread& spread) {
  detail::require(x >= 0, ErrorCode::kInvalidInput, "negative state");
  const BigNat periods = x / spread.period();
  const auto X = static_cast<std::size_t>(x % spread.period());
  const Symbol s = spread.spread()[X];
  return {s, periods * spread.occurrences(s) + spread.rank(X)};
}

inline BigNat encode_sequence(std::span<const Symbol> symbols, const BigNat& x0,
                              const PeriodicSpread& spread) {
  BigNat x = x0;
  for (Symbol s : symbols) x = bignum_encode(s, x, spread);
  return x;
}

// Decodes the last n encoded symbols; they are returned in encoding order
// together with the state reached after removing them.
inline std::pair<std::vector<Symbol>, BigNat> decode_sequence(const BigNat& x_final,
                                                              std::size_t n,
                                                              const PeriodicSpread& spread) {
  std::vector<Symbol> symbols(n);
  BigNat x = x_final;
  for (std::size_t i = n; i-- > 0;) {
    auto [s, prev] = bignum_decode(x, spread);
    symbols[i] = s;
    x = std::move(prev);
  }
  return {std::move(symbols), std::move(x)};
}

}  // namespace anse
