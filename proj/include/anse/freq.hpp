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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "anse/error.hpp"

namespace anse {

using Symbol = std::uint16_t;

// L = 2^R is kept small enough that states and table entries fit in 16 bits.
inline constexpr unsigned kMaxRadixLog = 15;

// Quantized symbol frequencies: symbol s owns L_s of the L = 2^R state slots,
// so q_s = L_s / L approximates its probability. Every symbol of the alphabet
// owns at least one slot.
class FrequencyTable {
 public:
  FrequencyTable(unsigned radix_log, std::vector<std::uint32_t> freqs)
      : radix_log_(radix_log), freqs_(std::move(freqs)) {
    detail::require(radix_log_ >= 1 && radix_log_ <= kMaxRadixLog,
                    ErrorCode::kInvalidInput, "radix log must be in [1, 15]");
    detail::require(!freqs_.empty(), ErrorCode::kInvalidInput,
                    "alphabet must not be empty");
    detail::require(freqs_.size() <= table_size(), ErrorCode::kCapacity,
                    "alphabet larger than the state table");
    std::uint64_t sum = 0;
    for (auto f : freqs_) {
      detail::require(f >= 1, ErrorCode::kInvalidInput,
                      "every symbol needs at least one slot");
      sum += f;
    }
    detail::require(sum == table_size(), ErrorCode::kInvalidInput,
                    "frequencies must sum to 2^R");
  }

  unsigned radix_log() const noexcept { return radix_log_; }
  std::uint32_t table_size() const noexcept { return 1u << radix_log_; }
  std::size_t alphabet_size() const noexcept { return freqs_.size(); }
  std::span<const std::uint32_t> freqs() const noexcept { return freqs_; }
  std::uint32_t operator[](std::size_t s) const { return freqs_[s]; }

  double probability(std::size_t s) const {
    return static_cast<double>(freqs_[s]) / table_size();
  }

  std::vector<double> probabilities() const {
    std::vector<double> q(freqs_.size());
    for (std::size_t s = 0; s < q.size(); ++s) q[s] = probability(s);
    return q;
  }

  // Sum of L_s' for s' < s.
  std::uint32_t cumulative(std::size_t s) const {
    return std::accumulate(freqs_.begin(), freqs_.begin() + s, 0u);
  }

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  unsigned radix_log_;
  std::vector<std::uint32_t> freqs_;
};

namespace detail {
__extension__ typedef unsigned __int128 Wide;
}  // namespace detail

// Largest-remainder quantization of raw counts onto 2^R slots. Ties on the
// remainder go to the lower symbol index. Symbols that end up with no slot
// take one from the currently largest entry (lowest index on ties).
inline FrequencyTable quantize_frequencies(std::span<const std::uint64_t> counts,
                                           unsigned radix_log) {
  detail::require(radix_log >= 1 && radix_log <= kMaxRadixLog,
                  ErrorCode::kInvalidInput, "radix log must be in [1, 15]");
  detail::require(!counts.empty(), ErrorCode::kInvalidInput,
                  "alphabet must not be empty");
  const std::uint64_t table = std::uint64_t{1} << radix_log;
  detail::require(counts.size() <= table, ErrorCode::kCapacity,
                  "alphabet larger than the state table");

  detail::Wide total = 0;
  for (auto c : counts) total += c;
  detail::require(total > 0, ErrorCode::kInvalidInput, "all counts are zero");

  const std::size_t m = counts.size();
  std::vector<std::uint32_t> freqs(m);
  std::vector<detail::Wide> remainder(m);
  std::uint64_t assigned = 0;
  for (std::size_t s = 0; s < m; ++s) {
    const detail::Wide scaled = static_cast<detail::Wide>(counts[s]) * table;
    freqs[s] = static_cast<std::uint32_t>(scaled / total);
    remainder[s] = scaled % total;
    assigned += freqs[s];
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::uint64_t i = 0; i < table - assigned; ++i) ++freqs[order[i]];

  for (std::size_t s = 0; s < m; ++s) {
    if (freqs[s] != 0) continue;
    // max_element returns the first maximum, i.e. the lowest index.
    auto donor = std::max_element(freqs.begin(), freqs.end());
    --*donor;
    freqs[s] = 1;
  }
  return FrequencyTable(radix_log, std::move(freqs));
}

// Entropy in bits per symbol; zero-probability terms contribute nothing.
inline double shannon_entropy(std::span<const double> probs) {
  double sum = 0.0;
  double entropy = 0.0;
  for (double p : probs) {
    detail::require(p >= 0.0 && std::isfinite(p), ErrorCode::kInvalidInput,
                    "probabilities must be nonnegative");
    sum += p;
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  detail::require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::kInvalidInput,
                  "probabilities must sum to 1");
  return entropy;
}

// Order-of-magnitude estimate of the tANS redundancy: m^2 / L^2 bits/symbol.
// Not a bound; the actual value depends on the spread.
inline double redundancy_estimate(std::size_t alphabet_size, std::size_t table_size) {
  detail::require(alphabet_size >= 1 && table_size >= alphabet_size,
                  ErrorCode::kInvalidInput, "need 1 <= m <= L");
  const double ratio = static_cast<double>(alphabet_size) / static_cast<double>(table_size);
  return ratio * ratio;
}

// Empirical histogram over an alphabet of size m.
inline std::vector<std::uint64_t> histogram(std::span<const Symbol> symbols,
                                            std::size_t alphabet_size) {
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for (Symbol s : symbols) {
    detail::require(s < alphabet_size, ErrorCode::kInvalidInput,
                    "symbol outside the alphabet");
    ++counts[s];
  }
  return counts;
}

}  // namespace anse
