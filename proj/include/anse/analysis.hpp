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

// Measurements on coders and ciphertexts: state statistics, key-space sizes,
// bit balance, avalanche and completeness. Everything that draws random
// numbers takes an explicit seed.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "anse/bitstream.hpp"
#include "anse/codec.hpp"
#include "anse/container.hpp"
#include "anse/crypto.hpp"
#include "anse/error.hpp"
#include "anse/freq.hpp"
#include "anse/tables.hpp"

namespace anse {

// ---------------------------------------------------------------------------
// Sources

// p_s proportional to 1 / (s + 1)^exponent.
inline std::vector<double> zipf_distribution(std::size_t alphabet_size, double exponent = 1.0) {
  std::vector<double> p(alphabet_size);
  double sum = 0.0;
  for (std::size_t s = 0; s < alphabet_size; ++s) sum += p[s] = std::pow(double(s + 1), -exponent);
  for (auto& v : p) v /= sum;
  return p;
}

inline std::vector<Symbol> iid_source(std::span<const double> probs, std::size_t count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  std::vector<Symbol> out(count);
  for (auto& s : out) s = static_cast<Symbol>(dist(rng));
  return out;
}

// ---------------------------------------------------------------------------
// Encoder Markov chain

// rho[X] = probability of visiting state x = X + L before an encoding step.
struct StateDistribution {
  std::vector<double> rho;
  std::size_t iterations = 0;
};

struct StationaryOptions {
  double tolerance = 1e-12;  // L1 change between iterations
  std::size_t max_iterations = 1'000'000;
  // Weight of a uniform restart mixed into every step. Zero keeps the exact
  // stationary law; a small positive value forces a unique answer on
  // reducible chains.
  double restart = 0.0;
};

namespace detail {

inline void check_probs(const EncodingTable& table, std::span<const double> probs) {
  require(probs.size() == table.alphabet_size(), ErrorCode::kInvalidInput,
          "one probability per symbol");
  double sum = 0.0;
  for (double p : probs) {
    require(p >= 0.0, ErrorCode::kInvalidInput, "negative probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-9, ErrorCode::kInvalidInput, "probabilities must sum to 1");
}

// One step of the chain: out = rho * P.
inline void chain_step(const EncodingTable& table, std::span<const double> probs,
                       std::span<const double> rho, std::span<double> out) {
  const unsigned R = table.radix_log();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] == 0.0) continue;
    for (std::uint32_t X = 0; X < rho.size(); ++X) {
      const std::uint32_t x = X + (1u << R);
      const std::uint32_t nb = table.nb_bits(x, static_cast<Symbol>(s));
      const std::uint32_t next = table.transition(x >> nb, static_cast<Symbol>(s)) - (1u << R);
      out[next] += probs[s] * rho[X];
    }
  }
}

}  // namespace detail

// Power iteration on the lazy chain (I + P) / 2, which has the same
// stationary law as P and cannot oscillate on periodic chains.
inline StateDistribution stationary_distribution(const EncodingTable& table,
                                                 std::span<const double> probs,
                                                 const StationaryOptions& options = {}) {
  detail::check_probs(table, probs);
  const std::size_t L = table.table_size();
  StateDistribution dist;
  dist.rho.assign(L, 1.0 / static_cast<double>(L));
  std::vector<double> next(L);
  for (dist.iterations = 1; dist.iterations <= options.max_iterations; ++dist.iterations) {
    detail::chain_step(table, probs, dist.rho, next);
    double change = 0.0;
    for (std::size_t X = 0; X < L; ++X) {
      const double lazy = 0.5 * (next[X] + dist.rho[X]);
      next[X] = (1.0 - options.restart) * lazy + options.restart / static_cast<double>(L);
      change += std::abs(next[X] - dist.rho[X]);
    }
    dist.rho.swap(next);
    if (change < options.tolerance) return dist;
  }
  detail::fail(ErrorCode::kNumerical, "stationary distribution did not converge");
}

// L1 distance between rho and rho * P.
inline double fixed_point_residual(const EncodingTable& table, std::span<const double> probs,
                                   const StateDistribution& dist) {
  std::vector<double> next(dist.rho.size());
  detail::chain_step(table, probs, dist.rho, next);
  double residual = 0.0;
  for (std::size_t X = 0; X < next.size(); ++X) residual += std::abs(next[X] - dist.rho[X]);
  return residual;
}

// H' = sum_x rho_x sum_s p_s nbBits(x, s).
inline double expected_rate(const EncodingTable& table, std::span<const double> probs,
                            const StateDistribution& dist) {
  detail::check_probs(table, probs);
  const unsigned R = table.radix_log();
  double rate = 0.0;
  for (std::uint32_t X = 0; X < dist.rho.size(); ++X)
    for (std::size_t s = 0; s < probs.size(); ++s)
      rate += dist.rho[X] * probs[s] * table.nb_bits(X + (1u << R), static_cast<Symbol>(s));
  return rate;
}

inline double expected_rate(const EncodingTable& table, std::span<const double> probs) {
  return expected_rate(table, probs, stationary_distribution(table, probs));
}

// Expected bits/symbol above the source entropy.
inline double redundancy(const EncodingTable& table, std::span<const double> probs) {
  return expected_rate(table, probs) - shannon_entropy(probs);
}

// Histogram of the states seen before each encoding step, normalized.
inline std::vector<double> empirical_state_distribution(const EncodingTable& table,
                                                        std::span<const Symbol> symbols,
                                                        CoderState initial) {
  const unsigned R = table.radix_log();
  std::vector<double> hist(table.table_size(), 0.0);
  CoderState state = initial;
  for (Symbol s : symbols) {
    hist[state.index(R)] += 1.0;
    state = encode_step(state, s, table).state;
  }
  if (!symbols.empty())
    for (auto& h : hist) h /= static_cast<double>(symbols.size());
  return hist;
}

inline double total_variation(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), ErrorCode::kInvalidInput, "size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

inline double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size() && a.size() >= 2, ErrorCode::kInvalidInput,
                  "need two equal-length samples");
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - mean_a) * (b[i] - mean_b);
    var_a += (a[i] - mean_a) * (a[i] - mean_a);
    var_b += (b[i] - mean_b) * (b[i] - mean_b);
  }
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  return cov / std::sqrt(var_a * var_b);
}

// Normalized Pr(x) proportional to 1/x over x in I, indexed by X = x - L.
inline std::vector<double> inverse_law(std::size_t table_size) {
  std::vector<double> law(table_size);
  double sum = 0.0;
  for (std::size_t X = 0; X < table_size; ++X) sum += law[X] = 1.0 / double(table_size + X);
  for (auto& v : law) v /= sum;
  return law;
}

inline double inverse_law_fit(std::span<const double> rho) {
  const auto law = inverse_law(rho.size());
  return pearson_correlation(rho, law);
}

// ---------------------------------------------------------------------------
// Key-space sizes

// log2 of the multinomial L! / prod L_s!, the number of distinct spreads.
inline double spread_count_log2(const FrequencyTable& freq) {
  double ln = std::lgamma(double(freq.table_size()) + 1.0);
  for (auto f : freq.freqs()) ln -= std::lgamma(double(f) + 1.0);
  return ln / std::numbers::ln2;
}

// One dominant symbol, all others with L_s = 1: L! / (L - m + 1)! spreads.
inline double ddp_spread_count_log10(std::size_t table_size, std::size_t alphabet_size) {
  const double L = double(table_size);
  const double m = double(alphabet_size);
  return (std::lgamma(L + 1.0) - std::lgamma(L - m + 2.0)) / std::numbers::ln10;
}

// B^(L/B) block rotations.
inline double perturbation_count_log10(std::size_t table_size, std::size_t block) {
  return double(table_size / block) * std::log10(double(block));
}

// Fraction of blocks holding only the dominant symbol, ((L - m + 1) / L)^B.
inline double ddp_unchanged_fraction(std::size_t table_size, std::size_t alphabet_size,
                                     std::size_t block) {
  const double L = double(table_size);
  return std::pow((L - double(alphabet_size) + 1.0) / L, double(block));
}

// Rotations that actually change a block: B^((1 - unchanged) L / B).
inline double ddp_perturbation_count_log10(std::size_t table_size, std::size_t alphabet_size,
                                           std::size_t block) {
  return (1.0 - ddp_unchanged_fraction(table_size, alphabet_size, block)) *
         perturbation_count_log10(table_size, block);
}

// ---------------------------------------------------------------------------
// Bit statistics

inline double bit_balance(const BitPayload& payload) {
  if (payload.bit_length == 0) return 0.0;
  std::uint64_t zeros = 0;
  for (std::uint64_t i = 0; i < payload.bit_length; ++i) zeros += !payload.bit(i);
  return double(zeros) / double(payload.bit_length);
}

// Frequencies of the 2^k patterns over non-overlapping k-bit windows, each
// read most significant bit first.
inline std::vector<double> pattern_frequencies(const BitPayload& payload, unsigned k) {
  detail::require(k >= 1 && k <= 20, ErrorCode::kInvalidInput, "pattern width in [1, 20]");
  std::vector<double> freq(std::size_t{1} << k, 0.0);
  const std::uint64_t windows = payload.bit_length / k;
  for (std::uint64_t w = 0; w < windows; ++w) {
    std::size_t value = 0;
    for (unsigned i = 0; i < k; ++i) value = (value << 1) | payload.bit(w * k + i);
    freq[value] += 1.0;
  }
  if (windows > 0)
    for (auto& f : freq) f /= double(windows);
  return freq;
}

// Largest |frequency - 2^-k| over all k-bit patterns.
inline double pattern_balance(const BitPayload& payload, unsigned k) {
  const auto freq = pattern_frequencies(payload, k);
  const double expected = std::ldexp(1.0, -static_cast<int>(k));
  double worst = 0.0;
  for (double f : freq) worst = std::max(worst, std::abs(f - expected));
  return worst;
}

// Fraction of differing bits over the common prefix of two streams.
inline double hamming_fraction(const BitPayload& a, const BitPayload& b) {
  const std::uint64_t n = std::min(a.bit_length, b.bit_length);
  if (n == 0) return 0.0;
  std::uint64_t diff = 0;
  for (std::uint64_t i = 0; i < n; ++i) diff += a.bit(i) != b.bit(i);
  return double(diff) / double(n);
}

inline BitPayload concatenate(std::span<const BitPayload> parts) {
  BitWriter writer;
  for (const auto& part : parts)
    for (std::uint64_t i = 0; i < part.bit_length; ++i) writer.write_bit(part.bit(i));
  return std::move(writer).finish();
}

// ---------------------------------------------------------------------------
// Avalanche and completeness

struct CipherSetup {
  unsigned radix_log = 11;
  std::uint32_t block_size = kDefaultBlockSize;
  std::size_t alphabet_size = 256;
  bool whitening = false;  // avalanche only
};

struct AvalancheResult {
  double mean = 0.0;
  std::vector<double> trials;
};

// Flips one random key bit per trial and compares the two payloads produced
// from the same plaintext, salt, frame index and initial state over their
// common prefix.
inline AvalancheResult avalanche_test(const Key& key, std::span<const Symbol> plaintext,
                                      std::size_t trials, const CipherSetup& setup,
                                      std::uint64_t seed) {
  detail::require(trials >= 1, ErrorCode::kInvalidInput, "need at least one trial");
  std::mt19937_64 rng(seed);
  const Salt salt = random_salt(rng);
  FrameParams params{setup.radix_log, setup.block_size, setup.alphabet_size, setup.whitening, {}};

  AvalancheResult result;
  for (std::size_t t = 0; t < trials; ++t) {
    const CoderState initial = random_initial_state(setup.radix_log, rng);
    const std::size_t bit = std::uniform_int_distribution<std::size_t>(0, 255)(rng);
    Key flipped = key;
    flipped[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));

    params.key = KeyMaterial{key, salt, 0};
    const Frame a = encrypt_frame(plaintext, params, 0, initial, {});
    params.key = KeyMaterial{flipped, salt, 0};
    const Frame b = encrypt_frame(plaintext, params, 0, initial, {});
    result.trials.push_back(hamming_fraction(a.payload, b.payload));
  }
  for (double v : result.trials) result.mean += v;
  result.mean /= double(trials);
  return result;
}

struct CompletenessResult {
  // profile[i]: fraction of trials whose streams differ at offset i after the
  // change point (over trials where both streams reach that offset).
  std::vector<double> profile;
  std::vector<std::size_t> profile_samples;
  // Differing fraction over all compared bits at offsets >= skip.
  double beyond_fraction = 0.0;
  std::uint64_t beyond_bits = 0;
  unsigned skip = 0;
  // Whether the bits emitted before the changed symbol were identical in
  // every trial.
  bool prefix_identical = true;
};

namespace detail {

inline void emit_bits(std::vector<std::uint8_t>& out, const EncodedStep& step) {
  for (unsigned i = 0; i < step.nb_bits; ++i) out.push_back((step.bits >> i) & 1u);
}

// Emission in encoder order (the payload before its final reversal).
inline std::vector<std::uint8_t> emission(std::span<const Symbol> symbols,
                                          const EncodingTable& table, CoderState state,
                                          std::size_t* bits_before, std::size_t change_at) {
  std::vector<std::uint8_t> bits;
  for (std::size_t i = symbols.size(); i-- > 0;) {
    if (i == change_at) *bits_before = bits.size();
    const EncodedStep step = encode_step(state, symbols[i], table);
    emit_bits(bits, step);
    state = step.state;
  }
  return bits;
}

}  // namespace detail

// Changes one plaintext symbol per trial and compares the encoder's emitted
// bits from the change point on. Both streams use the same keyed tables and
// initial state. Offsets are counted in encoder emission order, where the
// bits before the change come from identical symbols and states.
inline CompletenessResult completeness_test(std::span<const Symbol> plaintext,
                                            std::size_t trials, const CipherSetup& setup,
                                            const Key& key, std::uint64_t seed,
                                            std::size_t profile_length = 256) {
  detail::require(!plaintext.empty() && trials >= 1, ErrorCode::kInvalidInput,
                  "need a plaintext and at least one trial");
  std::mt19937_64 rng(seed);
  const auto counts = histogram(plaintext, setup.alphabet_size);
  const FrequencyTable freq = quantize_frequencies(counts, setup.radix_log);
  Keystream stream(KeyMaterial{key, random_salt(rng), 0});
  const EncodingTable table =
      build_encoding_table(keyed_spread(freq, stream, setup.block_size), freq);
  std::discrete_distribution<std::size_t> replacement(counts.begin(), counts.end());

  CompletenessResult result;
  result.skip = 2 * setup.radix_log;
  result.profile.assign(profile_length, 0.0);
  result.profile_samples.assign(profile_length, 0);
  std::uint64_t beyond_diff = 0;

  std::vector<Symbol> modified(plaintext.begin(), plaintext.end());
  for (std::size_t t = 0; t < trials; ++t) {
    const CoderState initial = random_initial_state(setup.radix_log, rng);
    const std::size_t at =
        std::uniform_int_distribution<std::size_t>(plaintext.size() / 2, plaintext.size() - 1)(rng);
    Symbol other = plaintext[at];
    if (setup.alphabet_size > 1)
      while (other == plaintext[at]) other = static_cast<Symbol>(replacement(rng));
    modified[at] = other;

    std::size_t before_a = 0, before_b = 0;
    const auto a = detail::emission(plaintext, table, initial, &before_a, at);
    const auto b = detail::emission(modified, table, initial, &before_b, at);
    modified[at] = plaintext[at];

    if (before_a != before_b || !std::equal(a.begin(), a.begin() + before_a, b.begin()))
      result.prefix_identical = false;
    const std::size_t n = std::min(a.size(), b.size()) - before_a;
    for (std::size_t i = 0; i < n; ++i) {
      const bool differs = a[before_a + i] != b[before_a + i];
      if (i < profile_length) {
        result.profile[i] += differs;
        ++result.profile_samples[i];
      }
      if (i >= result.skip) {
        beyond_diff += differs;
        ++result.beyond_bits;
      }
    }
  }
  for (std::size_t i = 0; i < profile_length; ++i)
    if (result.profile_samples[i] > 0) result.profile[i] /= double(result.profile_samples[i]);
  if (result.beyond_bits > 0) result.beyond_fraction = double(beyond_diff) / double(result.beyond_bits);
  return result;
}

// ---------------------------------------------------------------------------
// Nonlinearity (small tables only)

// Hamming distance from a Boolean function to the nearest affine function
// a.v ^ c, by exhaustive search. `inputs[i]` is the input vector of sample i
// (input_bits wide) and `outputs[i]` its value.
inline std::size_t affine_distance(std::span<const std::uint32_t> inputs,
                                   std::span<const std::uint8_t> outputs, unsigned input_bits) {
  detail::require(inputs.size() == outputs.size(), ErrorCode::kInvalidInput, "size mismatch");
  detail::require(input_bits <= 16, ErrorCode::kCapacity, "too many input bits");
  std::size_t best = inputs.size();
  for (std::uint32_t a = 0; a < (1u << input_bits); ++a) {
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
      mismatches += (std::popcount(a & inputs[i]) & 1) != outputs[i];
    best = std::min({best, mismatches, inputs.size() - mismatches});  // c = 0 or 1
  }
  return best;
}

// Affine distance of every output bit of the encoder's state transition
// (X, s) -> X'. Inputs are the R bits of X followed by ceil(lg m) bits of s.
inline std::vector<std::size_t> transition_nonlinearity(const EncodingTable& table) {
  const unsigned R = table.radix_log();
  const std::size_t m = table.alphabet_size();
  const unsigned symbol_bits = m > 1 ? static_cast<unsigned>(std::bit_width(m - 1)) : 0;
  detail::require(R + symbol_bits <= 16, ErrorCode::kCapacity, "table too large");
  std::vector<std::uint32_t> inputs;
  std::vector<std::uint32_t> next;
  for (std::uint32_t X = 0; X < table.table_size(); ++X)
    for (std::size_t s = 0; s < m; ++s) {
      inputs.push_back(X | static_cast<std::uint32_t>(s << R));
      next.push_back(encode_step(CoderState::from_index(X, R), static_cast<Symbol>(s), table)
                         .state.index(R));
    }
  std::vector<std::size_t> distances;
  for (unsigned bit = 0; bit < R; ++bit) {
    std::vector<std::uint8_t> outputs(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) outputs[i] = (next[i] >> bit) & 1u;
    distances.push_back(affine_distance(inputs, outputs, R + symbol_bits));
  }
  return distances;
}

// ---------------------------------------------------------------------------
// CSV output

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  void write(std::ostream& out) const {
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    };
    line(header);
    for (const auto& row : rows) line(row);
  }
};

inline std::string format_number(double value, int precision = 6) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", precision, value);
  return buffer;
}

}  // namespace anse
