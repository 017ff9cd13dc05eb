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

#include <bit>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "anse/crypto.hpp"
#include "oracles.hpp"

namespace anse {
namespace {

std::string Hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

KeyMaterial Material(std::uint64_t frame = 0) {
  KeyMaterial m;
  for (std::size_t i = 0; i < 32; ++i) m.key[i] = static_cast<std::uint8_t>(i);
  for (std::size_t i = 0; i < 8; ++i) m.salt[i] = static_cast<std::uint8_t>(100 + i);
  m.frame_index = frame;
  return m;
}

TEST(DeriveSeed, KnownAnswer) {
  // Reference value from an independent SHA-256 over key || salt || be64(5).
  EXPECT_EQ(Hex(derive_seed(Material(5))),
            "f3f51b9a53fde56335d77aee89e0fba86c1d8509d093ba1300702b67218b0ec1");
}

TEST(DeriveSeed, DeterministicAndFrameSensitive) {
  EXPECT_EQ(derive_seed(Material(0)), derive_seed(Material(0)));
  EXPECT_NE(derive_seed(Material(0)), derive_seed(Material(1)));
  auto other = Material(0);
  other.salt[7] ^= 1;
  EXPECT_NE(derive_seed(Material(0)), derive_seed(other));
}

TEST(Keystream, ChaCha20ZeroKeyVector) {
  // ChaCha20 block function, all-zero key and nonce, counter 0.
  Keystream stream(Seed{});
  EXPECT_EQ(Hex(stream.take(64)),
            "76b8e0ada0f13d90405d6ae55386bd28bdd219b8a08ded1aa836efcc8b770dc7"
            "da41597c5157488d7724e03fb8d84a376a43b8f41518a11cc387b669b2ee6586");
  EXPECT_EQ(stream.consumed(), 64u);
}

TEST(Keystream, ChunkingDoesNotMatter) {
  Keystream a(Material()), b(Material());
  const auto whole = a.take(1000);
  std::vector<std::uint8_t> pieces;
  for (std::size_t n : {1u, 255u, 256u, 7u, 481u}) {
    const auto part = b.take(n);
    pieces.insert(pieces.end(), part.begin(), part.end());
  }
  EXPECT_EQ(whole, pieces);
}

TEST(KeyedSpread, DeterministicAndConsistent) {
  const FrequencyTable freq(11, std::vector<std::uint32_t>(256, 8));
  const auto a = keyed_spread(freq, Material());
  EXPECT_EQ(a, keyed_spread(freq, Material()));
  EXPECT_TRUE(consistent(a, freq));
  Keystream stream(Material());
  const auto shifts = stream.take(256);
  EXPECT_EQ(a, perturb_spread(fast_spread(freq), 8, shifts));
}

TEST(KeyedSpread, SingleKeyBitChangesSpread) {
  std::mt19937_64 rng(3);
  std::vector<double> p = {0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05, 0.05};
  std::vector<std::uint64_t> counts;
  for (double v : p) counts.push_back(static_cast<std::uint64_t>(v * 1e6));
  const auto freq = quantize_frequencies(counts, 11);
  for (int trial = 0; trial < 1000; ++trial) {
    KeyMaterial a;
    for (auto& b : a.key) b = static_cast<std::uint8_t>(rng());
    KeyMaterial b = a;
    const std::size_t bit = rng() % 256;
    b.key[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    ASSERT_NE(keyed_spread(freq, a), keyed_spread(freq, b));
  }
}

TEST(KeyedSpread, DegenerateBlocksUnchangedFraction) {
  // One dominant symbol and 255 singletons: a block can only change under
  // rotation if it holds a singleton. With the singletons placed at random
  // the all-dominant fraction is close to ((L - m + 1) / L)^B = 0.345.
  std::vector<std::uint32_t> f(256, 1);
  f[0] = 2048 - 255;
  const auto count_uniform = [](const std::vector<Symbol>& spread) {
    std::size_t uniform = 0;
    for (std::size_t b = 0; b < 256; ++b) {
      bool same = true;
      for (std::size_t i = 0; i < 8; ++i) same = same && spread[8 * b + i] == 0;
      uniform += same;
    }
    return uniform;
  };
  std::mt19937_64 rng(5);
  double total = 0.0;
  for (int trial = 0; trial < 400; ++trial)
    total += double(count_uniform(oracle::random_spread(f, rng))) / 256.0;
  EXPECT_NEAR(total / 400.0, 0.345, 0.005);

  // The fast spread scatters the singletons far more evenly.
  const auto fast = fast_spread(FrequencyTable(11, f));
  EXPECT_EQ(count_uniform(fast.symbols), 22u);
}

TEST(MaskState, Examples) {
  const std::uint8_t full[] = {0xff, 0x07};
  EXPECT_EQ(mask_state(0x5a3, 11, full), 0x25cu);
  const std::uint8_t zero[] = {0, 0};
  EXPECT_EQ(mask_state(0x5a3, 11, zero), 0x5a3u);
  const std::uint8_t bytes[] = {0x3c, 0xa9};
  EXPECT_EQ(mask_state(mask_state(0x123, 11, bytes), 11, bytes), 0x123u);
  EXPECT_THROW(mask_state(0x123, 11, std::span<const std::uint8_t>(bytes, 1)), Error);
}

TEST(RandomState, InRangeFromSystemEntropy) {
  SystemEntropy rng;
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(random_initial_state(11, rng).valid(11));
}

TEST(RandomState, ChiSquaredUniform) {
  std::mt19937_64 rng(17);
  const unsigned R = 6;
  std::vector<double> bins(64, 0.0);
  for (int i = 0; i < 10000; ++i) bins[random_initial_state(R, rng).index(R)] += 1.0;
  double chi2 = 0.0;
  const double expected = 10000.0 / 64.0;
  for (double b : bins) chi2 += (b - expected) * (b - expected) / expected;
  EXPECT_LT(chi2, 92.01);  // chi-squared quantile 0.99 at 63 degrees of freedom
}

TEST(PrefixPad, Behaviour) {
  std::mt19937_64 rng(1);
  const std::vector<Symbol> msg = {5, 6, 7};
  EXPECT_EQ(prefix_pad(msg, 0, 256, rng), msg);
  const auto padded = prefix_pad(msg, 4, 3, rng);
  ASSERT_EQ(padded.size(), 7u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(padded[i], 3);
  EXPECT_EQ(std::vector<Symbol>(padded.begin() + 4, padded.end()), msg);
}

TEST(Whitening, MasksBalanced) {
  Keystream stream(Material());
  const auto masks = whitening_masks(stream, 200);
  for (auto m : masks) EXPECT_EQ(std::popcount(m), 32);
  EXPECT_NE(masks[0], masks[1]);
  EXPECT_THROW(whitening_masks(stream, 0), Error);
}

TEST(Whitening, InvolutionAndBalance) {
  Keystream stream(Material());
  const auto masks = whitening_masks(stream, kWhiteningMaskCount);
  std::vector<std::uint8_t> zeros(8 * 40, 0);
  auto w = zeros;
  apply_whitening(w, masks);
  std::size_t ones = 0;
  for (auto b : w) ones += static_cast<std::size_t>(std::popcount(b));
  EXPECT_EQ(ones * 2, w.size() * 8);
  apply_whitening(w, masks);
  EXPECT_EQ(w, zeros);
}

TEST(Whitening, ShuffleMatchesReference) {
  // Fisher-Yates with rejection written out against the raw keystream.
  Keystream a(Material(3)), b(Material(3));
  const auto mask = whitening_masks(a, 1)[0];
  std::vector<int> bits(64, 0);
  for (int p = 0; p < 32; ++p) bits[p] = 1;
  for (int i = 63; i >= 1; --i) {
    int v;
    do v = b.next_byte(); while (v >= 256 - 256 % (i + 1));
    std::swap(bits[i], bits[v % (i + 1)]);
  }
  std::uint64_t expect = 0;
  for (int p = 0; p < 64; ++p) expect |= std::uint64_t(bits[p]) << p;
  EXPECT_EQ(mask, expect);
  EXPECT_EQ(a.consumed(), b.consumed());
}

}  // namespace
}  // namespace anse
