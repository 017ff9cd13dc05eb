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

#include <functional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "anse/container.hpp"

namespace anse {
namespace {

using Bytes = std::vector<std::uint8_t>;

Key TestKey(std::uint8_t base = 1) {
  Key k{};
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(base + 3 * i);
  return k;
}

Bytes RandomBytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

Bytes SkewedBytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<int> dist(0.3);
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(std::min(dist(rng), 255));
  return out;
}

CompressOptions Seeded(std::uint64_t seed = 1) {
  CompressOptions o;
  o.deterministic_seed = seed;
  return o;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kNumerical;
}

TEST(ContainerFormat, HeaderLayout) {
  Container c;
  c.header.encrypted = true;
  c.header.whitened = true;
  c.header.radix_log = 2;
  c.header.block_log2 = 1;
  c.header.alphabet_size = 2;
  c.header.salt = {1, 2, 3, 4, 5, 6, 7, 8};
  c.header.frame_count = 1;
  Frame f;
  f.frame_index = 0;
  f.symbol_count = 3;
  f.prefix_count = 1;
  f.masked_final_state = 2;
  f.freqs = {3, 1};
  f.payload.bytes = {0x05};
  f.payload.bit_length = 3;
  c.frames.push_back(f);
  const Bytes expected = {'A', 'N', 'S', 'E', 1, 3, 2, 1, 2, 0, 1, 2, 3, 4, 5, 6, 7, 8,
                          1, 0, 0, 0, 0, 0, 0, 0,
                          0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 1, 2, 0, 3, 0, 0, 0,
                          3, 0, 1, 0, 0x05};
  EXPECT_EQ(write_container(c), expected);
  EXPECT_EQ(read_container(expected), c);
}

TEST(ContainerFormat, ReadErrors) {
  const Bytes good = compress_encrypt_bytes(SkewedBytes(3000, 1), TestKey(), Seeded());
  auto bad_magic = good;
  bad_magic[0] ^= 1;
  EXPECT_EQ(CodeOf([&] { read_container(bad_magic); }), ErrorCode::kFormat);
  auto bad_version = good;
  bad_version[4] = 9;
  EXPECT_EQ(CodeOf([&] { read_container(bad_version); }), ErrorCode::kFormat);
  auto bad_flags = good;
  bad_flags[5] |= 0x80;
  EXPECT_EQ(CodeOf([&] { read_container(bad_flags); }), ErrorCode::kCorruptContainer);
  auto bad_r = good;
  bad_r[6] = 16;
  EXPECT_EQ(CodeOf([&] { read_container(bad_r); }), ErrorCode::kCorruptContainer);
  // First frequency of the first frame.
  auto bad_sum = good;
  bad_sum[kContainerHeaderSize + 23] ^= 1;
  EXPECT_EQ(CodeOf([&] { read_container(bad_sum); }), ErrorCode::kCorruptContainer);
  const Bytes truncated(good.begin(), good.end() - 1);
  EXPECT_EQ(CodeOf([&] { read_container(truncated); }), ErrorCode::kTruncatedStream);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(CodeOf([&] { read_container(trailing); }), ErrorCode::kCorruptContainer);
  EXPECT_EQ(read_container(good), read_container(good));
}

TEST(ContainerRoundtrip, MegabyteRandomAndSkewed) {
  for (const Bytes& input : {RandomBytes(1 << 20, 2), SkewedBytes(1 << 20, 3)}) {
    CompressOptions o;
    o.threads = 4;
    const auto packed = compress_encrypt_bytes(input, TestKey(), o);
    EXPECT_EQ(decrypt_decompress_bytes(packed, TestKey(), 4), input);
  }
}

TEST(ContainerRoundtrip, SkewedInputCompresses) {
  const Bytes input = SkewedBytes(200000, 4);
  const auto packed = compress_encrypt_bytes(input, TestKey(), Seeded());
  EXPECT_LT(packed.size(), input.size() / 2);
}

TEST(ContainerRoundtrip, PlainCompression) {
  const Bytes input = SkewedBytes(50000, 5);
  const auto packed = compress_encrypt_bytes(input, std::nullopt, Seeded());
  EXPECT_FALSE(read_container(packed).header.encrypted);
  EXPECT_EQ(decrypt_decompress_bytes(packed, std::nullopt), input);
  // A key is ignored for unencrypted containers by the CLI, but the library
  // only needs one when the header says so.
  EXPECT_EQ(decrypt_decompress_bytes(packed, TestKey()), input);
}

TEST(ContainerRoundtrip, EdgeCases) {
  EXPECT_EQ(decrypt_decompress_bytes(compress_encrypt_bytes({}, TestKey(), Seeded()), TestKey()),
            Bytes{});
  CompressOptions single = Seeded();
  single.alphabet_size = 1;
  const Bytes zeros(1000, 0);
  EXPECT_EQ(decrypt_decompress_bytes(compress_encrypt_bytes(zeros, TestKey(), single), TestKey()),
            zeros);
  const Bytes one = {42};
  EXPECT_EQ(decrypt_decompress_bytes(compress_encrypt_bytes(one, TestKey(), Seeded()), TestKey()),
            one);
}

TEST(ContainerRoundtrip, OptionCombinations) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    CompressOptions o = Seeded(rng());
    o.radix_log = 8 + rng() % 8;
    o.alphabet_size = static_cast<std::uint16_t>(1 + rng() % 256);
    o.block_size = 1u << (rng() % 6);
    o.frame_size = 1 + rng() % 3000;
    o.prefix_symbols = static_cast<unsigned>(rng() % 9);
    const bool encrypt = rng() % 4 != 0;
    o.whitening = encrypt && rng() % 2;
    o.threads = 1 + rng() % 3;
    Bytes input(rng() % 6000);
    for (auto& b : input) b = static_cast<std::uint8_t>(rng() % o.alphabet_size);
    const std::optional<Key> key = encrypt ? std::optional<Key>(TestKey(static_cast<std::uint8_t>(trial))) : std::nullopt;
    const auto packed = compress_encrypt_bytes(input, key, o);
    ASSERT_EQ(decrypt_decompress_bytes(packed, key), input) << "trial " << trial;
  }
}

TEST(ContainerBehaviour, SaltChangesPayload) {
  const Bytes input = SkewedBytes(20000, 7);
  CompressOptions a = Seeded(1), b = Seeded(1);
  a.salt = Salt{1};
  b.salt = Salt{2};
  const auto ca = compress_encrypt(input, TestKey(), a);
  const auto cb = compress_encrypt(input, TestKey(), b);
  EXPECT_NE(ca.frames[0].payload, cb.frames[0].payload);
}

TEST(ContainerBehaviour, SystemEntropySaltsDiffer) {
  const Bytes input = SkewedBytes(5000, 8);
  const auto ca = compress_encrypt(input, TestKey());
  const auto cb = compress_encrypt(input, TestKey());
  EXPECT_NE(ca.header.salt, cb.header.salt);
  EXPECT_EQ(decrypt_decompress(ca, TestKey()), input);
}

TEST(ContainerBehaviour, WrongKeyGivesGarbageNotError) {
  const Bytes input = SkewedBytes(30000, 9);
  const auto packed = compress_encrypt_bytes(input, TestKey(1), Seeded());
  Bytes out;
  ASSERT_NO_THROW(out = decrypt_decompress_bytes(packed, TestKey(2)));
  EXPECT_EQ(out.size(), input.size());
  EXPECT_NE(out, input);
}

TEST(ContainerBehaviour, MissingKeyForEncryptedContainer) {
  const auto packed = compress_encrypt_bytes(SkewedBytes(100, 1), TestKey(), Seeded());
  EXPECT_EQ(CodeOf([&] { decrypt_decompress_bytes(packed, std::nullopt); }),
            ErrorCode::kInvalidInput);
  CompressOptions whiten = Seeded();
  whiten.whitening = true;
  EXPECT_EQ(CodeOf([&] { compress_encrypt(Bytes{1, 2}, std::nullopt, whiten); }),
            ErrorCode::kInvalidInput);
}

TEST(ContainerBehaviour, FramesDecodeIndependently) {
  const Bytes input = SkewedBytes(50000, 10);
  CompressOptions o = Seeded();
  o.frame_size = 10240;
  const auto c = compress_encrypt(input, TestKey(), o);
  ASSERT_EQ(c.frames.size(), 5u);
  const auto third = decrypt_frame_bytes(c.header, c.frames[3], TestKey());
  EXPECT_EQ(third, Bytes(input.begin() + 3 * 10240, input.begin() + 4 * 10240));
}

TEST(ContainerBehaviour, DeterministicAcrossThreadCounts) {
  const Bytes input = SkewedBytes(100000, 11);
  CompressOptions o = Seeded(77);
  o.whitening = true;
  o.threads = 1;
  const auto one = compress_encrypt_bytes(input, TestKey(), o);
  o.threads = 8;
  EXPECT_EQ(compress_encrypt_bytes(input, TestKey(), o), one);
  EXPECT_EQ(compress_encrypt_bytes(input, TestKey(), o), one);
}

TEST(ContainerBehaviour, CorruptPlainPayloadDetected) {
  const Bytes input = SkewedBytes(5000, 12);
  auto c = compress_encrypt(input, std::nullopt, Seeded());
  c.frames[0].payload.bit_length -= 5;
  c.frames[0].payload.bytes.resize(bytes_for_bits(c.frames[0].payload.bit_length));
  const ErrorCode code = CodeOf([&] { decrypt_decompress(c, std::nullopt); });
  EXPECT_TRUE(code == ErrorCode::kTruncatedStream || code == ErrorCode::kCorruptContainer);
}

TEST(ContainerBehaviour, OptionValidation) {
  CompressOptions o = Seeded();
  o.radix_log = 16;
  EXPECT_THROW(compress_encrypt(Bytes{1}, TestKey(), o), Error);
  o = Seeded();
  o.block_size = 3;
  EXPECT_THROW(compress_encrypt(Bytes{1}, TestKey(), o), Error);
  o = Seeded();
  o.alphabet_size = 4;
  EXPECT_THROW(compress_encrypt(Bytes{9}, TestKey(), o), Error);
  o = Seeded();
  o.radix_log = 7;
  EXPECT_EQ(CodeOf([&] { compress_encrypt(Bytes{1}, TestKey(), o); }), ErrorCode::kCapacity);
}

}  // namespace
}  // namespace anse
