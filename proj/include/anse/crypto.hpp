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

// Keyed table perturbation and the supporting keystream.
//
// Keystream for one frame:
//   seed   = SHA-256(key[32] || salt[8] || frame_index as 8 big-endian bytes)
//   stream = ChaCha20(key = seed, nonce = 0^96, initial counter = 0)
//
// A frame consumes the stream in this order: one byte per spread block (the
// block rotation), ceil(R/8) bytes for the final-state mask, then the bytes
// used to shuffle the whitening masks when whitening is enabled.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include "anse/codec.hpp"
#include "anse/error.hpp"
#include "anse/spread.hpp"

namespace anse {

using Key = std::array<std::uint8_t, 32>;
using Salt = std::array<std::uint8_t, 8>;
using Seed = std::array<std::uint8_t, 32>;

struct KeyMaterial {
  Key key{};
  Salt salt{};
  std::uint64_t frame_index = 0;
};

inline Seed derive_seed(const KeyMaterial& material) {
  std::array<std::uint8_t, 48> message{};
  std::copy(material.key.begin(), material.key.end(), message.begin());
  std::copy(material.salt.begin(), material.salt.end(), message.begin() + 32);
  for (int i = 0; i < 8; ++i)
    message[40 + i] = static_cast<std::uint8_t>(material.frame_index >> (56 - 8 * i));

  Seed seed{};
  unsigned int length = 0;
  if (EVP_Digest(message.data(), message.size(), seed.data(), &length, EVP_sha256(),
                 nullptr) != 1 ||
      length != seed.size())
    throw std::runtime_error("SHA-256 failed");
  return seed;
}

// ChaCha20 keystream with an all-zero nonce, starting at block counter 0.
// Single consumer; not thread-safe.
class Keystream {
 public:
  explicit Keystream(const Seed& seed) : ctx_(EVP_CIPHER_CTX_new()) {
    if (!ctx_) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    // OpenSSL's ChaCha20 IV is the 32-bit counter followed by the 96-bit nonce.
    const std::array<std::uint8_t, 16> iv{};
    if (EVP_EncryptInit_ex(ctx_.get(), EVP_chacha20(), nullptr, seed.data(), iv.data()) != 1)
      throw std::runtime_error("ChaCha20 init failed");
  }

  explicit Keystream(const KeyMaterial& material) : Keystream(derive_seed(material)) {}

  std::uint8_t next_byte() {
    if (cursor_ == buffer_.size()) refill();
    ++consumed_;
    return buffer_[cursor_++];
  }

  void fill(std::span<std::uint8_t> out) {
    for (auto& b : out) b = next_byte();
  }

  std::vector<std::uint8_t> take(std::size_t n) {
    std::vector<std::uint8_t> out(n);
    fill(out);
    return out;
  }

  std::uint64_t consumed() const noexcept { return consumed_; }

 private:
  struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
  };

  void refill() {
    const std::array<std::uint8_t, 256> zeros{};
    int produced = 0;
    if (EVP_EncryptUpdate(ctx_.get(), buffer_.data(), &produced, zeros.data(),
                          static_cast<int>(zeros.size())) != 1 ||
        produced != static_cast<int>(buffer_.size()))
      throw std::runtime_error("ChaCha20 keystream failed");
    cursor_ = 0;
  }

  std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter> ctx_;
  std::array<std::uint8_t, 256> buffer_{};
  std::size_t cursor_ = buffer_.size();
  std::uint64_t consumed_ = 0;
};

// Fast spread followed by a keyed rotation of every B-slot block; one
// keystream byte per block.
inline SymbolSpread keyed_spread(const FrequencyTable& freq, Keystream& stream,
                                 std::size_t block = kDefaultBlockSize) {
  detail::require(block >= 1 && freq.table_size() % block == 0, ErrorCode::kInvalidInput,
                  "block size must divide the table size");
  const auto shifts = stream.take(freq.table_size() / block);
  return perturb_spread(fast_spread(freq), block, shifts);
}

inline SymbolSpread keyed_spread(const FrequencyTable& freq, const KeyMaterial& material,
                                 std::size_t block = kDefaultBlockSize) {
  Keystream stream(material);
  return keyed_spread(freq, stream, block);
}

// XORs the R-bit table index with ceil(R/8) mask bytes (little-endian,
// truncated to R bits). Applying it twice with the same bytes is the identity.
inline std::uint32_t mask_state(std::uint32_t X, unsigned radix_log,
                                std::span<const std::uint8_t> mask_bytes) {
  const std::size_t needed = (radix_log + 7) / 8;
  detail::require(mask_bytes.size() >= needed, ErrorCode::kInvalidInput,
                  "not enough mask bytes");
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < needed; ++i) mask |= std::uint32_t{mask_bytes[i]} << (8 * i);
  return (X ^ mask) & ((1u << radix_log) - 1);
}

inline std::uint32_t mask_state(std::uint32_t X, unsigned radix_log, Keystream& stream) {
  const auto bytes = stream.take((radix_log + 7) / 8);
  return mask_state(X, radix_log, bytes);
}

// UniformRandomBitGenerator over the operating system CSPRNG.
class SystemEntropy {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    result_type value = 0;
    if (RAND_bytes(reinterpret_cast<unsigned char*>(&value), sizeof(value)) != 1)
      throw std::runtime_error("system entropy source failed");
    return value;
  }
};

template <class Rng>
Salt random_salt(Rng& rng) {
  Salt salt{};
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& b : salt) b = static_cast<std::uint8_t>(byte(rng));
  return salt;
}

// Uniform over I.
template <class Rng>
CoderState random_initial_state(unsigned radix_log, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(1u << radix_log, (2u << radix_log) - 1);
  return CoderState{dist(rng)};
}

// Prepends n_rand symbols drawn uniformly from the alphabet; the decoder drops
// them again.
template <class Rng>
std::vector<Symbol> prefix_pad(std::span<const Symbol> symbols, std::size_t n_rand,
                               std::size_t alphabet_size, Rng& rng) {
  detail::require(alphabet_size >= 1, ErrorCode::kInvalidInput, "empty alphabet");
  std::uniform_int_distribution<std::size_t> dist(0, alphabet_size - 1);
  std::vector<Symbol> out;
  out.reserve(n_rand + symbols.size());
  for (std::size_t i = 0; i < n_rand; ++i) out.push_back(static_cast<Symbol>(dist(rng)));
  out.insert(out.end(), symbols.begin(), symbols.end());
  return out;
}

inline constexpr std::size_t kWhiteningMaskCount = 16;

// Each mask is a Fisher-Yates shuffle of 32 one bits (initially at positions
// 0..31) and 32 zero bits. Index j in [0, i] comes from one keystream byte b,
// rejected while b >= 256 - 256 % (i + 1).
inline std::vector<std::uint64_t> whitening_masks(Keystream& stream, std::size_t count) {
  detail::require(count >= 1, ErrorCode::kInvalidInput, "need at least one mask");
  std::vector<std::uint64_t> masks;
  masks.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::array<std::uint8_t, 64> bits{};
    for (std::size_t p = 0; p < 32; ++p) bits[p] = 1;
    for (unsigned i = 63; i >= 1; --i) {
      const unsigned bound = i + 1;
      const unsigned limit = 256 - 256 % bound;
      unsigned b = stream.next_byte();
      while (b >= limit) b = stream.next_byte();
      std::swap(bits[i], bits[b % bound]);
    }
    std::uint64_t mask = 0;
    for (std::size_t p = 0; p < 64; ++p) mask |= std::uint64_t{bits[p]} << p;
    masks.push_back(mask);
  }
  return masks;
}

// XORs little-endian 64-bit words of the payload with the masks in turn; a
// trailing partial word uses the low bytes of its mask.
inline void apply_whitening(std::span<std::uint8_t> bytes, std::span<const std::uint64_t> masks) {
  detail::require(!masks.empty(), ErrorCode::kInvalidInput, "need at least one mask");
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const std::uint64_t mask = masks[(i / 8) % masks.size()];
    bytes[i] ^= static_cast<std::uint8_t>(mask >> (8 * (i % 8)));
  }
}

}  // namespace anse
