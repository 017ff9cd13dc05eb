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

// Container format, version 1. All integers little-endian.
//
//   header (26 bytes)
//     magic "ANSE" | version u8 | flags u8 | R u8 | log2(B) u8 | m u16 |
//     salt[8] | frame_count u64
//     flags: bit0 encrypted, bit1 whitened (requires bit0)
//   frame (repeated frame_count times)
//     frame_index u64 | symbol_count u32 | prefix_count u8 |
//     masked_final_state u16 | payload_bit_length u32 | freqs u16[m] |
//     payload bytes[ceil(payload_bit_length / 8)]
//
// symbol_count excludes the prefix_count random symbols that precede the
// plaintext inside the frame. There is no authentication: a wrong key decodes
// to garbage rather than failing.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "anse/bitstream.hpp"
#include "anse/codec.hpp"
#include "anse/crypto.hpp"
#include "anse/error.hpp"
#include "anse/freq.hpp"
#include "anse/spread.hpp"
#include "anse/tables.hpp"

namespace anse {

inline constexpr std::array<std::uint8_t, 4> kContainerMagic = {'A', 'N', 'S', 'E'};
inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderSize = 26;

struct ContainerHeader {
  std::uint8_t version = kContainerVersion;
  bool encrypted = false;
  bool whitened = false;
  std::uint8_t radix_log = 11;
  std::uint8_t block_log2 = 3;
  std::uint16_t alphabet_size = 256;
  Salt salt{};
  std::uint64_t frame_count = 0;

  std::uint32_t table_size() const { return 1u << radix_log; }
  std::uint32_t block_size() const { return 1u << block_log2; }

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

struct Frame {
  std::uint64_t frame_index = 0;
  std::uint32_t symbol_count = 0;
  std::uint8_t prefix_count = 0;
  std::uint16_t masked_final_state = 0;
  std::vector<std::uint16_t> freqs;
  BitPayload payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Container {
  ContainerHeader header;
  std::vector<Frame> frames;

  friend bool operator==(const Container&, const Container&) = default;
};

namespace detail {

inline void validate_header(const ContainerHeader& h) {
  require(h.version == kContainerVersion, ErrorCode::kFormat, "unsupported version");
  require(h.radix_log >= 1 && h.radix_log <= kMaxRadixLog, ErrorCode::kCorruptContainer,
          "R out of range");
  require(h.block_log2 <= h.radix_log, ErrorCode::kCorruptContainer,
          "block size larger than the table");
  require(h.alphabet_size >= 1 && h.alphabet_size <= h.table_size(),
          ErrorCode::kCorruptContainer, "alphabet size out of range");
  require(!h.whitened || h.encrypted, ErrorCode::kCorruptContainer,
          "whitening requires encryption");
}

inline void validate_frame(const ContainerHeader& h, const Frame& f) {
  require(f.freqs.size() == h.alphabet_size, ErrorCode::kCorruptContainer,
          "frequency count does not match the alphabet");
  std::uint64_t sum = 0;
  for (auto v : f.freqs) {
    require(v >= 1, ErrorCode::kCorruptContainer, "zero frequency");
    sum += v;
  }
  require(sum == h.table_size(), ErrorCode::kCorruptContainer,
          "frequencies do not sum to 2^R");
  require(f.masked_final_state < h.table_size(), ErrorCode::kCorruptContainer,
          "final state out of range");
  require(f.payload.bit_length <= 8 * std::uint64_t{f.payload.bytes.size()} &&
              f.payload.bytes.size() == bytes_for_bits(f.payload.bit_length),
          ErrorCode::kCorruptContainer, "payload length mismatch");
  require(f.payload.bit_length <= UINT32_MAX, ErrorCode::kCorruptContainer,
          "payload too long");
}

class ByteWriter {
 public:
  template <class T>
  void put(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
      out_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
  }
  void put_bytes(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  std::vector<std::uint8_t> finish() && { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  template <class T>
  T get() {
    need(sizeof(T));
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= std::uint64_t{in_[pos_++]} << (8 * i);
    return static_cast<T>(value);
  }
  std::span<const std::uint8_t> get_bytes(std::size_t n) {
    need(n);
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    require(in_.size() - pos_ >= n, ErrorCode::kTruncatedStream, "container truncated");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<std::uint8_t> write_container(const Container& c) {
  detail::validate_header(c.header);
  detail::require(c.header.frame_count == c.frames.size(), ErrorCode::kCorruptContainer,
                  "frame count mismatch");
  detail::ByteWriter w;
  w.put_bytes(kContainerMagic);
  w.put(c.header.version);
  w.put(static_cast<std::uint8_t>((c.header.encrypted ? 1 : 0) | (c.header.whitened ? 2 : 0)));
  w.put(c.header.radix_log);
  w.put(c.header.block_log2);
  w.put(c.header.alphabet_size);
  w.put_bytes(c.header.salt);
  w.put(c.header.frame_count);
  for (const Frame& f : c.frames) {
    detail::validate_frame(c.header, f);
    w.put(f.frame_index);
    w.put(f.symbol_count);
    w.put(f.prefix_count);
    w.put(f.masked_final_state);
    w.put(static_cast<std::uint32_t>(f.payload.bit_length));
    for (auto v : f.freqs) w.put(v);
    w.put_bytes(f.payload.bytes);
  }
  return std::move(w).finish();
}

inline Container read_container(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  Container c;
  const auto magic = r.get_bytes(kContainerMagic.size());
  detail::require(std::equal(magic.begin(), magic.end(), kContainerMagic.begin()),
                  ErrorCode::kFormat, "bad magic");
  c.header.version = r.get<std::uint8_t>();
  detail::require(c.header.version == kContainerVersion, ErrorCode::kFormat,
                  "unsupported version");
  const auto flags = r.get<std::uint8_t>();
  detail::require((flags & ~3u) == 0, ErrorCode::kCorruptContainer, "unknown flags");
  c.header.encrypted = flags & 1;
  c.header.whitened = flags & 2;
  c.header.radix_log = r.get<std::uint8_t>();
  c.header.block_log2 = r.get<std::uint8_t>();
  c.header.alphabet_size = r.get<std::uint16_t>();
  const auto salt = r.get_bytes(c.header.salt.size());
  std::copy(salt.begin(), salt.end(), c.header.salt.begin());
  c.header.frame_count = r.get<std::uint64_t>();
  detail::validate_header(c.header);

  for (std::uint64_t i = 0; i < c.header.frame_count; ++i) {
    Frame f;
    f.frame_index = r.get<std::uint64_t>();
    f.symbol_count = r.get<std::uint32_t>();
    f.prefix_count = r.get<std::uint8_t>();
    f.masked_final_state = r.get<std::uint16_t>();
    f.payload.bit_length = r.get<std::uint32_t>();
    f.freqs.resize(c.header.alphabet_size);
    for (auto& v : f.freqs) v = r.get<std::uint16_t>();
    const auto payload = r.get_bytes(bytes_for_bits(f.payload.bit_length));
    f.payload.bytes.assign(payload.begin(), payload.end());
    detail::validate_frame(c.header, f);
    c.frames.push_back(std::move(f));
  }
  detail::require(r.done(), ErrorCode::kCorruptContainer, "trailing bytes after last frame");
  return c;
}

struct CompressOptions {
  unsigned radix_log = 11;
  std::uint32_t block_size = kDefaultBlockSize;
  std::size_t frame_size = 10240;
  unsigned prefix_symbols = 4;
  bool whitening = false;
  std::uint16_t alphabet_size = 256;
  unsigned threads = 1;
  // Fixed salt instead of a fresh random one.
  std::optional<Salt> salt;
  // Seeds a deterministic generator for salt, initial states and prefix
  // symbols instead of the system entropy source. For reproducible tests only.
  std::optional<std::uint64_t> deterministic_seed;
};

// Everything a single frame needs besides the plaintext.
struct FrameParams {
  unsigned radix_log = 11;
  std::uint32_t block_size = kDefaultBlockSize;
  std::size_t alphabet_size = 256;
  bool whitening = false;
  std::optional<KeyMaterial> key;  // nullopt: plain compression
};

namespace detail {

inline FrequencyTable frame_table(const FrameParams& p, const std::vector<std::uint16_t>& freqs) {
  return FrequencyTable(p.radix_log, std::vector<std::uint32_t>(freqs.begin(), freqs.end()));
}

inline SymbolSpread frame_spread(const FrameParams& p, const FrequencyTable& freq,
                                 std::optional<Keystream>& stream) {
  if (!p.key) return fast_spread(freq);
  stream.emplace(*p.key);
  return keyed_spread(freq, *stream, p.block_size);
}

}  // namespace detail

// Encodes one frame. `prefix` holds the random symbols placed before the
// plaintext; `initial` is the coder's starting state.
inline Frame encrypt_frame(std::span<const Symbol> plaintext, const FrameParams& p,
                           std::uint64_t frame_index, CoderState initial,
                           std::span<const Symbol> prefix) {
  detail::require(!plaintext.empty(), ErrorCode::kInvalidInput, "empty frame");
  detail::require(plaintext.size() <= UINT32_MAX && prefix.size() <= 255,
                  ErrorCode::kCapacity, "frame too large");
  detail::require(!p.whitening || p.key, ErrorCode::kInvalidInput,
                  "whitening requires a key");
  const auto counts = histogram(plaintext, p.alphabet_size);
  const FrequencyTable freq = quantize_frequencies(counts, p.radix_log);

  std::optional<Keystream> stream;
  const SymbolSpread spread = detail::frame_spread(p, freq, stream);
  const EncodingTable table = build_encoding_table(spread, freq);

  std::vector<Symbol> padded(prefix.begin(), prefix.end());
  padded.insert(padded.end(), plaintext.begin(), plaintext.end());
  EncodedFrame encoded = encode_frame(padded, table, initial);

  Frame f;
  f.frame_index = frame_index;
  f.symbol_count = static_cast<std::uint32_t>(plaintext.size());
  f.prefix_count = static_cast<std::uint8_t>(prefix.size());
  std::uint32_t X = encoded.final_state.index(p.radix_log);
  if (stream) X = mask_state(X, p.radix_log, *stream);
  f.masked_final_state = static_cast<std::uint16_t>(X);
  f.freqs.assign(freq.freqs().begin(), freq.freqs().end());
  f.payload = std::move(encoded.payload);
  if (p.whitening) {
    const auto masks = whitening_masks(*stream, kWhiteningMaskCount);
    apply_whitening(f.payload.bytes, masks);
  }
  return f;
}

// Inverse of encrypt_frame; returns the plaintext symbols only. With a key
// the decoder never fails on payload content (missing bits read as zero);
// without one a payload that is not consumed exactly is reported as corrupt.
inline std::vector<Symbol> decrypt_frame(const Frame& f, const FrameParams& p) {
  detail::require(!p.whitening || p.key, ErrorCode::kInvalidInput,
                  "whitening requires a key");
  const FrequencyTable freq = detail::frame_table(p, f.freqs);
  std::optional<Keystream> stream;
  const SymbolSpread spread = detail::frame_spread(p, freq, stream);
  const DecodingTable table = build_decoding_table(spread, freq);

  std::uint32_t X = f.masked_final_state;
  if (stream) X = mask_state(X, p.radix_log, *stream);

  const BitPayload* payload = &f.payload;
  BitPayload unwhitened;
  if (p.whitening) {
    unwhitened = f.payload;
    const auto masks = whitening_masks(*stream, kWhiteningMaskCount);
    apply_whitening(unwhitened.bytes, masks);
    payload = &unwhitened;
  }

  BitReader reader(*payload, p.key ? Underrun::kZeroFill : Underrun::kThrow);
  DecodedFrame decoded = decode_frame(reader, table, CoderState::from_index(X, p.radix_log),
                                      std::size_t{f.prefix_count} + f.symbol_count);
  if (!p.key)
    detail::require(reader.position() == payload->bit_length, ErrorCode::kCorruptContainer,
                    "payload not consumed exactly");
  decoded.symbols.erase(decoded.symbols.begin(), decoded.symbols.begin() + f.prefix_count);
  return std::move(decoded.symbols);
}

inline FrameParams frame_params(const ContainerHeader& h, const std::optional<Key>& key,
                                std::uint64_t frame_index) {
  FrameParams p;
  p.radix_log = h.radix_log;
  p.block_size = h.block_size();
  p.alphabet_size = h.alphabet_size;
  p.whitening = h.whitened;
  if (h.encrypted) {
    detail::require(key.has_value(), ErrorCode::kInvalidInput,
                    "container is encrypted but no key was given");
    p.key = KeyMaterial{*key, h.salt, frame_index};
  }
  return p;
}

namespace detail {

// Runs job(i) for i in [0, count) on up to `threads` workers; the first
// exception is rethrown after all workers finish.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

struct FramePlan {
  CoderState initial;
  std::vector<Symbol> prefix;
};

template <class Rng>
std::vector<FramePlan> plan_frames(std::size_t frames, const CompressOptions& o, Rng& rng) {
  std::vector<FramePlan> plans;
  plans.reserve(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    FramePlan plan;
    plan.initial = random_initial_state(o.radix_log, rng);
    plan.prefix = prefix_pad({}, o.prefix_symbols, o.alphabet_size, rng);
    plans.push_back(std::move(plan));
  }
  return plans;
}

inline void validate_options(const CompressOptions& o, bool has_key) {
  require(o.radix_log >= 1 && o.radix_log <= kMaxRadixLog, ErrorCode::kInvalidInput,
          "R must be in [1, 15]");
  require(o.alphabet_size >= 1 && o.alphabet_size <= 256, ErrorCode::kInvalidInput,
          "byte alphabets have 1 to 256 symbols");
  require(o.alphabet_size <= (1u << o.radix_log), ErrorCode::kCapacity,
          "alphabet larger than the state table");
  require(std::has_single_bit(o.block_size) && o.block_size <= (1u << o.radix_log),
          ErrorCode::kInvalidInput, "block size must divide the table size");
  require(o.frame_size >= 1 && o.frame_size <= UINT32_MAX, ErrorCode::kInvalidInput,
          "frame size out of range");
  require(o.prefix_symbols <= 255, ErrorCode::kInvalidInput, "at most 255 prefix symbols");
  require(!o.whitening || has_key, ErrorCode::kInvalidInput, "whitening requires a key");
}

}  // namespace detail

inline Container compress_encrypt(std::span<const std::uint8_t> plaintext,
                                  const std::optional<Key>& key,
                                  const CompressOptions& options = {}) {
  detail::validate_options(options, key.has_value());
  for (auto b : plaintext)
    detail::require(b < options.alphabet_size, ErrorCode::kInvalidInput,
                    "byte outside the alphabet");

  const std::size_t frame_count = (plaintext.size() + options.frame_size - 1) / options.frame_size;
  Container c;
  c.header.encrypted = key.has_value();
  c.header.whitened = options.whitening;
  c.header.radix_log = static_cast<std::uint8_t>(options.radix_log);
  c.header.block_log2 = static_cast<std::uint8_t>(std::countr_zero(options.block_size));
  c.header.alphabet_size = options.alphabet_size;
  c.header.frame_count = frame_count;

  std::vector<detail::FramePlan> plans;
  const auto draw = [&](auto& rng) {
    c.header.salt = options.salt ? *options.salt : random_salt(rng);
    plans = detail::plan_frames(frame_count, options, rng);
  };
  if (options.deterministic_seed) {
    std::mt19937_64 rng(*options.deterministic_seed);
    draw(rng);
  } else {
    SystemEntropy rng;
    draw(rng);
  }

  c.frames.resize(frame_count);
  detail::parallel_for(frame_count, options.threads, [&](std::size_t i) {
    const std::size_t begin = i * options.frame_size;
    const std::size_t end = std::min(plaintext.size(), begin + options.frame_size);
    const std::vector<Symbol> symbols(plaintext.begin() + static_cast<std::ptrdiff_t>(begin),
                                      plaintext.begin() + static_cast<std::ptrdiff_t>(end));
    c.frames[i] = encrypt_frame(symbols, frame_params(c.header, key, i), i, plans[i].initial,
                                plans[i].prefix);
  });
  return c;
}

inline std::vector<std::uint8_t> decrypt_frame_bytes(const ContainerHeader& h, const Frame& f,
                                                     const std::optional<Key>& key) {
  detail::require(h.alphabet_size <= 256, ErrorCode::kCorruptContainer,
                  "alphabet does not fit in bytes");
  const auto symbols = decrypt_frame(f, frame_params(h, key, f.frame_index));
  return std::vector<std::uint8_t>(symbols.begin(), symbols.end());
}

inline std::vector<std::uint8_t> decrypt_decompress(const Container& c,
                                                    const std::optional<Key>& key,
                                                    unsigned threads = 1) {
  detail::validate_header(c.header);
  detail::require(c.header.frame_count == c.frames.size(), ErrorCode::kCorruptContainer,
                  "frame count mismatch");
  std::vector<std::vector<std::uint8_t>> parts(c.frames.size());
  detail::parallel_for(c.frames.size(), threads, [&](std::size_t i) {
    detail::validate_frame(c.header, c.frames[i]);
    detail::require(c.frames[i].frame_index == i, ErrorCode::kCorruptContainer,
                    "frames out of order");
    parts[i] = decrypt_frame_bytes(c.header, c.frames[i], key);
  });
  std::vector<std::uint8_t> out;
  for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  return out;
}

// Byte-level convenience wrappers.
inline std::vector<std::uint8_t> compress_encrypt_bytes(std::span<const std::uint8_t> plaintext,
                                                        const std::optional<Key>& key,
                                                        const CompressOptions& options = {}) {
  return write_container(compress_encrypt(plaintext, key, options));
}

inline std::vector<std::uint8_t> decrypt_decompress_bytes(std::span<const std::uint8_t> bytes,
                                                          const std::optional<Key>& key,
                                                          unsigned threads = 1) {
  return decrypt_decompress(read_container(bytes), key, threads);
}

}  // namespace anse
