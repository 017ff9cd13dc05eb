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

// Command-line front end. Kept in a header so the tests can drive run()
// in-process.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anse/anse.hpp"

namespace anse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::uint8_t> parse_hex(const std::string& text, std::size_t bytes,
                                           const char* what) {
  std::string hex;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) hex.push_back(c);
  if (hex.size() != 2 * bytes)
    throw UsageError(std::string(what) + " must be exactly " + std::to_string(2 * bytes) +
                     " hex characters");
  std::vector<std::uint8_t> out(bytes);
  for (std::size_t i = 0; i < bytes; ++i) {
    const auto nibble = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw UsageError(std::string(what) + " contains a non-hex character");
    };
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return out;
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

inline Key parse_key(const std::string& text) {
  const auto bytes = parse_hex(text, 32, "key");
  Key key{};
  std::copy(bytes.begin(), bytes.end(), key.begin());
  return key;
}

inline std::vector<std::uint8_t> read_input(const std::string& path) {
  if (path == "-") {
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(std::cin),
                                     std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

inline void write_output(const std::string& path, std::span<const std::uint8_t> bytes) {
  if (path == "-") {
    std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct KeySource {
  std::string hex;
  std::string file;
};

// --key, then --key-file, then ANSE_KEY.
inline std::optional<Key> resolve_key(const KeySource& source) {
  if (!source.hex.empty()) return parse_key(source.hex);
  if (!source.file.empty()) {
    const auto bytes = read_input(source.file);
    return parse_key(std::string(bytes.begin(), bytes.end()));
  }
  if (const char* env = std::getenv("ANSE_KEY"); env && *env) return parse_key(env);
  return std::nullopt;
}

inline void emit_csv(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  table.write(out);
}

// ---------------------------------------------------------------------------
// stats

struct StatsConfig {
  std::string experiment;
  std::string out;
  unsigned radix_log = 11;
  std::size_t table_size = 0;  // overrides radix_log when set (keyspace)
  std::size_t alphabet_size = 256;
  std::uint32_t block_size = 8;
  std::size_t symbols = 1'000'000;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double zipf_exponent = 1.0;
  KeySource key;
};

inline Key stats_key(const StatsConfig& c) {
  if (auto key = resolve_key(c.key)) return *key;
  std::mt19937_64 rng(c.seed ^ 0x6b6579ull);
  Key key{};
  for (auto& b : key) b = static_cast<std::uint8_t>(rng());
  return key;
}

inline int run_stats(const StatsConfig& c) {
  CsvTable table;
  const auto probs = zipf_distribution(c.alphabet_size, c.zipf_exponent);
  const CipherSetup setup{c.radix_log, c.block_size, c.alphabet_size};

  if (c.experiment == "keyspace") {
    const std::size_t L = c.table_size ? c.table_size : (std::size_t{1} << c.radix_log);
    if (!std::has_single_bit(L) || c.alphabet_size > L || L % c.block_size != 0)
      throw UsageError("need L a power of two, m <= L and B dividing L");
    table.header = {"L",
                    "m",
                    "B",
                    "ddp_spread_count_log10",
                    "perturbation_count_log10",
                    "ddp_unchanged_fraction",
                    "ddp_perturbation_count_log10"};
    table.add_row({std::to_string(L), std::to_string(c.alphabet_size),
                   std::to_string(c.block_size),
                   format_number(ddp_spread_count_log10(L, c.alphabet_size)),
                   format_number(perturbation_count_log10(L, c.block_size)),
                   format_number(ddp_unchanged_fraction(L, c.alphabet_size, c.block_size)),
                   format_number(ddp_perturbation_count_log10(L, c.alphabet_size, c.block_size))});
  } else if (c.experiment == "balance") {
    const auto message = iid_source(probs, c.symbols, c.seed);
    CompressOptions options;
    options.radix_log = c.radix_log;
    options.block_size = c.block_size;
    options.alphabet_size = static_cast<std::uint16_t>(c.alphabet_size);
    options.deterministic_seed = c.seed;
    const std::vector<std::uint8_t> bytes(message.begin(), message.end());
    const Container container = compress_encrypt(bytes, stats_key(c), options);
    std::vector<BitPayload> payloads;
    for (const auto& f : container.frames) payloads.push_back(f.payload);
    const BitPayload all = concatenate(payloads);
    const auto patterns = pattern_frequencies(all, 8);
    table.header = {"metric", "value"};
    table.add_row({"bits", std::to_string(all.bit_length)});
    table.add_row({"pr_zero", format_number(bit_balance(all), 8)});
    table.add_row({"max_pattern8_deviation", format_number(pattern_balance(all, 8), 8)});
    for (std::size_t v = 0; v < patterns.size(); ++v)
      table.add_row({"pattern8_" + std::to_string(v), format_number(patterns[v], 8)});
  } else if (c.experiment == "avalanche") {
    const auto message = iid_source(probs, c.symbols, c.seed);
    const auto result = avalanche_test(stats_key(c), message, c.trials, setup, c.seed + 1);
    table.header = {"trial", "difference_fraction"};
    for (std::size_t t = 0; t < result.trials.size(); ++t)
      table.add_row({std::to_string(t), format_number(result.trials[t])});
    table.add_row({"mean", format_number(result.mean)});
  } else if (c.experiment == "completeness") {
    const auto message = iid_source(probs, c.symbols, c.seed);
    const auto result =
        completeness_test(message, c.trials, setup, stats_key(c), c.seed + 1);
    table.header = {"offset", "difference_fraction", "samples"};
    for (std::size_t i = 0; i < result.profile.size(); ++i)
      table.add_row({std::to_string(i), format_number(result.profile[i]),
                     std::to_string(result.profile_samples[i])});
    table.add_row({"beyond_" + std::to_string(result.skip), format_number(result.beyond_fraction),
                   std::to_string(result.beyond_bits)});
  } else if (c.experiment == "statedist") {
    const auto message = iid_source(probs, c.symbols, c.seed);
    const auto counts = histogram(message, c.alphabet_size);
    const FrequencyTable freq = quantize_frequencies(counts, c.radix_log);
    const EncodingTable enc = build_encoding_table(fast_spread(freq), freq);
    const auto rho = stationary_distribution(enc, probs);
    const auto empirical =
        empirical_state_distribution(enc, message, CoderState{std::uint32_t{1} << c.radix_log});
    const auto law = inverse_law(enc.table_size());
    table.header = {"x", "stationary", "empirical", "inverse_law"};
    for (std::size_t X = 0; X < rho.rho.size(); ++X)
      table.add_row({std::to_string(X + enc.table_size()), format_number(rho.rho[X], 10),
                     format_number(empirical[X], 10), format_number(law[X], 10)});
  } else {
    throw UsageError("unknown experiment: " + c.experiment);
  }
  emit_csv(table, c.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchConfig {
  std::string input;
  std::string out;
  std::size_t symbols = 1'000'000;
  unsigned radix_log = 11;
  std::uint64_t seed = 1;
};

inline int run_bench(const BenchConfig& c) {
  std::vector<Symbol> message;
  std::size_t m = 256;
  if (!c.input.empty()) {
    const auto bytes = read_input(c.input);
    message.assign(bytes.begin(), bytes.end());
  } else {
    message = iid_source(zipf_distribution(m), c.symbols, c.seed);
  }
  if (message.empty()) throw UsageError("empty input");
  const auto counts = histogram(message, m);
  const FrequencyTable freq = quantize_frequencies(counts, c.radix_log);
  const SymbolSpread spread = fast_spread(freq);
  const EncodingTable enc = build_encoding_table(spread, freq);
  const DecodingTable dec = build_decoding_table(spread, freq);
  const PrefixCode code = huffman_build(counts);

  std::vector<double> p(m);
  for (std::size_t s = 0; s < m; ++s) p[s] = double(counts[s]) / double(message.size());
  const double entropy = shannon_entropy(p);

  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const double mbytes = double(message.size()) / 1e6;

  const auto t0 = Clock::now();
  const EncodedFrame frame = encode_frame(message, enc, CoderState{enc.table_size()});
  const auto t1 = Clock::now();
  const DecodedFrame back = decode_frame(frame.payload, dec, frame.final_state, message.size());
  const auto t2 = Clock::now();
  const BitPayload huff = prefix_encode(message, code);
  const auto t3 = Clock::now();
  const auto huff_back = prefix_decode(huff, code, message.size());
  const auto t4 = Clock::now();
  if (back.symbols != message || huff_back != message)
    throw std::runtime_error("benchmark roundtrip mismatch");

  CsvTable table;
  table.header = {"coder", "bits_per_symbol", "excess_over_entropy", "ratio", "encode_MBps",
                  "decode_MBps"};
  const auto row = [&](const char* name, double bits, double enc_s, double dec_s) {
    const double bps = bits / double(message.size());
    table.add_row({name, format_number(bps), format_number(bps - entropy),
                   format_number(8.0 / bps, 4), format_number(mbytes / enc_s, 2),
                   format_number(mbytes / dec_s, 2)});
  };
  row("tans", double(frame.payload.bit_length + c.radix_log), seconds(t0, t1), seconds(t1, t2));
  row("huffman", double(huff.bit_length), seconds(t2, t3), seconds(t3, t4));
  table.add_row({"entropy", format_number(entropy), "0", format_number(8.0 / entropy, 4), "", ""});
  emit_csv(table, c.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest

inline bool selftest(std::ostream& log) {
  bool ok = true;
  const auto check = [&](const char* name, bool pass) {
    log << (pass ? "PASS " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };

  const std::vector<Symbol> message = {0, 1, 1, 1, 1};
  const PeriodicSpread uniform(SymbolSpread{{0, 1}}, 2);
  const PeriodicSpread skewed(SymbolSpread{{0, 1, 1, 1}}, 2);
  check("bignum 01111 with spread 01 -> 47",
        encode_sequence(message, BigNat(1), uniform) == BigNat(47));
  check("bignum 01111 with spread 0111 -> 18",
        encode_sequence(message, BigNat(1), skewed) == BigNat(18));

  const FrequencyTable freq(2, {3, 1});
  const SymbolSpread abaa{{0, 1, 0, 0}};
  const DecodingTable dec = build_decoding_table(abaa, freq);
  const std::vector<DecodeEntry> expected = {{0, 1, 2}, {1, 2, 0}, {0, 0, 0}, {0, 0, 1}};
  bool table_ok = true;
  for (std::uint32_t X = 0; X < 4; ++X) {
    const DecodeEntry& t = dec[X];
    table_ok = table_ok && t.symbol == expected[X].symbol && t.nb_bits == expected[X].nb_bits &&
               t.new_x == expected[X].new_x;
  }
  check("abaa decoding table", table_ok);

  const EncodingTable enc = build_encoding_table(abaa, freq);
  const std::vector<double> p = {0.75, 0.25};
  const auto rho = stationary_distribution(enc, p);
  check("abaa rho6 + rho7 = 0.4286", std::abs(rho.rho[2] + rho.rho[3] - 3.0 / 7.0) < 1e-9);
  const double excess = expected_rate(enc, p, rho) - shannon_entropy(p);
  check("abaa H' - H = 0.0101", std::abs(excess - 0.0101) < 0.0005);
  return ok;
}

// ---------------------------------------------------------------------------
// run

inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"tANS compressor with keyed tables"};
  app.require_subcommand(1);

  // compress
  auto* compress = app.add_subcommand("compress", "Compress (and encrypt) a file");
  KeySource compress_key;
  CompressOptions options;
  bool no_encrypt = false;
  std::string salt_hex;
  std::optional<std::uint64_t> seed;
  std::string in_path, out_path;
  compress->add_option("--key", compress_key.hex, "Key as 64 hex characters");
  compress->add_option("--key-file", compress_key.file, "File holding the hex key");
  compress->add_flag("--no-encrypt", no_encrypt, "Plain compression, no key");
  compress->add_option("--R", options.radix_log, "Table size exponent")->check(CLI::Range(1, 15));
  compress->add_option("--B", options.block_size, "Perturbation block size");
  compress->add_option("--frame-size", options.frame_size, "Symbols per frame");
  compress->add_option("--n-rand", options.prefix_symbols, "Random prefix symbols per frame")
      ->check(CLI::Range(0, 255));
  compress->add_flag("--whitening", options.whitening, "XOR the payload with keyed masks");
  compress->add_option("--threads", options.threads, "Worker threads")->check(CLI::Range(1, 1024));
  compress->add_option("--salt", salt_hex, "Fixed salt as 16 hex characters");
  compress->add_option("--seed", seed, "Deterministic randomness (testing only)");
  compress->add_option("input", in_path, "Input file or -")->required();
  compress->add_option("output", out_path, "Output file or -")->required();

  // decompress
  auto* decompress = app.add_subcommand("decompress", "Decompress (and decrypt) a container");
  KeySource decompress_key;
  unsigned decompress_threads = 1;
  std::string din, dout;
  decompress->add_option("--key", decompress_key.hex, "Key as 64 hex characters");
  decompress->add_option("--key-file", decompress_key.file, "File holding the hex key");
  decompress->add_option("--threads", decompress_threads, "Worker threads")
      ->check(CLI::Range(1, 1024));
  decompress->add_option("input", din, "Container file or -")->required();
  decompress->add_option("output", dout, "Output file or -")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Statistical experiments, CSV output");
  StatsConfig sc;
  stats->add_option("experiment", sc.experiment, "balance | avalanche | statedist | keyspace | completeness")
      ->required()
      ->check(CLI::IsMember({"balance", "avalanche", "statedist", "keyspace", "completeness"}));
  stats->add_option("--out", sc.out, "CSV output path (default stdout)");
  stats->add_option("--R", sc.radix_log, "Table size exponent")->check(CLI::Range(1, 15));
  stats->add_option("--L", sc.table_size, "Table size (keyspace)");
  stats->add_option("--m", sc.alphabet_size, "Alphabet size")->check(CLI::Range(1, 256));
  stats->add_option("--B", sc.block_size, "Perturbation block size")->check(CLI::Range(1, 256));
  stats->add_option("--symbols", sc.symbols, "Message length");
  stats->add_option("--trials", sc.trials, "Trials");
  stats->add_option("--seed", sc.seed, "Random seed");
  stats->add_option("--zipf", sc.zipf_exponent, "Source exponent");
  stats->add_option("--key", sc.key.hex, "Key as 64 hex characters (default: derived from seed)");

  // bench
  auto* bench = app.add_subcommand("bench", "tANS against the Huffman baseline");
  BenchConfig bc;
  bench->add_option("--input", bc.input, "Input file (default: synthetic source)");
  bench->add_option("--out", bc.out, "CSV output path (default stdout)");
  bench->add_option("--symbols", bc.symbols, "Synthetic message length");
  bench->add_option("--R", bc.radix_log, "Table size exponent")->check(CLI::Range(8, 15));
  bench->add_option("--seed", bc.seed, "Random seed");

  auto* self = app.add_subcommand("selftest", "Run the built-in golden vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    const int code = app.exit(e, out, out);
    if (code == 0) {
      std::cout << out.str();
      return kExitOk;
    }
    err << out.str();
    return kExitUsage;
  }

  try {
    if (*compress) {
      std::optional<Key> key;
      if (!no_encrypt) {
        key = resolve_key(compress_key);
        if (!key) throw UsageError("encryption needs a key (--key, --key-file or ANSE_KEY); use --no-encrypt for plain compression");
      }
      if (!salt_hex.empty()) {
        const auto bytes = parse_hex(salt_hex, 8, "salt");
        Salt salt{};
        std::copy(bytes.begin(), bytes.end(), salt.begin());
        options.salt = salt;
      }
      options.deterministic_seed = seed;
      const auto input = read_input(in_path);
      write_output(out_path, compress_encrypt_bytes(input, key, options));
    } else if (*decompress) {
      const Container c = read_container(read_input(din));
      const std::optional<Key> key = resolve_key(decompress_key);
      if (c.header.encrypted && !key)
        throw UsageError("container is encrypted; give --key, --key-file or ANSE_KEY");
      write_output(dout, decrypt_decompress(c, c.header.encrypted ? key : std::nullopt,
                                            decompress_threads));
    } else if (*stats) {
      return run_stats(sc);
    } else if (*bench) {
      return run_bench(bc);
    } else if (*self) {
      return selftest(std::cout) ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidInput ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace anse::cli
