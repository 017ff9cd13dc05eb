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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace anse::cli {
namespace {

namespace fs = std::filesystem;

const std::string kKey = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
const std::string kOtherKey = "ff0102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("anse_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv("ANSE_KEY");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    args.insert(args.begin(), "anse");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), err_);
  }

  static void Write(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream(path, std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }

  static std::string Text(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<std::uint8_t> Sample(std::size_t n = 40000) const {
    std::mt19937_64 rng(1);
    std::geometric_distribution<int> dist(0.2);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(std::min(dist(rng), 255));
    return out;
  }

  fs::path dir_;
  std::ostringstream err_;
};

TEST_F(CliTest, RoundtripWithKey) {
  const auto input = Sample();
  Write(Path("in.bin"), input);
  ASSERT_EQ(Run({"compress", "--key", kKey, Path("in.bin"), Path("out.anse")}), kExitOk) << err_.str();
  ASSERT_EQ(Run({"decompress", "--key", kKey, Path("out.anse"), Path("back.bin")}), kExitOk) << err_.str();
  EXPECT_EQ(read_input(Path("back.bin")), input);
  EXPECT_LT(fs::file_size(Path("out.anse")), input.size());
}

TEST_F(CliTest, MatchesLibraryByteForByte) {
  const auto input = Sample();
  Write(Path("in.bin"), input);
  ASSERT_EQ(Run({"compress", "--key", kKey, "--R", "12", "--B", "4", "--frame-size", "5000",
                 "--n-rand", "2", "--whitening", "--threads", "3", "--salt", "0102030405060708",
                 "--seed", "99", Path("in.bin"), Path("out.anse")}),
            kExitOk)
      << err_.str();
  CompressOptions o;
  o.radix_log = 12;
  o.block_size = 4;
  o.frame_size = 5000;
  o.prefix_symbols = 2;
  o.whitening = true;
  o.salt = Salt{1, 2, 3, 4, 5, 6, 7, 8};
  o.deterministic_seed = 99;
  EXPECT_EQ(read_input(Path("out.anse")), compress_encrypt_bytes(input, parse_key(kKey), o));
}

TEST_F(CliTest, KeySources) {
  const auto input = Sample(5000);
  Write(Path("in.bin"), input);
  std::ofstream(Path("key.txt")) << kKey << "\n";
  ASSERT_EQ(Run({"compress", "--key-file", Path("key.txt"), Path("in.bin"), Path("a.anse")}), kExitOk);
  ::setenv("ANSE_KEY", kKey.c_str(), 1);
  ASSERT_EQ(Run({"decompress", Path("a.anse"), Path("back.bin")}), kExitOk) << err_.str();
  EXPECT_EQ(read_input(Path("back.bin")), input);
}

TEST_F(CliTest, UsageErrors) {
  Write(Path("in.bin"), Sample(100));
  EXPECT_EQ(Run({"compress", Path("in.bin"), Path("out.anse")}), kExitUsage);
  EXPECT_NE(err_.str().find("key"), std::string::npos);
  EXPECT_EQ(Run({"compress", "--key", "correct horse battery staple", Path("in.bin"), Path("o")}),
            kExitUsage);
  EXPECT_EQ(Run({"compress", "--key", kKey.substr(2), Path("in.bin"), Path("o")}), kExitUsage);
  EXPECT_EQ(Run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Run({"stats", "entropy"}), kExitUsage);
  EXPECT_EQ(Run({"compress", "--key", kKey, "--B", "3", Path("in.bin"), Path("o")}), kExitUsage);

  ASSERT_EQ(Run({"compress", "--key", kKey, Path("in.bin"), Path("enc.anse")}), kExitOk);
  EXPECT_EQ(Run({"decompress", Path("enc.anse"), Path("back.bin")}), kExitUsage);
}

TEST_F(CliTest, PlainCompressionNeedsNoKey) {
  const auto input = Sample(20000);
  Write(Path("in.bin"), input);
  ASSERT_EQ(Run({"compress", "--no-encrypt", Path("in.bin"), Path("p.anse")}), kExitOk);
  ASSERT_EQ(Run({"decompress", Path("p.anse"), Path("back.bin")}), kExitOk);
  EXPECT_EQ(read_input(Path("back.bin")), input);
}

TEST_F(CliTest, WrongKeyDecodesToGarbage) {
  const auto input = Sample(20000);
  Write(Path("in.bin"), input);
  ASSERT_EQ(Run({"compress", "--key", kKey, Path("in.bin"), Path("out.anse")}), kExitOk);
  ASSERT_EQ(Run({"decompress", "--key", kOtherKey, Path("out.anse"), Path("bad.bin")}), kExitOk);
  const auto bad = read_input(Path("bad.bin"));
  EXPECT_EQ(bad.size(), input.size());
  EXPECT_NE(bad, input);
}

TEST_F(CliTest, CorruptContainerExitsOne) {
  Write(Path("junk.anse"), {'A', 'N', 'S', 'X', 1, 2, 3});
  EXPECT_EQ(Run({"decompress", "--key", kKey, Path("junk.anse"), Path("o")}), kExitFailure);
  Write(Path("in.bin"), Sample(1000));
  ASSERT_EQ(Run({"compress", "--key", kKey, Path("in.bin"), Path("out.anse")}), kExitOk);
  auto bytes = read_input(Path("out.anse"));
  bytes.resize(bytes.size() - 3);
  Write(Path("cut.anse"), bytes);
  EXPECT_EQ(Run({"decompress", "--key", kKey, Path("cut.anse"), Path("o")}), kExitFailure);
  EXPECT_EQ(Run({"decompress", "--key", kKey, Path("missing.anse"), Path("o")}), kExitFailure);
}

TEST_F(CliTest, StatsKeyspace) {
  ASSERT_EQ(Run({"stats", "keyspace", "--L", "2048", "--m", "256", "--B", "8", "--out", Path("k.csv")}),
            kExitOk);
  const auto csv = Text(Path("k.csv"));
  EXPECT_NE(csv.find("837.2"), std::string::npos);
  EXPECT_NE(csv.find("231.19"), std::string::npos);
  EXPECT_NE(csv.find("0.345"), std::string::npos);
  EXPECT_NE(csv.find("151.39"), std::string::npos);
}

TEST_F(CliTest, StatsExperimentsWriteCsv) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"balance", "metric,value"},
      {"avalanche", "trial,difference_fraction"},
      {"statedist", "x,stationary,empirical,inverse_law"},
      {"completeness", "offset,difference_fraction,samples"}};
  for (const auto& [name, header] : cases) {
    const std::string out = Path(name + ".csv");
    ASSERT_EQ(Run({"stats", name, "--symbols", "20000", "--trials", "3", "--out", out}), kExitOk)
        << name << ": " << err_.str();
    const auto csv = Text(out);
    EXPECT_EQ(csv.substr(0, header.size()), header) << name;
    EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 3) << name;
  }
}

TEST_F(CliTest, BenchAndSelftest) {
  ASSERT_EQ(Run({"bench", "--symbols", "50000", "--out", Path("b.csv")}), kExitOk) << err_.str();
  const auto csv = Text(Path("b.csv"));
  EXPECT_NE(csv.find("tans,"), std::string::npos);
  EXPECT_NE(csv.find("huffman,"), std::string::npos);
  EXPECT_EQ(Run({"selftest"}), kExitOk);
}

}  // namespace
}  // namespace anse::cli
