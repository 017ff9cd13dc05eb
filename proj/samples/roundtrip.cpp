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

// Compresses and encrypts a short text, then reverses it.

#include <iostream>
#include <string>

#include "anse/anse.hpp"

int main() {
  const std::string text =
      "the quick brown fox jumps over the lazy dog; the lazy dog sleeps on.";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());

  anse::Key key{};
  for (std::size_t i = 0; i < key.size(); ++i) key[i] = static_cast<std::uint8_t>(i * 7 + 1);

  anse::CompressOptions options;
  options.frame_size = 32;
  const auto container = anse::compress_encrypt_bytes(bytes, key, options);
  const auto back = anse::decrypt_decompress_bytes(container, key);

  std::cout << bytes.size() << " bytes -> " << container.size() << " byte container, "
            << (back == bytes ? "roundtrip ok" : "roundtrip FAILED") << '\n';
  return back == bytes ? 0 : 1;
}
