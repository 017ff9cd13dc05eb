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

// Prints the coding tables for a four-state example.

#include <iostream>

#include "anse/anse.hpp"

int main() {
  const anse::FrequencyTable freq(2, {3, 1});
  const anse::SymbolSpread spread{{0, 1, 0, 0}};
  const auto dec = anse::build_decoding_table(spread, freq);
  const auto enc = anse::build_encoding_table(spread, freq);

  std::cout << "X  symbol nbBits newX\n";
  for (std::uint32_t X = 0; X < dec.table_size(); ++X)
    std::cout << X << "  " << char('a' + dec[X].symbol) << "      " << int(dec[X].nb_bits)
              << "      " << dec[X].new_x << '\n';

  const std::vector<double> p = {0.75, 0.25};
  const auto rho = anse::stationary_distribution(enc, p);
  std::cout << "stationary:";
  for (std::size_t X = 0; X < rho.rho.size(); ++X) std::cout << ' ' << X + 4 << '=' << rho.rho[X];
  std::cout << "\nexcess over entropy: " << anse::expected_rate(enc, p, rho) - anse::shannon_entropy(p)
            << " bits/symbol\n";
}
