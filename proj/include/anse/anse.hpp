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

// Umbrella header.

#pragma once

#include "anse/analysis.hpp"
#include "anse/bignum.hpp"
#include "anse/bitstream.hpp"
#include "anse/codec.hpp"
#include "anse/container.hpp"
#include "anse/crypto.hpp"
#include "anse/error.hpp"
#include "anse/freq.hpp"
#include "anse/huffman.hpp"
#include "anse/spread.hpp"
#include "anse/tables.hpp"
