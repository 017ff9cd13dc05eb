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

#pragma once

#include <stdexcept>
#include <string>

namespace anse {

enum class ErrorCode {
  kInvalidInput,
  kCapacity,
  kTruncatedStream,
  kFormat,
  kCorruptContainer,
  kNumerical,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kCapacity: return "capacity exceeded";
    case ErrorCode::kTruncatedStream: return "truncated stream";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kCorruptContainer: return "corrupt container";
    case ErrorCode::kNumerical: return "numerical error";
  }
  return "unknown error";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace detail

}  // namespace anse
