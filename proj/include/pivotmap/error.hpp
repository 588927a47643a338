/*
 * Copyright 2026 The pivotmap Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pivotmap {

enum class ErrorKind {
  kParse,         // malformed JSON / JSONL
  kValidation,    // well-formed input violating a domain invariant
  kInvalidInput,  // bad arguments to an algorithm
  kCapacity,      // guard or budget exceeded
  kIo,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kInvalidInput: return "invalid_input";
    case ErrorKind::kCapacity: return "capacity";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

// All library failures are reported through this exception type; `kind()`
// drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& detail) {
  throw Error(kind, detail);
}

inline void require(bool cond, ErrorKind kind, const std::string& detail) {
  if (!cond) fail(kind, detail);
}

}  // namespace pivotmap
