// Copyright 2026 The fbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbf {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateConjecture,
  kSingularDenominator,
  kSingularMZ,
  kNoEquilibrium,
  kDegenerateEquilibrium,
  kMissingMenu,
  kBracketFailure,
  kMomentMatchInfeasible,
  kInsufficientData,
  kZeroVariance,
  kWindowTooLarge,
  kParseError,
  kSchemaError,
  kValueError,
  kIoError,
};

inline constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateConjecture: return "DegenerateConjecture";
    case ErrorCode::kSingularDenominator: return "SingularDenominator";
    case ErrorCode::kSingularMZ: return "SingularMZ";
    case ErrorCode::kNoEquilibrium: return "NoEquilibrium";
    case ErrorCode::kDegenerateEquilibrium: return "DegenerateEquilibrium";
    case ErrorCode::kMissingMenu: return "MissingMenu";
    case ErrorCode::kBracketFailure: return "BracketFailure";
    case ErrorCode::kMomentMatchInfeasible: return "MomentMatchInfeasible";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kWindowTooLarge: return "WindowTooLarge";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kValueError: return "ValueError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

// Every failure in the library is reported through this one exception type;
// callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fbf
