// Copyright 2026 The bilo Authors
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

#ifndef BILO_ERROR_HPP_
#define BILO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace bilo {

enum class ErrorCode {
  kInvalidArgument,
  kNoBracket,
  kMaxIterations,
  kCollapsedToFloor,
  kDegenerateOpponents,
  kVerificationFailed,
  kInnerSolveFailed,
  kInsufficientPoints,
  kShapeMismatch,
  kInfeasibleStart,
  kNotInterior,
  kSchemaError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoBracket: return "NoBracket";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kCollapsedToFloor: return "CollapsedToFloor";
    case ErrorCode::kDegenerateOpponents: return "DegenerateOpponents";
    case ErrorCode::kVerificationFailed: return "VerificationFailed";
    case ErrorCode::kInnerSolveFailed: return "InnerSolveFailed";
    case ErrorCode::kInsufficientPoints: return "InsufficientPoints";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInfeasibleStart: return "InfeasibleStart";
    case ErrorCode::kNotInterior: return "NotInterior";
    case ErrorCode::kSchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace bilo

#endif  // BILO_ERROR_HPP_
