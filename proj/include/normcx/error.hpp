// Copyright 2026 The Authors.
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
#include <string_view>

namespace normcx {

enum class ErrorKind {
  kNonSquare,
  kSingular,
  kBadDimension,
  kUnknownCone,
  kMissingWeight,
  kNotPseudoCubical,
  kNotBalanced,
  kWrongGrade,
  kGradeTooHigh,
  kInvalidMatroid,
  kInvalidBuildingSet,
  kCertificationFailed,
  kInput,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonSquare: return "NonSquare";
    case ErrorKind::kSingular: return "Singular";
    case ErrorKind::kBadDimension: return "BadDimension";
    case ErrorKind::kUnknownCone: return "UnknownCone";
    case ErrorKind::kMissingWeight: return "MissingWeight";
    case ErrorKind::kNotPseudoCubical: return "NotPseudoCubical";
    case ErrorKind::kNotBalanced: return "NotBalanced";
    case ErrorKind::kWrongGrade: return "WrongGrade";
    case ErrorKind::kGradeTooHigh: return "GradeTooHigh";
    case ErrorKind::kInvalidMatroid: return "InvalidMatroid";
    case ErrorKind::kInvalidBuildingSet: return "InvalidBuildingSet";
    case ErrorKind::kCertificationFailed: return "CertificationFailed";
    case ErrorKind::kInput: return "InputError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above, so
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace normcx
