// Copyright 2026 The selfsort Authors.
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

namespace selfsort {

enum class ErrorKind {
  EmptyTraining,
  InsufficientTraining,
  LengthMismatch,
  RepresentativeDegenerate,
  ZeroSlopeLine,
  UniverseOverflow,
  SpecError,
  TooLargeForOracle,
  DimensionMismatch,
  VersionError,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyTraining: return "EmptyTraining";
    case ErrorKind::InsufficientTraining: return "InsufficientTraining";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::RepresentativeDegenerate: return "RepresentativeDegenerate";
    case ErrorKind::ZeroSlopeLine: return "ZeroSlopeLine";
    case ErrorKind::UniverseOverflow: return "UniverseOverflow";
    case ErrorKind::SpecError: return "SpecError";
    case ErrorKind::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::VersionError: return "VersionError";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace selfsort
