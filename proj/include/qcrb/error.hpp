// Copyright 2026 The qcrb Authors
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

namespace qcrb {

enum class ErrorCode {
    NotHermitian,
    DimensionMismatch,
    DomainError,
    InvalidMeasurement,
    ZeroProbabilityOutcome,
    GridPointNotFound,
    GridMismatch,
    SingularMixing,
    SingularState,
    NonPositiveProbability,
    ZeroWeight,
    NotUnbiased,
    ValidationFailed,
    InvalidArgument,
    InternalCheckFailed,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets
/// callers branch without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string &what);

} // namespace qcrb
