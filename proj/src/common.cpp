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

#include <algorithm>
#include <cmath>

#include "qcrb/error.hpp"
#include "qcrb/tolerances.hpp"

namespace qcrb {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::GridPointNotFound: return "GridPointNotFound";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::SingularMixing: return "SingularMixing";
    case ErrorCode::SingularState: return "SingularState";
    case ErrorCode::NonPositiveProbability: return "NonPositiveProbability";
    case ErrorCode::ZeroWeight: return "ZeroWeight";
    case ErrorCode::NotUnbiased: return "NotUnbiased";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InternalCheckFailed: return "InternalCheckFailed";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

Tolerances Tolerances::scaled(double factor) const {
    Tolerances t = *this;
    for (double *p : {&t.abs_floor, &t.herm, &t.psd, &t.rcond, &t.cluster, &t.trace, &t.imag,
                      &t.completeness, &t.collapse_floor, &t.unbiased, &t.fisher, &t.rank,
                      &t.range, &t.inv_floor, &t.liapunov, &t.centering, &t.weight_floor,
                      &t.mixing_det, &t.bound}) {
        *p *= factor;
    }
    return t;
}

double Tolerances::relative(double tol, double norm) const {
    return std::max(tol * norm, abs_floor);
}

} // namespace qcrb
