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

namespace qcrb {

/// Numerical tolerance policy shared by every module.
///
/// Matrix-valued checks (Hermiticity, PSD, clustering, pseudo-inverse cut-off)
/// are relative to the operator norm of the matrix being tested, with an
/// absolute floor of `abs_floor`. The remaining entries are absolute.
struct Tolerances {
    double abs_floor = 1e-12;
    double herm = 1e-10;
    double psd = 1e-9;
    double rcond = 1e-10;
    double cluster = 1e-8; // relative to spectral range
    double trace = 1e-10;
    double imag = 1e-10;
    double completeness = 1e-9;
    double collapse_floor = 1e-12;
    double unbiased = 1e-9;
    double fisher = 1e-9;
    double rank = 1e-9;
    double range = 1e-8;
    double inv_floor = 1e-10;
    double liapunov = 1e-6;
    double centering = 1e-9;
    double weight_floor = 1e-12;
    double mixing_det = 1e-12;
    double bound = 1e-8;

    /// Every tolerance multiplied by `factor`.
    Tolerances scaled(double factor) const;

    /// Effective tolerance for a matrix of operator norm `norm`.
    double relative(double tol, double norm) const;
};

inline const Tolerances &default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

} // namespace qcrb
