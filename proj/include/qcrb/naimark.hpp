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

#include <vector>

#include "qcrb/estimation.hpp"
#include "qcrb/measurement.hpp"

namespace qcrb {

/// Projection-valued measurement on C^{big_dim} whose compression to the
/// leading `embed_dim` coordinates reproduces a generalized measurement.
struct NaimarkDilation {
    Eigen::Index big_dim = 0;
    Eigen::Index embed_dim = 0;
    std::vector<ComplexMatrix> projectors;
    bool minimal = false;      // span of E(s)(u + 0) is the whole space
    Eigen::Index span_rank = 0;
    bool compressed = false;

    /// rho placed in the leading block, zero elsewhere.
    ComplexMatrix embed(const ComplexMatrix &rho) const;
};

/// Block isometry V with rows T(s)^{1/2}, completed to a unitary W; then
/// E(s) = W^dagger P_s W where P_s projects onto block s. With `compress` the
/// result is restricted to the span of {E(s)(u + 0)}.
NaimarkDilation dilate(const GeneralizedMeasurement &m, bool compress = false,
                       const Tolerances &tol = default_tolerances());

struct DilationDefects {
    double completeness = 0.0;  // || sum E(s) - I ||
    double orthogonality = 0.0; // max || E(s) E(t) - delta_st E(s) ||
    double block = 0.0;         // max entry of top-left block of E(s) minus T(s)
};

DilationDefects dilation_defects(const GeneralizedMeasurement &m, const NaimarkDilation &dilation);

struct PovmUnbiasedness {
    bool ok = false;
    double max_defect = 0.0;
    std::size_t worst_point = 0;
    Observable induced; // sum phi(s) T(s)
};

PovmUnbiasedness povm_is_unbiased(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                                  const ParametricFamily &family, const std::vector<double> &f_values,
                                  const Tolerances &tol = default_tolerances());

/// sum phi(s)^2 p(s) - (sum phi(s) p(s))^2 for an arbitrary state.
double povm_variance_direct(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                            const DensityOperator &rho, const Tolerances &tol = default_tolerances());

/// Variance of sum phi(s) E(s) in the embedded state.
double dilated_variance(const NaimarkDilation &dilation, const std::vector<double> &phi,
                        const DensityOperator &rho, const Tolerances &tol = default_tolerances());

/// Variance of an unbiased (measurement, value) pair at a grid point,
/// cross-checked against the dilated observable. Throws NotUnbiased.
double povm_variance(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                     const ParametricFamily &family, const std::vector<double> &f_values,
                     std::size_t point, const Tolerances &tol = default_tolerances());

/// Entries Tr rho sum_s phi_i(s) phi_j(s) T(s) - f_i f_j.
CovarianceMatrix povm_covariance(const GeneralizedMeasurement &m, const std::vector<std::vector<double>> &phis,
                                 const ParametricFamily &family,
                                 const std::vector<std::vector<double>> &f_values, std::size_t point,
                                 const Tolerances &tol = default_tolerances());

/// Covariance of the measurement estimators against the bound built from
/// their induced observables, one report per grid point.
std::vector<CrbReport> povm_crb_check(const GeneralizedMeasurement &m, const std::vector<std::vector<double>> &phis,
                                      const std::vector<std::vector<double>> &f_values,
                                      const ParametricFamily &family, const std::vector<FisherMap> &maps,
                                      const Tolerances &tol = default_tolerances());

} // namespace qcrb
