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

#include <string>
#include <vector>

#include "qcrb/estimation.hpp"

namespace qcrb {

/// Diagonal (classical) family together with its score map diag(p_i'/p_i).
struct DiagonalFamily {
    ParametricFamily family;
    FisherMap score;
};

/// States diag(p(theta)) on a one-parameter grid. `p[k]` and `dp[k]` are the
/// probability vector and its derivative at grid point k.
DiagonalFamily classical_diagonal_family(const ParameterGrid &grid, const std::vector<RealVector> &p,
                                         const std::vector<RealVector> &dp,
                                         const Tolerances &tol = default_tolerances());

/// F_gamma(theta) = rho(gamma) rho(theta)^{-1} - 1 for each grid index in `gammas`.
std::vector<FisherMap> barankin_maps(const ParametricFamily &family,
                                     const std::vector<std::size_t> &gammas,
                                     const Tolerances &tol = default_tolerances());

/// Multi-index of partial-derivative orders, one entry per coordinate.
using MultiIndex = std::vector<int>;

/// F_D = (D rho) rho^{-1} with D the monomial given by each multi-index.
/// Derivatives use central tensor-product stencils on the state callback:
/// the grid's `fd_step` for total order one and `higher_order_step`
/// otherwise. Individual orders up to four are supported. When `validate`
/// is set each map is checked against the Fisher conditions and a failure
/// throws ValidationFailed.
std::vector<FisherMap> bhattacharya_maps(const ParametricFamily &family,
                                         const std::vector<MultiIndex> &orders,
                                         const Tolerances &tol = default_tolerances(),
                                         bool validate = true);

/// First-derivative maps d_j rho rho^{-1} built from supplied or
/// finite-difference derivatives.
std::vector<FisherMap> derivative_maps(const ParametricFamily &family,
                                       const Tolerances &tol = default_tolerances(),
                                       bool validate = true);

/// Entries Re Tr rho0^{-1} [pi_i, rho0] [pi_j, rho0].
RealMatrix lie_orbit_information(const DensityOperator &rho0, const std::vector<ComplexMatrix> &generators,
                                 const Tolerances &tol = default_tolerances());

/// Maps theta -> [pi_i, rho(theta)] rho(theta)^{-1}.
std::vector<FisherMap> lie_orbit_maps(const ParametricFamily &family,
                                      const std::vector<ComplexMatrix> &generators,
                                      const Tolerances &tol = default_tolerances());

/// (Lf) I^- (Lf)' where row i of `directional` holds (L_1 f_i, ..., L_d f_i).
RealMatrix lie_orbit_bound(const DensityOperator &rho0, const std::vector<ComplexMatrix> &generators,
                           const RealMatrix &directional,
                           const Tolerances &tol = default_tolerances());

/// Family obeying d_j rho = (L_j rho + rho L_j^dagger) / 2 at every grid point.
struct LiapunovFamily {
    ParametricFamily base;
    std::vector<std::vector<ComplexMatrix>> coefficients; // [point][j]
};

/// rho(theta) proportional to exp(theta . L / 2) rho0 exp(theta . L / 2)^dagger
/// with coefficients L_j - Re Tr rho L_j. Generators must commute pairwise.
LiapunovFamily exponential_family(const ParameterGrid &grid, const DensityOperator &rho0,
                                  const std::vector<ComplexMatrix> &generators,
                                  const Tolerances &tol = default_tolerances());

/// Subtracts i Im Tr rho L_j from each coefficient; leaves the differential
/// equation unchanged.
LiapunovFamily recenter(const LiapunovFamily &family);

struct LiapunovReport {
    bool ok = false;
    double derivative_residual = 0.0; // max operator norm of d_j rho - (L rho + rho L^dagger) / 2
    double centering_defect = 0.0;    // max |Tr rho L_j| after recentering
    double max_shift = 0.0;           // largest |Im Tr rho L_j| removed by recentering
    std::size_t worst_point = 0;
};

LiapunovReport liapunov_validate(const LiapunovFamily &family,
                                 const Tolerances &tol = default_tolerances());

/// The recentered coefficient maps; throws ValidationFailed if the family is inconsistent.
std::vector<FisherMap> liapunov_fisher_maps(const LiapunovFamily &family,
                                            const Tolerances &tol = default_tolerances());

/// Re Tr rho L_i^dagger L_j with recentered coefficients.
RealMatrix liapunov_information(const LiapunovFamily &family, std::size_t point);

/// States rho (x) sigma with coefficients L_j (x) 1 + 1 (x) M_j.
LiapunovFamily liapunov_tensor_product(const LiapunovFamily &a, const LiapunovFamily &b,
                                       const Tolerances &tol = default_tolerances());

struct MixtureFamily {
    std::vector<LiapunovFamily> components;
    std::vector<RealVector> weights;          // [point], one entry per component
    std::vector<RealMatrix> weight_gradients; // [point], components x d

    /// Grid-sampled sum_r p_r rho_r; carries derivatives when every component can be differentiated.
    ParametricFamily mixed_family(const Tolerances &tol = default_tolerances()) const;
};

/// Checks shapes, shared grid and dimension, and that weights lie on the simplex.
MixtureFamily make_mixture(std::vector<LiapunovFamily> components, std::vector<RealVector> weights,
                           std::vector<RealMatrix> weight_gradients,
                           const Tolerances &tol = default_tolerances());

struct MixtureBound {
    RealMatrix psi;      // sum_r p_r Psi_r
    RealMatrix gradient; // d f_i / d theta_j
    CrbReport report;    // cov, bound = gradient psi^- gradient', gap spectrum
};

MixtureBound mixture_bound(const MixtureFamily &mixture, const std::vector<EstimableBinding> &bindings,
                           std::size_t point, const Tolerances &tol = default_tolerances());

} // namespace qcrb
