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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcrb/quantum_state.hpp"

namespace qcrb {

/// Finite set of parameter points in R^d. Balancedness, estimability and
/// the Fisher map conditions are all taken relative to this grid.
class ParameterGrid {
  public:
    /// `fd_step` drives first-derivative stencils; `higher_order_step` drives
    /// stencils of order two and above, where roundoff grows like eps / h^k.
    ParameterGrid(std::size_t d, std::vector<RealVector> points, double fd_step = 1e-5,
                  double higher_order_step = 1e-2);

    /// One-dimensional grid from scalar points.
    static ParameterGrid line(const std::vector<double> &points, double fd_step = 1e-5,
                              double higher_order_step = 1e-2);

    std::size_t d() const noexcept { return d_; }
    std::size_t size() const noexcept { return points_.size(); }
    const RealVector &point(std::size_t k) const;
    const std::vector<RealVector> &points() const noexcept { return points_; }
    double fd_step() const noexcept { return fd_step_; }
    double higher_order_step() const noexcept { return higher_order_step_; }

    /// Index of `theta`; throws GridPointNotFound.
    std::size_t index_of(const RealVector &theta, double tol = 1e-12) const;

    bool same_points(const ParameterGrid &other, double tol = 1e-12) const;

  private:
    std::size_t d_;
    std::vector<RealVector> points_;
    double fd_step_;
    double higher_order_step_;
};

/// theta -> unnormalised-or-normalised state matrix, used for finite differences.
using StateCallback = std::function<ComplexMatrix(const RealVector &)>;

/// Derivative data per grid point and coordinate: derivatives[k][j] = d rho / d theta_j at point k.
using DerivativeTable = std::vector<std::vector<ComplexMatrix>>;

/// One state per grid point, with optional derivative data. Derivatives are
/// taken verbatim when supplied, otherwise by central differences on the
/// state callback.
class ParametricFamily {
  public:
    ParametricFamily(ParameterGrid grid, std::vector<DensityOperator> states,
                     const Tolerances &tol = default_tolerances());

    static ParametricFamily from_callback(ParameterGrid grid, StateCallback callback,
                                          const Tolerances &tol = default_tolerances());

    /// Attach supplied derivatives; each must be Hermitian and traceless within 1e-9.
    ParametricFamily with_derivatives(DerivativeTable derivatives) const;

    const ParameterGrid &grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return states_.size(); }
    Eigen::Index dim() const noexcept { return states_.front().dim(); }
    const DensityOperator &state(std::size_t k) const;
    const std::vector<DensityOperator> &states() const noexcept { return states_; }

    bool has_callback() const noexcept { return static_cast<bool>(callback_); }
    bool has_supplied_derivatives() const noexcept { return derivatives_.has_value(); }
    bool can_differentiate() const noexcept { return has_callback() || has_supplied_derivatives(); }

    /// State at an arbitrary theta; needs a callback.
    ComplexMatrix evaluate(const RealVector &theta) const;

    /// d rho / d theta_j at grid point k.
    ComplexMatrix derivative(std::size_t k, std::size_t j) const;

  private:
    ParameterGrid grid_;
    std::vector<DensityOperator> states_;
    StateCallback callback_;
    std::optional<DerivativeTable> derivatives_;
};

/// Operator-valued function sampled on the grid; a Fisher map once it passes
/// `validate_fisher_map`.
struct FisherMap {
    std::string label;
    std::vector<ComplexMatrix> values;
};

/// Observable estimator together with the per-point values it should reproduce.
struct EstimableBinding {
    std::string label;
    std::vector<double> f_values;
    Observable estimator;
};

struct UnbiasednessReport {
    bool ok = false;
    double max_defect = 0.0;
    std::size_t worst_point = 0;
};

struct FisherMapReport {
    bool ok = false;
    double centering_defect = 0.0;     // max |Tr rho F|
    double orthogonality_defect = 0.0; // max |Tr rho (F^dagger Z + Z F)|
    std::size_t worst_point = 0;
};

struct CrbReport {
    std::size_t point = 0;
    RealMatrix cov;
    RealMatrix info;
    RealMatrix lambda;
    RealMatrix bound;
    RealVector gap_spectrum; // ascending eigenvalues of cov - bound
    double range_residual = 0.0;
    bool range_ok = true;

    double min_gap() const;
    bool bound_holds(double psd_tol) const { return min_gap() >= -psd_tol; }
};

/// Hilbert-Schmidt orthonormal basis of the balanced observables
/// {X : Tr rho(theta) X = 0 for every grid theta}.
std::vector<Observable> balanced_space_basis(const ParametricFamily &family,
                                             const Tolerances &tol = default_tolerances());

UnbiasednessReport is_unbiased(const Observable &x, const std::vector<double> &f_values,
                               const ParametricFamily &family,
                               const Tolerances &tol = default_tolerances());

/// Checks centering and orthogonality to every balanced basis element.
FisherMapReport validate_fisher_map(const FisherMap &f, const ParametricFamily &family,
                                    const Tolerances &tol = default_tolerances());
FisherMapReport validate_fisher_map(const FisherMap &f, const ParametricFamily &family,
                                    const std::vector<Observable> &balanced_basis,
                                    const Tolerances &tol = default_tolerances());

/// Re Tr rho F^dagger G at grid point k.
double fisher_form(const FisherMap &f, const FisherMap &g, const ParametricFamily &family,
                   std::size_t point);

/// Tr X^dagger rho Y.
Complex sesquilinear_form(const ComplexMatrix &x, const ComplexMatrix &y, const DensityOperator &rho);

RealMatrix information_matrix(const std::vector<FisherMap> &maps, const ParametricFamily &family,
                              std::size_t point);

/// Re Tr rho (F^dagger X + X F) / 2 for an estimator X of the bound function.
double crb_tensor(const Observable &estimator, const FisherMap &f, const ParametricFamily &family,
                  std::size_t point);
double crb_tensor(const EstimableBinding &binding, const FisherMap &f,
                  const ParametricFamily &family, std::size_t point);

RealMatrix lambda_matrix(const std::vector<EstimableBinding> &bindings,
                         const std::vector<FisherMap> &maps, const ParametricFamily &family,
                         std::size_t point);

struct BoundComputation {
    RealMatrix bound;
    double range_residual = 0.0;
    bool range_ok = true;
};

/// Lambda I^- Lambda' together with the check that each row of Lambda lies
/// in the column space of I.
BoundComputation generalized_bound(const RealMatrix &lambda, const RealMatrix &info,
                                   const Tolerances &tol = default_tolerances());

/// Builds a report from an externally computed covariance, information
/// matrix and Lambda, with the bound from `generalized_bound`.
CrbReport assemble_report(std::size_t point, RealMatrix cov, RealMatrix info, RealMatrix lambda,
                          const Tolerances &tol = default_tolerances());

/// The same quantity Lambda I^- Lambda' evaluated from the maps themselves:
/// with v_a = F_a rho^{1/2} and x_i = X_i rho^{1/2} viewed as real vectors
/// under Re Tr A^dagger B, I = V'V and Lambda = X'V, so the bound is the Gram
/// matrix of the projections of x_i onto span{v_a}. The rank cutoff `rcond`
/// applies to the singular values of V rather than of I, which keeps nearly
/// collinear map sets accurate. The range residual is measured against the
/// retained row space of V.
BoundComputation projected_bound(const std::vector<Observable> &estimators, const std::vector<FisherMap> &maps,
                                 const ParametricFamily &family, std::size_t point, const RealMatrix &lambda,
                                 const Tolerances &tol = default_tolerances());

/// Report for a supplied covariance with the bound taken from `projected_bound`
/// on the binding estimators.
CrbReport crb_report(std::size_t point, RealMatrix cov, const std::vector<EstimableBinding> &bindings,
                     const std::vector<FisherMap> &maps, const ParametricFamily &family,
                     const Tolerances &tol = default_tolerances());

CrbReport crb_bound(const std::vector<EstimableBinding> &bindings,
                    const std::vector<FisherMap> &maps, const ParametricFamily &family,
                    std::size_t point, const Tolerances &tol = default_tolerances());

struct BalancedMinimum {
    double value = 0.0;
    Observable optimal;
    RealVector coefficients;
};

/// inf over Z in the balanced space of Var(X + Z | theta).
BalancedMinimum min_variance_over_balanced(const EstimableBinding &binding,
                                           const ParametricFamily &family, std::size_t point,
                                           const Tolerances &tol = default_tolerances());

struct MonotonicityReport {
    bool ok = false;
    double min_eigenvalue = 0.0; // of bound(all) - bound(all but last)
    RealMatrix difference;
};

/// Verifies that appending the last map of `maps` does not decrease the bound.
MonotonicityReport check_monotonicity(const std::vector<EstimableBinding> &bindings,
                                      const std::vector<FisherMap> &maps,
                                      const ParametricFamily &family, std::size_t point,
                                      const Tolerances &tol = default_tolerances());

struct MixingResult {
    std::vector<FisherMap> maps;
    std::vector<double> condition_numbers; // per grid point
};

/// G_j(theta) = sum_r alpha_jr(theta) F_r(theta) with one invertible matrix per grid point.
MixingResult mix_fisher_maps(const std::vector<FisherMap> &maps, const std::vector<RealMatrix> &mixing,
                             const Tolerances &tol = default_tolerances());

} // namespace qcrb
