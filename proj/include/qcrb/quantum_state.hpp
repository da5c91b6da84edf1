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
#include <vector>

#include "qcrb/linalg.hpp"

namespace qcrb {

/// Hermitian matrix standing for a real-valued observable. Events
/// (projections) are Observables that also pass `is_projection`.
class Observable {
  public:
    explicit Observable(const ComplexMatrix &matrix, const Tolerances &tol = default_tolerances());

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

  private:
    ComplexMatrix matrix_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
  public:
    explicit DensityOperator(const ComplexMatrix &matrix,
                             const Tolerances &tol = default_tolerances());

    /// |psi><psi| / <psi|psi>.
    static DensityOperator pure(const ComplexVector &psi);
    static DensityOperator maximally_mixed(Eigen::Index n);

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    Eigen::Index dim() const noexcept { return matrix_.rows(); }

  private:
    ComplexMatrix matrix_;
};

/// Symmetrised covariance matrix of a list of observables (k x k, real).
using CovarianceMatrix = RealMatrix;

bool is_projection(const Observable &x, const Tolerances &tol = default_tolerances());

/// Re Tr rho X.
double expectation(const Observable &x, const DensityOperator &rho,
                   const Tolerances &tol = default_tolerances());

/// Tr rho (X - m)^2, clamped to zero when it lies in [-psd_tol, 0).
double variance(const Observable &x, const DensityOperator &rho,
                const Tolerances &tol = default_tolerances());

CovarianceMatrix covariance_matrix(const std::vector<Observable> &xs, const DensityOperator &rho,
                                   const Tolerances &tol = default_tolerances());

/// sum_lambda phi(lambda) E_lambda over the spectral resolution of X.
Observable function_of_observable(const Observable &x, const std::function<double(double)> &phi,
                                  const Tolerances &tol = default_tolerances());

struct VarianceProductBound {
    double lhs = 0.0;              // Var(X) Var(Y)
    double rhs = 0.0;              // commutator_term + anticommutator_term
    double commutator_term = 0.0;  // {Tr rho [X~, Y~] / 2i}^2
    double anticommutator_term = 0.0; // {Tr rho {X~, Y~} / 2}^2
};

/// Schrodinger-Robertson variance-product bound with mean-centred X~, Y~.
VarianceProductBound variance_product_bound(const Observable &x, const Observable &y,
                                            const DensityOperator &rho,
                                            const Tolerances &tol = default_tolerances());

/// Common qubit operators.
namespace ops {
ComplexMatrix identity(Eigen::Index n);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexVector basis_vector(Eigen::Index n, Eigen::Index k);
} // namespace ops

} // namespace qcrb
