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

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qcrb/error.hpp"
#include "qcrb/tolerances.hpp"

namespace qcrb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Spectral resolution A = sum_k eigenvalues[k] * projectors[k] of a
/// Hermitian matrix. Eigenvalues are distinct after clustering and sorted in
/// descending order.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<ComplexMatrix> projectors;

    ComplexMatrix reconstruct() const;
};

/// Largest singular value.
double operator_norm(const ComplexMatrix &a);
double operator_norm(const RealMatrix &a);

/// max |a(i,j)|.
double max_abs_entry(const ComplexMatrix &a);
double max_abs_entry(const RealMatrix &a);

/// max_{i,j} |a(i,j) - conj(a(j,i))|; infinity for non-square input.
double hermitian_defect(const ComplexMatrix &a);

bool all_finite(const ComplexMatrix &a);

bool is_hermitian(const ComplexMatrix &a, const Tolerances &tol = default_tolerances());

/// Throws NotHermitian (or DimensionMismatch for non-square input).
void require_hermitian(const ComplexMatrix &a, std::string_view what,
                       const Tolerances &tol = default_tolerances());

/// (a + a^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix &a);

/// Eigenvalues within `cluster_tol` of their neighbour are merged into a
/// single projector. Without an explicit `cluster_tol` the threshold is
/// `tol.cluster` times the spectral range, floored at `tol.abs_floor`.
SpectralDecomposition spectral_decomposition(const ComplexMatrix &a,
                                             std::optional<double> cluster_tol = std::nullopt,
                                             const Tolerances &tol = default_tolerances());

/// Moore-Penrose inverse of a Hermitian matrix through its eigen-decomposition.
/// Eigenvalues with |lambda| <= rcond * max|lambda| are treated as zero.
ComplexMatrix pseudo_inverse(const ComplexMatrix &a, double rcond = default_tolerances().rcond,
                             const Tolerances &tol = default_tolerances());
RealMatrix pseudo_inverse(const RealMatrix &a, double rcond = default_tolerances().rcond,
                          const Tolerances &tol = default_tolerances());

/// Minimum eigenvalue. A is PSD when psd_gap(A) >= -psd_tol.
double psd_gap(const ComplexMatrix &a, const Tolerances &tol = default_tolerances());
double psd_gap(const RealMatrix &a, const Tolerances &tol = default_tolerances());

/// Ascending eigenvalues of a real symmetric matrix (symmetrised first).
RealVector symmetric_eigenvalues(const RealMatrix &a);

/// Square root of a PSD matrix; eigenvalues in [-psd_tol, 0) are clamped to
/// zero, anything more negative raises DomainError.
ComplexMatrix sqrt_psd(const ComplexMatrix &a, const Tolerances &tol = default_tolerances());

/// Inverse of a positive definite matrix. Raises SingularState when the
/// smallest eigenvalue is not above `floor`.
ComplexMatrix inverse_positive_definite(const ComplexMatrix &a, double floor,
                                        const Tolerances &tol = default_tolerances());

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b);

/// Hilbert-Schmidt orthonormal basis of the n*n-dimensional real space of
/// n x n Hermitian matrices: diagonal units first, then for each i < j the
/// symmetric and antisymmetric off-diagonal pairs.
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index n);

/// Orthonormal basis (as columns) of the orthogonal complement of the column
/// space of `v`, which must have orthonormal columns.
ComplexMatrix orthonormal_complement(const ComplexMatrix &v);

/// Column rank by singular values above `threshold`.
Eigen::Index numerical_rank(const ComplexMatrix &a, double threshold);

} // namespace qcrb
