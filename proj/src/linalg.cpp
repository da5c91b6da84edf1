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

#include "qcrb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace qcrb {

namespace {

std::string describe_shape(const ComplexMatrix &a) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols();
    return os.str();
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigen(const ComplexMatrix &a) {
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(hermitian_part(a));
}

} // namespace

ComplexMatrix SpectralDecomposition::reconstruct() const {
    if (projectors.empty()) return ComplexMatrix();
    ComplexMatrix out = ComplexMatrix::Zero(projectors.front().rows(), projectors.front().cols());
    for (std::size_t k = 0; k < projectors.size(); ++k) out += eigenvalues[k] * projectors[k];
    return out;
}

double operator_norm(const ComplexMatrix &a) {
    if (a.size() == 0) return 0.0;
    const ComplexMatrix gram = a.rows() >= a.cols() ? ComplexMatrix(a.adjoint() * a)
                                                    : ComplexMatrix(a * a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double operator_norm(const RealMatrix &a) { return operator_norm(ComplexMatrix(a.cast<Complex>())); }

double max_abs_entry(const ComplexMatrix &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs_entry(const RealMatrix &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermitian_defect(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix &a) { return a.allFinite(); }

bool is_hermitian(const ComplexMatrix &a, const Tolerances &tol) {
    if (a.rows() != a.cols() || !a.allFinite()) return false;
    return hermitian_defect(a) <= tol.relative(tol.herm, operator_norm(a));
}

void require_hermitian(const ComplexMatrix &a, std::string_view what, const Tolerances &tol) {
    if (a.rows() != a.cols())
        fail(ErrorCode::DimensionMismatch,
             std::string(what) + " must be square, got " + describe_shape(a));
    if (!a.allFinite()) fail(ErrorCode::DomainError, std::string(what) + " has non-finite entries");
    const double defect = hermitian_defect(a);
    const double limit = tol.relative(tol.herm, operator_norm(a));
    if (defect > limit) {
        std::ostringstream os;
        os << what << " is not Hermitian (defect " << defect << " > " << limit << ")";
        fail(ErrorCode::NotHermitian, os.str());
    }
}

ComplexMatrix hermitian_part(const ComplexMatrix &a) { return 0.5 * (a + a.adjoint()); }

SpectralDecomposition spectral_decomposition(const ComplexMatrix &a,
                                             std::optional<double> cluster_tol,
                                             const Tolerances &tol) {
    require_hermitian(a, "spectral_decomposition input", tol);
    SpectralDecomposition out;
    const Eigen::Index n = a.rows();
    if (n == 0) return out;

    const auto es = hermitian_eigen(a);
    const RealVector &values = es.eigenvalues(); // ascending
    const ComplexMatrix &vectors = es.eigenvectors();

    const double range = values(n - 1) - values(0);
    const double threshold = cluster_tol ? *cluster_tol : std::max(tol.cluster * range, tol.abs_floor);

    // Walk from the largest eigenvalue down, chaining neighbours closer than
    // the threshold into one cluster.
    Eigen::Index k = n - 1;
    while (k >= 0) {
        Eigen::Index lo = k;
        while (lo - 1 >= 0 && values(lo) - values(lo - 1) <= threshold) --lo;
        ComplexMatrix projector = ComplexMatrix::Zero(n, n);
        double sum = 0.0;
        for (Eigen::Index i = lo; i <= k; ++i) {
            projector += vectors.col(i) * vectors.col(i).adjoint();
            sum += values(i);
        }
        out.eigenvalues.push_back(sum / static_cast<double>(k - lo + 1));
        out.projectors.push_back(std::move(projector));
        k = lo - 1;
    }
    return out;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix &a, double rcond, const Tolerances &tol) {
    require_hermitian(a, "pseudo_inverse input", tol);
    const Eigen::Index n = a.rows();
    if (n == 0) return ComplexMatrix();
    const auto es = hermitian_eigen(a);
    const RealVector &values = es.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    const double cutoff = std::max(rcond * largest, tol.abs_floor);
    RealVector inverted = RealVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(values(i)) > cutoff) inverted(i) = 1.0 / values(i);
    }
    const ComplexMatrix &v = es.eigenvectors();
    return hermitian_part(v * inverted.cast<Complex>().asDiagonal() * v.adjoint());
}

RealMatrix pseudo_inverse(const RealMatrix &a, double rcond, const Tolerances &tol) {
    return pseudo_inverse(ComplexMatrix(a.cast<Complex>()), rcond, tol).real();
}

double psd_gap(const ComplexMatrix &a, const Tolerances &tol) {
    require_hermitian(a, "psd_gap input", tol);
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double psd_gap(const RealMatrix &a, const Tolerances &tol) {
    return psd_gap(ComplexMatrix(a.cast<Complex>()), tol);
}

RealVector symmetric_eigenvalues(const RealMatrix &a) {
    if (a.size() == 0) return RealVector();
    const RealMatrix sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

ComplexMatrix sqrt_psd(const ComplexMatrix &a, const Tolerances &tol) {
    require_hermitian(a, "sqrt_psd input", tol);
    const auto es = hermitian_eigen(a);
    RealVector values = es.eigenvalues();
    const double limit = tol.relative(tol.psd, operator_norm(a));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -limit) {
            std::ostringstream os;
            os << "square root of matrix with eigenvalue " << values(i);
            fail(ErrorCode::DomainError, os.str());
        }
        values(i) = std::sqrt(std::max(0.0, values(i)));
    }
    const ComplexMatrix &v = es.eigenvectors();
    return hermitian_part(v * values.cast<Complex>().asDiagonal() * v.adjoint());
}

ComplexMatrix inverse_positive_definite(const ComplexMatrix &a, double floor, const Tolerances &tol) {
    require_hermitian(a, "inverse input", tol);
    const auto es = hermitian_eigen(a);
    const RealVector &values = es.eigenvalues();
    if (values.size() > 0 && values(0) <= floor) {
        std::ostringstream os;
        os << "matrix is not invertible (minimum eigenvalue " << values(0) << " <= " << floor << ")";
        fail(ErrorCode::SingularState, os.str());
    }
    const ComplexMatrix &v = es.eigenvectors();
    return hermitian_part(v * values.cwiseInverse().cast<Complex>().asDiagonal() * v.adjoint());
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b + b * a; }

std::vector<ComplexMatrix> hermitian_basis(Eigen::Index n) {
    std::vector<ComplexMatrix> basis;
    basis.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(i, i) = 1.0;
        basis.push_back(std::move(e));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            ComplexMatrix sym = ComplexMatrix::Zero(n, n);
            sym(i, j) = s;
            sym(j, i) = s;
            basis.push_back(std::move(sym));
            ComplexMatrix anti = ComplexMatrix::Zero(n, n);
            anti(i, j) = Complex(0.0, -s);
            anti(j, i) = Complex(0.0, s);
            basis.push_back(std::move(anti));
        }
    }
    return basis;
}

ComplexMatrix orthonormal_complement(const ComplexMatrix &v) {
    const Eigen::Index rows = v.rows();
    const Eigen::Index cols = v.cols();
    if (cols >= rows) return ComplexMatrix(rows, 0);
    Eigen::HouseholderQR<ComplexMatrix> qr(v);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, rows);
    return q.rightCols(rows - cols);
}

Eigen::Index numerical_rank(const ComplexMatrix &a, double threshold) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    const RealVector &s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > threshold) ++rank;
    return rank;
}

} // namespace qcrb
