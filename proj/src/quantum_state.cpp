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

#include "qcrb/quantum_state.hpp"

#include <cmath>
#include <sstream>

namespace qcrb {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char *context) {
    if (a != b) {
        std::ostringstream os;
        os << context << ": dimension " << a << " does not match " << b;
        fail(ErrorCode::DimensionMismatch, os.str());
    }
}

Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    // Tr(AB) without forming the product.
    return (a.transpose().cwiseProduct(b)).sum();
}

} // namespace

Observable::Observable(const ComplexMatrix &matrix, const Tolerances &tol) {
    require_hermitian(matrix, "observable", tol);
    matrix_ = hermitian_part(matrix);
}

DensityOperator::DensityOperator(const ComplexMatrix &matrix, const Tolerances &tol) {
    require_hermitian(matrix, "density operator", tol);
    ComplexMatrix h = hermitian_part(matrix);
    const double trace = h.trace().real();
    if (std::abs(trace - 1.0) > tol.trace) {
        std::ostringstream os;
        os << "density operator trace " << trace << " differs from 1";
        fail(ErrorCode::DomainError, os.str());
    }
    const double gap = psd_gap(h, tol);
    if (gap < -tol.psd) {
        std::ostringstream os;
        os << "density operator has negative eigenvalue " << gap;
        fail(ErrorCode::DomainError, os.str());
    }
    matrix_ = std::move(h);
}

DensityOperator DensityOperator::pure(const ComplexVector &psi) {
    const double norm2 = psi.squaredNorm();
    if (!(norm2 > 0.0)) fail(ErrorCode::DomainError, "pure state from zero vector");
    return DensityOperator(psi * psi.adjoint() / norm2);
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index n) {
    return DensityOperator(ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

bool is_projection(const Observable &x, const Tolerances &tol) {
    const ComplexMatrix &p = x.matrix();
    return max_abs_entry(ComplexMatrix(p * p - p)) <= tol.relative(tol.herm, 1.0) * 10.0;
}

double expectation(const Observable &x, const DensityOperator &rho, const Tolerances &tol) {
    require_same_dim(x.dim(), rho.dim(), "expectation");
    const Complex value = trace_product(rho.matrix(), x.matrix());
    const double scale = std::max(1.0, operator_norm(x.matrix()));
    if (std::abs(value.imag()) > tol.imag * scale) {
        std::ostringstream os;
        os << "Tr rho X has imaginary part " << value.imag();
        fail(ErrorCode::InternalCheckFailed, os.str());
    }
    return value.real();
}

double variance(const Observable &x, const DensityOperator &rho, const Tolerances &tol) {
    const double m = expectation(x, rho, tol);
    const ComplexMatrix centred = x.matrix() - m * ComplexMatrix::Identity(x.dim(), x.dim());
    const double v = trace_product(rho.matrix(), ComplexMatrix(centred * centred)).real();
    return v < 0.0 && v >= -tol.psd ? 0.0 : v;
}

CovarianceMatrix covariance_matrix(const std::vector<Observable> &xs, const DensityOperator &rho,
                                   const Tolerances &tol) {
    if (xs.empty()) fail(ErrorCode::InvalidArgument, "covariance_matrix needs at least one observable");
    const Eigen::Index n = rho.dim();
    std::vector<ComplexMatrix> centred;
    centred.reserve(xs.size());
    for (const auto &x : xs) {
        require_same_dim(x.dim(), n, "covariance_matrix");
        centred.push_back(x.matrix() - expectation(x, rho, tol) * ComplexMatrix::Identity(n, n));
    }
    const auto k = static_cast<Eigen::Index>(xs.size());
    CovarianceMatrix nu(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            const ComplexMatrix sym = centred[i] * centred[j] + centred[j] * centred[i];
            nu(i, j) = 0.5 * trace_product(rho.matrix(), sym).real();
            nu(j, i) = nu(i, j);
        }
    }
    return nu;
}

Observable function_of_observable(const Observable &x, const std::function<double(double)> &phi,
                                  const Tolerances &tol) {
    const SpectralDecomposition sd = spectral_decomposition(x.matrix(), std::nullopt, tol);
    ComplexMatrix out = ComplexMatrix::Zero(x.dim(), x.dim());
    for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k) {
        const double lambda = sd.eigenvalues[k];
        double value = phi(lambda);
        // Roundoff can push a zero eigenvalue slightly negative.
        if (!std::isfinite(value) && lambda < 0.0 && lambda >= -tol.psd) value = phi(0.0);
        if (!std::isfinite(value)) {
            std::ostringstream os;
            os << "function undefined at eigenvalue " << lambda;
            fail(ErrorCode::DomainError, os.str());
        }
        out += value * sd.projectors[k];
    }
    return Observable(out, tol);
}

VarianceProductBound variance_product_bound(const Observable &x, const Observable &y,
                                            const DensityOperator &rho, const Tolerances &tol) {
    require_same_dim(x.dim(), y.dim(), "variance_product_bound");
    require_same_dim(x.dim(), rho.dim(), "variance_product_bound");
    const Eigen::Index n = x.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix xc = x.matrix() - expectation(x, rho, tol) * id;
    const ComplexMatrix yc = y.matrix() - expectation(y, rho, tol) * id;

    VarianceProductBound out;
    out.lhs = variance(x, rho, tol) * variance(y, rho, tol);
    const Complex comm = trace_product(rho.matrix(), commutator(xc, yc)) / Complex(0.0, 2.0);
    const Complex anti = 0.5 * trace_product(rho.matrix(), anticommutator(xc, yc));
    out.commutator_term = comm.real() * comm.real();
    out.anticommutator_term = anti.real() * anti.real();
    out.rhs = out.commutator_term + out.anticommutator_term;
    return out;
}

namespace ops {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexVector basis_vector(Eigen::Index n, Eigen::Index k) {
    ComplexVector v = ComplexVector::Zero(n);
    v(k) = 1.0;
    return v;
}

} // namespace ops

} // namespace qcrb
