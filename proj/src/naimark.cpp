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

#include "qcrb/naimark.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace qcrb {

namespace {

void require_values(const GeneralizedMeasurement &m, const std::vector<double> &phi) {
    if (phi.size() != m.size()) {
        std::ostringstream os;
        os << "value function has " << phi.size() << " entries for " << m.size() << " outcomes";
        fail(ErrorCode::DimensionMismatch, os.str());
    }
}

ComplexMatrix induced_matrix(const GeneralizedMeasurement &m, const std::vector<double> &phi) {
    ComplexMatrix x = ComplexMatrix::Zero(m.dim(), m.dim());
    for (std::size_t s = 0; s < m.size(); ++s) x += phi[s] * m.effect(s);
    return hermitian_part(x);
}

// Orthonormal basis of span([E_n | K]) whose first n columns are e_1..e_n.
ComplexMatrix span_basis(const ComplexMatrix &k, Eigen::Index n, Eigen::Index rank) {
    const Eigen::Index big = k.rows();
    ComplexMatrix rest = k;
    rest.topRows(n).setZero();
    Eigen::JacobiSVD<ComplexMatrix> svd(rest, Eigen::ComputeThinU);
    ComplexMatrix q = ComplexMatrix::Zero(big, rank);
    q.topLeftCorner(n, n).setIdentity();
    q.rightCols(rank - n) = svd.matrixU().leftCols(rank - n);
    return q;
}

} // namespace

ComplexMatrix NaimarkDilation::embed(const ComplexMatrix &rho) const {
    if (rho.rows() != embed_dim || rho.cols() != embed_dim)
        fail(ErrorCode::DimensionMismatch, "state dimension does not match the dilation");
    ComplexMatrix out = ComplexMatrix::Zero(big_dim, big_dim);
    out.topLeftCorner(embed_dim, embed_dim) = rho;
    return out;
}

NaimarkDilation dilate(const GeneralizedMeasurement &m, bool compress, const Tolerances &tol) {
    require_valid(m, tol);
    const Eigen::Index n = m.dim();
    const auto outcomes = static_cast<Eigen::Index>(m.size());
    const Eigen::Index big = n * outcomes;

    ComplexMatrix v(big, n);
    Eigen::Index span_rank = 0;
    for (Eigen::Index s = 0; s < outcomes; ++s) {
        const ComplexMatrix t = m.effect(static_cast<std::size_t>(s));
        v.middleRows(s * n, n) = sqrt_psd(t, tol);
        span_rank += numerical_rank(t, tol.relative(tol.rank, operator_norm(t)));
    }
    ComplexMatrix w(big, big);
    w.leftCols(n) = v;
    if (big > n) w.rightCols(big - n) = orthonormal_complement(v);

    NaimarkDilation out;
    out.big_dim = big;
    out.embed_dim = n;
    out.span_rank = span_rank;
    out.minimal = span_rank == big;
    for (Eigen::Index s = 0; s < outcomes; ++s) {
        const ComplexMatrix rows = w.middleRows(s * n, n);
        out.projectors.push_back(hermitian_part(rows.adjoint() * rows));
    }
    if (compress && !out.minimal) {
        ComplexMatrix k(big, big);
        for (Eigen::Index s = 0; s < outcomes; ++s)
            k.middleCols(s * n, n) = out.projectors[static_cast<std::size_t>(s)].leftCols(n);
        const ComplexMatrix q = span_basis(k, n, span_rank);
        for (auto &e : out.projectors) e = hermitian_part(q.adjoint() * e * q);
        out.big_dim = span_rank;
        out.minimal = true;
        out.compressed = true;
    }
    return out;
}

DilationDefects dilation_defects(const GeneralizedMeasurement &m, const NaimarkDilation &dilation) {
    if (dilation.projectors.size() != m.size())
        fail(ErrorCode::DimensionMismatch, "dilation and measurement have different outcome counts");
    DilationDefects d;
    const Eigen::Index big = dilation.big_dim;
    const Eigen::Index n = dilation.embed_dim;
    ComplexMatrix sum = ComplexMatrix::Zero(big, big);
    for (std::size_t s = 0; s < m.size(); ++s) {
        const ComplexMatrix &e = dilation.projectors[s];
        sum += e;
        for (std::size_t t = 0; t < m.size(); ++t) {
            ComplexMatrix prod = e * dilation.projectors[t];
            if (s == t) prod -= e;
            d.orthogonality = std::max(d.orthogonality, operator_norm(prod));
        }
        d.block = std::max(d.block, max_abs_entry(ComplexMatrix(e.topLeftCorner(n, n) - m.effect(s))));
    }
    d.completeness = operator_norm(ComplexMatrix(sum - ComplexMatrix::Identity(big, big)));
    return d;
}

PovmUnbiasedness povm_is_unbiased(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                                  const ParametricFamily &family, const std::vector<double> &f_values,
                                  const Tolerances &tol) {
    require_values(m, phi);
    if (m.dim() != family.dim()) fail(ErrorCode::DimensionMismatch, "measurement and family dimensions differ");
    if (f_values.size() != family.size())
        fail(ErrorCode::DimensionMismatch, "one function value per grid point is required");
    PovmUnbiasedness out{false, 0.0, 0, Observable(induced_matrix(m, phi), tol)};
    for (std::size_t k = 0; k < family.size(); ++k) {
        const OutcomeDistribution dist = outcome_probabilities(m, family.state(k), tol);
        double mean = 0.0;
        for (std::size_t s = 0; s < m.size(); ++s) mean += phi[s] * dist.probabilities[s];
        const double defect = std::abs(mean - f_values[k]);
        if (defect > out.max_defect) {
            out.max_defect = defect;
            out.worst_point = k;
        }
    }
    out.ok = out.max_defect <= tol.unbiased;
    return out;
}

double povm_variance_direct(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                            const DensityOperator &rho, const Tolerances &tol) {
    require_values(m, phi);
    return measurement_mean_variance(m, phi, rho, tol).variance;
}

double dilated_variance(const NaimarkDilation &dilation, const std::vector<double> &phi,
                        const DensityOperator &rho, const Tolerances &tol) {
    if (phi.size() != dilation.projectors.size())
        fail(ErrorCode::DimensionMismatch, "value function and dilation outcome counts differ");
    ComplexMatrix x = ComplexMatrix::Zero(dilation.big_dim, dilation.big_dim);
    for (std::size_t s = 0; s < phi.size(); ++s) x += phi[s] * dilation.projectors[s];
    return variance(Observable(x, tol), DensityOperator(dilation.embed(rho.matrix()), tol), tol);
}

double povm_variance(const GeneralizedMeasurement &m, const std::vector<double> &phi,
                     const ParametricFamily &family, const std::vector<double> &f_values, std::size_t point,
                     const Tolerances &tol) {
    if (point >= family.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    const PovmUnbiasedness u = povm_is_unbiased(m, phi, family, f_values, tol);
    if (!u.ok) {
        std::ostringstream os;
        os << "measurement estimator is biased (defect " << u.max_defect << " at grid point " << u.worst_point
           << ")";
        fail(ErrorCode::NotUnbiased, os.str());
    }
    const DensityOperator &rho = family.state(point);
    double second = 0.0;
    const OutcomeDistribution dist = outcome_probabilities(m, rho, tol);
    for (std::size_t s = 0; s < m.size(); ++s) second += phi[s] * phi[s] * dist.probabilities[s];
    const double value = std::max(0.0, second - f_values[point] * f_values[point]);

    const double dilated = dilated_variance(dilate(m, false, tol), phi, rho, tol);
    double scale = 1.0;
    for (const double p : phi) scale = std::max(scale, p * p);
    if (std::abs(dilated - value) > tol.herm * scale) {
        std::ostringstream os;
        os << "dilated variance " << dilated << " disagrees with the direct value " << value;
        fail(ErrorCode::InternalCheckFailed, os.str());
    }
    return value;
}

CovarianceMatrix povm_covariance(const GeneralizedMeasurement &m, const std::vector<std::vector<double>> &phis,
                                 const ParametricFamily &family,
                                 const std::vector<std::vector<double>> &f_values, std::size_t point,
                                 const Tolerances &tol) {
    if (phis.size() != f_values.size())
        fail(ErrorCode::DimensionMismatch, "one function per value vector is required");
    if (point >= family.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    for (std::size_t i = 0; i < phis.size(); ++i) {
        const PovmUnbiasedness u = povm_is_unbiased(m, phis[i], family, f_values[i], tol);
        if (!u.ok) {
            std::ostringstream os;
            os << "measurement estimator " << i << " is biased (defect " << u.max_defect << " at grid point "
               << u.worst_point << ")";
            fail(ErrorCode::NotUnbiased, os.str());
        }
    }
    const OutcomeDistribution dist = outcome_probabilities(m, family.state(point), tol);
    const auto k = static_cast<Eigen::Index>(phis.size());
    CovarianceMatrix cov(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i; j < k; ++j) {
            const auto &a = phis[static_cast<std::size_t>(i)];
            const auto &b = phis[static_cast<std::size_t>(j)];
            double second = 0.0;
            for (std::size_t s = 0; s < m.size(); ++s) second += a[s] * b[s] * dist.probabilities[s];
            cov(i, j) = second - f_values[static_cast<std::size_t>(i)][point] *
                                     f_values[static_cast<std::size_t>(j)][point];
            cov(j, i) = cov(i, j);
        }
    return cov;
}

std::vector<CrbReport> povm_crb_check(const GeneralizedMeasurement &m, const std::vector<std::vector<double>> &phis,
                                      const std::vector<std::vector<double>> &f_values,
                                      const ParametricFamily &family, const std::vector<FisherMap> &maps,
                                      const Tolerances &tol) {
    if (phis.empty()) fail(ErrorCode::InvalidArgument, "at least one measurement estimator is required");
    std::vector<EstimableBinding> bindings;
    for (std::size_t i = 0; i < phis.size(); ++i) {
        require_values(m, phis[i]);
        bindings.push_back(EstimableBinding{"phi" + std::to_string(i), f_values.at(i),
                                            Observable(induced_matrix(m, phis[i]), tol)});
    }
    std::vector<CrbReport> reports;
    for (std::size_t k = 0; k < family.size(); ++k) {
        CovarianceMatrix cov = povm_covariance(m, phis, family, f_values, k, tol);
        reports.push_back(crb_report(k, std::move(cov), bindings, maps, family, tol));
    }
    return reports;
}

} // namespace qcrb
