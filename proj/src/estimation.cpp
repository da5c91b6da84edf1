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

#include "qcrb/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace qcrb {

namespace {

Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

void require_point(const ParametricFamily &family, std::size_t point) {
    if (point >= family.size()) {
        std::ostringstream os;
        os << "grid point index " << point << " outside grid of size " << family.size();
        fail(ErrorCode::GridPointNotFound, os.str());
    }
}

void require_map_shape(const FisherMap &f, const ParametricFamily &family) {
    if (f.values.size() != family.size()) {
        std::ostringstream os;
        os << "Fisher map '" << f.label << "' has " << f.values.size() << " samples for "
           << family.size() << " grid points";
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    for (const auto &v : f.values)
        if (v.rows() != family.dim() || v.cols() != family.dim())
            fail(ErrorCode::DimensionMismatch, "Fisher map '" + f.label + "' has wrong matrix size");
}

} // namespace

// ---------------------------------------------------------------------------
// ParameterGrid

ParameterGrid::ParameterGrid(std::size_t d, std::vector<RealVector> points, double fd_step,
                             double higher_order_step)
    : d_(d), points_(std::move(points)), fd_step_(fd_step), higher_order_step_(higher_order_step) {
    if (d_ == 0) fail(ErrorCode::InvalidArgument, "parameter dimension must be positive");
    if (points_.empty()) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
    if (!(fd_step_ > 0.0) || !(higher_order_step_ > 0.0))
        fail(ErrorCode::InvalidArgument, "finite-difference steps must be positive");
    for (const auto &p : points_) {
        if (static_cast<std::size_t>(p.size()) != d_)
            fail(ErrorCode::DimensionMismatch, "grid point has wrong dimension");
        if (!p.allFinite()) fail(ErrorCode::DomainError, "grid point has non-finite coordinates");
    }
    for (std::size_t a = 0; a < points_.size(); ++a)
        for (std::size_t b = a + 1; b < points_.size(); ++b)
            if ((points_[a] - points_[b]).cwiseAbs().maxCoeff() == 0.0)
                fail(ErrorCode::InvalidArgument, "grid points must be pairwise distinct");
}

ParameterGrid ParameterGrid::line(const std::vector<double> &points, double fd_step,
                                  double higher_order_step) {
    std::vector<RealVector> pts;
    pts.reserve(points.size());
    for (const double p : points) pts.push_back(RealVector::Constant(1, p));
    return ParameterGrid(1, std::move(pts), fd_step, higher_order_step);
}

const RealVector &ParameterGrid::point(std::size_t k) const {
    if (k >= points_.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    return points_[k];
}

std::size_t ParameterGrid::index_of(const RealVector &theta, double tol) const {
    if (static_cast<std::size_t>(theta.size()) == d_) {
        for (std::size_t k = 0; k < points_.size(); ++k)
            if ((points_[k] - theta).cwiseAbs().maxCoeff() <= tol) return k;
    }
    std::ostringstream os;
    os << "theta = (" << theta.transpose() << ") is not a grid point";
    fail(ErrorCode::GridPointNotFound, os.str());
}

bool ParameterGrid::same_points(const ParameterGrid &other, double tol) const {
    if (other.d_ != d_ || other.points_.size() != points_.size()) return false;
    for (std::size_t k = 0; k < points_.size(); ++k)
        if ((points_[k] - other.points_[k]).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// ParametricFamily

ParametricFamily::ParametricFamily(ParameterGrid grid, std::vector<DensityOperator> states,
                                   const Tolerances &)
    : grid_(std::move(grid)), states_(std::move(states)) {
    if (states_.size() != grid_.size())
        fail(ErrorCode::DimensionMismatch, "one state per grid point is required");
    const Eigen::Index n = states_.front().dim();
    for (const auto &s : states_)
        if (s.dim() != n) fail(ErrorCode::DimensionMismatch, "family states differ in dimension");
}

ParametricFamily ParametricFamily::from_callback(ParameterGrid grid, StateCallback callback,
                                                 const Tolerances &tol) {
    std::vector<DensityOperator> states;
    states.reserve(grid.size());
    for (const auto &p : grid.points()) states.emplace_back(callback(p), tol);
    ParametricFamily family(std::move(grid), std::move(states), tol);
    family.callback_ = std::move(callback);
    return family;
}

ParametricFamily ParametricFamily::with_derivatives(DerivativeTable derivatives) const {
    if (derivatives.size() != size())
        fail(ErrorCode::DimensionMismatch, "derivative table needs one row per grid point");
    for (std::size_t k = 0; k < derivatives.size(); ++k) {
        if (derivatives[k].size() != grid_.d())
            fail(ErrorCode::DimensionMismatch, "derivative table needs one entry per coordinate");
        for (auto &m : derivatives[k]) {
            if (m.rows() != dim() || m.cols() != dim())
                fail(ErrorCode::DimensionMismatch, "derivative matrix has wrong size");
            require_hermitian(m, "state derivative");
            if (std::abs(m.trace()) > 1e-9) {
                std::ostringstream os;
                os << "state derivative at grid point " << k << " has trace " << m.trace().real();
                fail(ErrorCode::ValidationFailed, os.str());
            }
            m = hermitian_part(m);
        }
    }
    ParametricFamily out = *this;
    out.derivatives_ = std::move(derivatives);
    return out;
}

const DensityOperator &ParametricFamily::state(std::size_t k) const {
    if (k >= states_.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    return states_[k];
}

ComplexMatrix ParametricFamily::evaluate(const RealVector &theta) const {
    if (!callback_) fail(ErrorCode::InvalidArgument, "family has no state callback");
    return callback_(theta);
}

ComplexMatrix ParametricFamily::derivative(std::size_t k, std::size_t j) const {
    if (k >= size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    if (j >= grid_.d()) fail(ErrorCode::InvalidArgument, "coordinate index out of range");
    if (derivatives_) return (*derivatives_)[k][j];
    if (!callback_)
        fail(ErrorCode::InvalidArgument,
             "family has neither supplied derivatives nor a state callback");
    const double h = grid_.fd_step();
    RealVector plus = grid_.point(k);
    RealVector minus = plus;
    plus(static_cast<Eigen::Index>(j)) += h;
    minus(static_cast<Eigen::Index>(j)) -= h;
    return hermitian_part((callback_(plus) - callback_(minus)) / (2.0 * h));
}

// ---------------------------------------------------------------------------
// Reports

double CrbReport::min_gap() const {
    return gap_spectrum.size() == 0 ? 0.0 : gap_spectrum.minCoeff();
}

// ---------------------------------------------------------------------------
// Balanced observables, unbiasedness, Fisher map conditions

std::vector<Observable> balanced_space_basis(const ParametricFamily &family, const Tolerances &tol) {
    const Eigen::Index n = family.dim();
    const std::vector<ComplexMatrix> herm = hermitian_basis(n);
    const auto unknowns = static_cast<Eigen::Index>(herm.size());
    const auto constraints = static_cast<Eigen::Index>(family.size());

    // Row k: the linear functional X -> Tr rho(theta_k) X in Hermitian coordinates.
    RealMatrix c(constraints, unknowns);
    for (Eigen::Index k = 0; k < constraints; ++k)
        for (Eigen::Index a = 0; a < unknowns; ++a)
            c(k, a) = trace_product(family.state(static_cast<std::size_t>(k)).matrix(),
                                    herm[static_cast<std::size_t>(a)])
                          .real();

    Eigen::JacobiSVD<RealMatrix> svd(c, Eigen::ComputeFullV);
    const RealVector &sigma = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > tol.rank) ++rank;

    std::vector<Observable> basis;
    const RealMatrix &v = svd.matrixV();
    for (Eigen::Index col = rank; col < unknowns; ++col) {
        ComplexMatrix z = ComplexMatrix::Zero(n, n);
        for (Eigen::Index a = 0; a < unknowns; ++a) z += v(a, col) * herm[static_cast<std::size_t>(a)];
        basis.emplace_back(z, tol);
    }
    return basis;
}

UnbiasednessReport is_unbiased(const Observable &x, const std::vector<double> &f_values,
                               const ParametricFamily &family, const Tolerances &tol) {
    if (f_values.size() != family.size())
        fail(ErrorCode::DimensionMismatch, "one function value per grid point is required");
    if (x.dim() != family.dim()) fail(ErrorCode::DimensionMismatch, "estimator dimension mismatch");
    UnbiasednessReport report;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const double defect = std::abs(expectation(x, family.state(k), tol) - f_values[k]);
        if (defect > report.max_defect) {
            report.max_defect = defect;
            report.worst_point = k;
        }
    }
    report.ok = report.max_defect <= tol.unbiased;
    return report;
}

FisherMapReport validate_fisher_map(const FisherMap &f, const ParametricFamily &family,
                                    const Tolerances &tol) {
    return validate_fisher_map(f, family, balanced_space_basis(family, tol), tol);
}

FisherMapReport validate_fisher_map(const FisherMap &f, const ParametricFamily &family,
                                    const std::vector<Observable> &balanced_basis,
                                    const Tolerances &tol) {
    require_map_shape(f, family);
    FisherMapReport report;
    double worst = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
        const ComplexMatrix &rho = family.state(k).matrix();
        const ComplexMatrix &fk = f.values[k];
        const double centering = std::abs(trace_product(rho, fk));
        report.centering_defect = std::max(report.centering_defect, centering);
        double orth = 0.0;
        for (const auto &z : balanced_basis) {
            const ComplexMatrix sym = fk.adjoint() * z.matrix() + z.matrix() * fk;
            orth = std::max(orth, std::abs(trace_product(rho, sym)));
        }
        report.orthogonality_defect = std::max(report.orthogonality_defect, orth);
        if (std::max(centering, orth) > worst) {
            worst = std::max(centering, orth);
            report.worst_point = k;
        }
    }
    report.ok = report.centering_defect <= tol.fisher && report.orthogonality_defect <= tol.fisher;
    return report;
}

// ---------------------------------------------------------------------------
// Forms and tensors

double fisher_form(const FisherMap &f, const FisherMap &g, const ParametricFamily &family,
                   std::size_t point) {
    require_point(family, point);
    require_map_shape(f, family);
    require_map_shape(g, family);
    const ComplexMatrix &rho = family.state(point).matrix();
    return trace_product(rho, ComplexMatrix(f.values[point].adjoint() * g.values[point])).real();
}

Complex sesquilinear_form(const ComplexMatrix &x, const ComplexMatrix &y, const DensityOperator &rho) {
    if (x.rows() != rho.dim() || y.rows() != rho.dim() || x.cols() != rho.dim() ||
        y.cols() != rho.dim())
        fail(ErrorCode::DimensionMismatch, "sesquilinear_form: dimension mismatch");
    return trace_product(x.adjoint(), ComplexMatrix(rho.matrix() * y));
}

RealMatrix information_matrix(const std::vector<FisherMap> &maps, const ParametricFamily &family,
                              std::size_t point) {
    const auto n = static_cast<Eigen::Index>(maps.size());
    RealMatrix info(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            info(i, j) = fisher_form(maps[static_cast<std::size_t>(i)], maps[static_cast<std::size_t>(j)],
                                     family, point);
            info(j, i) = info(i, j);
        }
    }
    return info;
}

double crb_tensor(const Observable &estimator, const FisherMap &f, const ParametricFamily &family,
                  std::size_t point) {
    require_point(family, point);
    require_map_shape(f, family);
    if (estimator.dim() != family.dim()) fail(ErrorCode::DimensionMismatch, "estimator dimension mismatch");
    const ComplexMatrix &rho = family.state(point).matrix();
    const ComplexMatrix &fk = f.values[point];
    const ComplexMatrix &x = estimator.matrix();
    const Complex value = 0.5 * trace_product(rho, ComplexMatrix(fk.adjoint() * x + x * fk));
    return value.real();
}

double crb_tensor(const EstimableBinding &binding, const FisherMap &f,
                  const ParametricFamily &family, std::size_t point) {
    return crb_tensor(binding.estimator, f, family, point);
}

RealMatrix lambda_matrix(const std::vector<EstimableBinding> &bindings,
                         const std::vector<FisherMap> &maps, const ParametricFamily &family,
                         std::size_t point) {
    RealMatrix lambda(static_cast<Eigen::Index>(bindings.size()), static_cast<Eigen::Index>(maps.size()));
    for (std::size_t i = 0; i < bindings.size(); ++i)
        for (std::size_t j = 0; j < maps.size(); ++j)
            lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                crb_tensor(bindings[i], maps[j], family, point);
    return lambda;
}

// ---------------------------------------------------------------------------
// Bounds

BoundComputation generalized_bound(const RealMatrix &lambda, const RealMatrix &info,
                                   const Tolerances &tol) {
    BoundComputation out;
    if (info.size() == 0) {
        out.bound = RealMatrix::Zero(lambda.rows(), lambda.rows());
        return out;
    }
    if (lambda.cols() != info.rows() || info.rows() != info.cols())
        fail(ErrorCode::DimensionMismatch, "lambda and information matrix shapes disagree");
    const RealMatrix sym = 0.5 * (info + info.transpose());
    const RealMatrix inv = pseudo_inverse(sym, tol.rcond, tol);
    const RealMatrix bound = lambda * inv * lambda.transpose();
    out.bound = 0.5 * (bound + bound.transpose());

    // Rows of Lambda must lie in the column space of I: Lambda (1 - I I^-) = 0.
    const RealMatrix projector = sym * inv;
    const RealMatrix residual = lambda - lambda * projector;
    out.range_residual = residual.size() == 0 ? 0.0 : residual.norm();
    const double scale = lambda.size() == 0 ? 0.0 : lambda.norm();
    out.range_ok = out.range_residual <= std::max(tol.range * scale, tol.abs_floor);
    return out;
}

CrbReport assemble_report(std::size_t point, RealMatrix cov, RealMatrix info, RealMatrix lambda,
                          const Tolerances &tol) {
    CrbReport report;
    report.point = point;
    const BoundComputation b = generalized_bound(lambda, info, tol);
    report.cov = std::move(cov);
    report.info = std::move(info);
    report.lambda = std::move(lambda);
    report.bound = b.bound;
    report.range_residual = b.range_residual;
    report.range_ok = b.range_ok;
    report.gap_spectrum = symmetric_eigenvalues(RealMatrix(report.cov - report.bound));
    return report;
}

namespace {

// Real coordinates of a complex matrix under Re Tr A^dagger B.
void write_real_vector(const ComplexMatrix &a, RealMatrix &out, Eigen::Index column) {
    const Eigen::Index size = a.size();
    for (Eigen::Index i = 0; i < size; ++i) {
        out(i, column) = a.data()[i].real();
        out(size + i, column) = a.data()[i].imag();
    }
}

} // namespace

BoundComputation projected_bound(const std::vector<Observable> &estimators, const std::vector<FisherMap> &maps,
                                 const ParametricFamily &family, std::size_t point, const RealMatrix &lambda,
                                 const Tolerances &tol) {
    require_point(family, point);
    const auto m = static_cast<Eigen::Index>(estimators.size());
    const auto r = static_cast<Eigen::Index>(maps.size());
    if (lambda.rows() != m || lambda.cols() != r)
        fail(ErrorCode::DimensionMismatch, "lambda shape does not match estimators and maps");
    BoundComputation out;
    out.bound = RealMatrix::Zero(m, m);
    if (r == 0) return out;

    const Eigen::Index n = family.dim();
    const ComplexMatrix root = sqrt_psd(family.state(point).matrix(), tol);
    RealMatrix v(2 * n * n, r);
    for (Eigen::Index a = 0; a < r; ++a) {
        const ComplexMatrix &f = maps[static_cast<std::size_t>(a)].values.at(point);
        if (f.rows() != n || f.cols() != n) fail(ErrorCode::DimensionMismatch, "Fisher map dimension mismatch");
        write_real_vector(ComplexMatrix(f * root), v, a);
    }
    RealMatrix x(2 * n * n, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Observable &e = estimators[static_cast<std::size_t>(i)];
        if (e.dim() != n) fail(ErrorCode::DimensionMismatch, "estimator dimension mismatch");
        write_real_vector(ComplexMatrix(e.matrix() * root), x, i);
    }

    const Eigen::JacobiSVD<RealMatrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector &sigma = svd.singularValues();
    const double cutoff = std::max(tol.rcond * (sigma.size() > 0 ? sigma(0) : 0.0), tol.abs_floor);
    Eigen::Index kept = 0;
    while (kept < sigma.size() && sigma(kept) > cutoff) ++kept;

    const RealMatrix coords = svd.matrixU().leftCols(kept).transpose() * x;
    const RealMatrix bound = coords.transpose() * coords;
    out.bound = 0.5 * (bound + bound.transpose());

    const RealMatrix w = svd.matrixV().leftCols(kept);
    const RealMatrix residual = lambda - lambda * w * w.transpose();
    out.range_residual = residual.size() == 0 ? 0.0 : residual.norm();
    const double scale = lambda.size() == 0 ? 0.0 : lambda.norm();
    out.range_ok = out.range_residual <= std::max(tol.range * scale, tol.abs_floor);
    return out;
}

CrbReport crb_report(std::size_t point, RealMatrix cov, const std::vector<EstimableBinding> &bindings,
                     const std::vector<FisherMap> &maps, const ParametricFamily &family, const Tolerances &tol) {
    require_point(family, point);
    if (bindings.empty()) fail(ErrorCode::InvalidArgument, "a bound needs at least one estimator");
    std::vector<Observable> estimators;
    estimators.reserve(bindings.size());
    for (const auto &b : bindings) estimators.push_back(b.estimator);
    CrbReport report;
    report.point = point;
    report.cov = std::move(cov);
    report.info = information_matrix(maps, family, point);
    report.lambda = lambda_matrix(bindings, maps, family, point);
    const BoundComputation b = projected_bound(estimators, maps, family, point, report.lambda, tol);
    report.bound = b.bound;
    report.range_residual = b.range_residual;
    report.range_ok = b.range_ok;
    report.gap_spectrum = symmetric_eigenvalues(RealMatrix(report.cov - report.bound));
    return report;
}

CrbReport crb_bound(const std::vector<EstimableBinding> &bindings,
                    const std::vector<FisherMap> &maps, const ParametricFamily &family,
                    std::size_t point, const Tolerances &tol) {
    require_point(family, point);
    if (bindings.empty()) fail(ErrorCode::InvalidArgument, "crb_bound needs at least one estimator");
    std::vector<Observable> estimators;
    estimators.reserve(bindings.size());
    for (const auto &b : bindings) estimators.push_back(b.estimator);
    return crb_report(point, covariance_matrix(estimators, family.state(point), tol), bindings, maps, family, tol);
}

BalancedMinimum min_variance_over_balanced(const EstimableBinding &binding,
                                           const ParametricFamily &family, std::size_t point,
                                           const Tolerances &tol) {
    require_point(family, point);
    const DensityOperator &rho = family.state(point);
    const double base = variance(binding.estimator, rho, tol);
    const std::vector<Observable> basis = balanced_space_basis(family, tol);
    if (basis.empty()) return BalancedMinimum{base, binding.estimator, RealVector()};

    // Var(X + sum c_k Z_k) = Var(X) + 2 c'g + c'Gc, because every Z_k has zero
    // mean at grid points.
    const Eigen::Index n = rho.dim();
    const ComplexMatrix centred =
        binding.estimator.matrix() - expectation(binding.estimator, rho, tol) * ComplexMatrix::Identity(n, n);
    const auto k = static_cast<Eigen::Index>(basis.size());
    RealMatrix gram(k, k);
    RealVector g(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        const ComplexMatrix &za = basis[static_cast<std::size_t>(a)].matrix();
        g(a) = sesquilinear_form(centred, za, rho).real();
        for (Eigen::Index b = a; b < k; ++b) {
            gram(a, b) = sesquilinear_form(za, basis[static_cast<std::size_t>(b)].matrix(), rho).real();
            gram(b, a) = gram(a, b);
        }
    }
    const RealVector c = -pseudo_inverse(gram, tol.rcond, tol) * g;
    ComplexMatrix optimal = binding.estimator.matrix();
    for (Eigen::Index a = 0; a < k; ++a) optimal += c(a) * basis[static_cast<std::size_t>(a)].matrix();
    Observable opt(optimal, tol);
    const double value = std::min(base, variance(opt, rho, tol));
    return BalancedMinimum{value, std::move(opt), c};
}

MonotonicityReport check_monotonicity(const std::vector<EstimableBinding> &bindings,
                                      const std::vector<FisherMap> &maps,
                                      const ParametricFamily &family, std::size_t point,
                                      const Tolerances &tol) {
    if (maps.size() < 2) fail(ErrorCode::InvalidArgument, "monotonicity needs at least two maps");
    const std::vector<FisherMap> prefix(maps.begin(), maps.end() - 1);
    std::vector<Observable> estimators;
    for (const auto &b : bindings) estimators.push_back(b.estimator);
    const RealMatrix full =
        projected_bound(estimators, maps, family, point, lambda_matrix(bindings, maps, family, point), tol).bound;
    const RealMatrix partial =
        projected_bound(estimators, prefix, family, point, lambda_matrix(bindings, prefix, family, point), tol).bound;
    MonotonicityReport report;
    report.difference = full - partial;
    report.min_eigenvalue = symmetric_eigenvalues(report.difference).minCoeff();
    report.ok = report.min_eigenvalue >= -tol.bound;
    return report;
}

MixingResult mix_fisher_maps(const std::vector<FisherMap> &maps, const std::vector<RealMatrix> &mixing,
                             const Tolerances &tol) {
    if (maps.empty()) return {};
    const std::size_t points = maps.front().values.size();
    const auto n = static_cast<Eigen::Index>(maps.size());
    if (mixing.size() != points)
        fail(ErrorCode::DimensionMismatch, "one mixing matrix per grid point is required");
    for (const auto &m : maps)
        if (m.values.size() != points) fail(ErrorCode::DimensionMismatch, "maps sampled on different grids");

    MixingResult out;
    out.maps.resize(maps.size());
    for (std::size_t j = 0; j < maps.size(); ++j) {
        out.maps[j].label = "mix" + std::to_string(j);
        out.maps[j].values.resize(points);
    }
    for (std::size_t k = 0; k < points; ++k) {
        const RealMatrix &a = mixing[k];
        if (a.rows() != n || a.cols() != n)
            fail(ErrorCode::DimensionMismatch, "mixing matrix must be n x n for n maps");
        const double det = a.determinant();
        if (std::abs(det) < tol.mixing_det) {
            std::ostringstream os;
            os << "mixing matrix at grid point " << k << " has determinant " << det;
            fail(ErrorCode::SingularMixing, os.str());
        }
        Eigen::JacobiSVD<RealMatrix> svd(a);
        const RealVector &s = svd.singularValues();
        out.condition_numbers.push_back(s(0) / s(s.size() - 1));
        for (Eigen::Index j = 0; j < n; ++j) {
            ComplexMatrix g = ComplexMatrix::Zero(maps.front().values[k].rows(), maps.front().values[k].cols());
            for (Eigen::Index r = 0; r < n; ++r) g += a(j, r) * maps[static_cast<std::size_t>(r)].values[k];
            out.maps[static_cast<std::size_t>(j)].values[k] = std::move(g);
        }
    }
    return out;
}

} // namespace qcrb
