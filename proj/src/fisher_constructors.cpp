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

#include "qcrb/fisher_constructors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

namespace qcrb {

namespace {

Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a.transpose().cwiseProduct(b)).sum();
}

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

std::vector<ComplexMatrix> inverses(const ParametricFamily &family, const Tolerances &tol) {
    std::vector<ComplexMatrix> out;
    out.reserve(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        try {
            out.push_back(inverse_positive_definite(family.state(k).matrix(), tol.inv_floor, tol));
        } catch (const Error &e) {
            std::ostringstream os;
            os << "state at grid point " << k << ": " << e.what();
            fail(ErrorCode::SingularState, os.str());
        }
    }
    return out;
}

void require_valid_maps(const std::vector<FisherMap> &maps, const ParametricFamily &family,
                        const Tolerances &tol) {
    const std::vector<Observable> basis = balanced_space_basis(family, tol);
    for (const auto &m : maps) {
        const FisherMapReport r = validate_fisher_map(m, family, basis, tol);
        if (!r.ok) {
            std::ostringstream os;
            os << "map '" << m.label << "' is not a Fisher map at grid point " << r.worst_point
               << " (centering " << r.centering_defect << ", orthogonality " << r.orthogonality_defect
               << ")";
            fail(ErrorCode::ValidationFailed, os.str());
        }
    }
}

struct StencilTap {
    int offset;
    double weight;
};

// Central stencils in units of h^-order.
std::vector<StencilTap> central_stencil(int order) {
    switch (order) {
    case 0:
        return {{0, 1.0}};
    case 1:
        return {{-1, -0.5}, {1, 0.5}};
    case 2:
        return {{-2, -1.0 / 12.0}, {-1, 16.0 / 12.0}, {0, -30.0 / 12.0}, {1, 16.0 / 12.0}, {2, -1.0 / 12.0}};
    case 3:
        return {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
    case 4:
        return {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}};
    default:
        fail(ErrorCode::InvalidArgument, "derivative orders above four are not supported");
    }
}

std::string index_label(const MultiIndex &alpha) {
    std::ostringstream os;
    os << "D(";
    for (std::size_t j = 0; j < alpha.size(); ++j) os << (j ? "," : "") << alpha[j];
    os << ")";
    return os.str();
}

ComplexMatrix apply_stencil(const ParametricFamily &family, std::size_t point, const MultiIndex &alpha,
                            double h) {
    const std::size_t d = alpha.size();
    std::vector<std::vector<StencilTap>> taps(d);
    for (std::size_t j = 0; j < d; ++j) taps[j] = central_stencil(alpha[j]);

    // Every stencil with a nonzero order has weights summing to zero, so
    // differencing against the centre value costs nothing and cancels exactly
    // on locally constant families.
    const RealVector &theta = family.grid().point(point);
    const ComplexMatrix centre = family.evaluate(theta);
    ComplexMatrix total = ComplexMatrix::Zero(family.dim(), family.dim());
    std::vector<std::size_t> cursor(d, 0);
    for (;;) {
        RealVector shifted = theta;
        double weight = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            const StencilTap &t = taps[j][cursor[j]];
            shifted(static_cast<Eigen::Index>(j)) += t.offset * h;
            weight *= t.weight;
        }
        total += weight * (family.evaluate(shifted) - centre);
        std::size_t j = 0;
        while (j < d && ++cursor[j] == taps[j].size()) cursor[j++] = 0;
        if (j == d) break;
    }
    int order = 0;
    for (const int a : alpha) order += a;
    return hermitian_part(total / std::pow(h, order));
}

} // namespace

DiagonalFamily classical_diagonal_family(const ParameterGrid &grid, const std::vector<RealVector> &p,
                                         const std::vector<RealVector> &dp, const Tolerances &tol) {
    if (grid.d() != 1) fail(ErrorCode::InvalidArgument, "diagonal families take a single parameter");
    if (p.size() != grid.size() || dp.size() != grid.size())
        fail(ErrorCode::DimensionMismatch, "one probability vector and derivative per grid point");
    const Eigen::Index n = p.front().size();
    std::vector<DensityOperator> states;
    DerivativeTable derivs;
    FisherMap score{"score", {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (p[k].size() != n || dp[k].size() != n)
            fail(ErrorCode::DimensionMismatch, "probability vectors differ in length");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(p[k](i) > 0.0)) {
                std::ostringstream os;
                os << "p[" << i << "] = " << p[k](i) << " at grid point " << k << " is not positive";
                fail(ErrorCode::NonPositiveProbability, os.str());
            }
        }
        if (std::abs(p[k].sum() - 1.0) > tol.trace)
            fail(ErrorCode::DomainError, "probabilities do not sum to one");
        states.emplace_back(ComplexMatrix(p[k].cast<Complex>().asDiagonal()), tol);
        derivs.push_back({ComplexMatrix(dp[k].cast<Complex>().asDiagonal())});
        score.values.emplace_back(dp[k].cwiseQuotient(p[k]).cast<Complex>().asDiagonal());
    }
    ParametricFamily family(grid, std::move(states), tol);
    return DiagonalFamily{family.with_derivatives(std::move(derivs)), std::move(score)};
}

std::vector<FisherMap> barankin_maps(const ParametricFamily &family, const std::vector<std::size_t> &gammas,
                                     const Tolerances &tol) {
    const std::vector<ComplexMatrix> inv = inverses(family, tol);
    const Eigen::Index n = family.dim();
    std::vector<FisherMap> maps;
    for (const std::size_t g : gammas) {
        if (g >= family.size()) fail(ErrorCode::GridPointNotFound, "Barankin point is not on the grid");
        std::ostringstream label;
        label << "barankin(";
        const RealVector &gamma = family.grid().point(g);
        for (Eigen::Index j = 0; j < gamma.size(); ++j) label << (j ? ";" : "") << gamma(j);
        label << ")";
        FisherMap m{label.str(), {}};
        for (std::size_t k = 0; k < family.size(); ++k)
            m.values.push_back(k == g ? ComplexMatrix::Zero(n, n)
                                      : ComplexMatrix(family.state(g).matrix() * inv[k] - identity(n)));
        maps.push_back(std::move(m));
    }
    return maps;
}

std::vector<FisherMap> bhattacharya_maps(const ParametricFamily &family, const std::vector<MultiIndex> &orders,
                                         const Tolerances &tol, bool validate) {
    if (!family.has_callback())
        fail(ErrorCode::InvalidArgument, "higher-order derivative maps need a state callback");
    const std::vector<ComplexMatrix> inv = inverses(family, tol);
    std::vector<FisherMap> maps;
    for (const auto &alpha : orders) {
        if (alpha.size() != family.grid().d())
            fail(ErrorCode::DimensionMismatch, "multi-index length must equal the parameter dimension");
        int total = 0;
        for (const int a : alpha) {
            if (a < 0) fail(ErrorCode::InvalidArgument, "negative derivative order");
            total += a;
        }
        if (total == 0) fail(ErrorCode::InvalidArgument, "the zero-order monomial does not annihilate constants");
        const double h = total == 1 ? family.grid().fd_step() : family.grid().higher_order_step();
        FisherMap m{index_label(alpha), {}};
        for (std::size_t k = 0; k < family.size(); ++k)
            m.values.push_back(apply_stencil(family, k, alpha, h) * inv[k]);
        maps.push_back(std::move(m));
    }
    if (validate) require_valid_maps(maps, family, tol);
    return maps;
}

std::vector<FisherMap> derivative_maps(const ParametricFamily &family, const Tolerances &tol, bool validate) {
    if (!family.can_differentiate())
        fail(ErrorCode::InvalidArgument, "family carries no derivative information");
    const std::vector<ComplexMatrix> inv = inverses(family, tol);
    std::vector<FisherMap> maps;
    for (std::size_t j = 0; j < family.grid().d(); ++j) {
        FisherMap m{"d" + std::to_string(j), {}};
        for (std::size_t k = 0; k < family.size(); ++k) m.values.push_back(family.derivative(k, j) * inv[k]);
        maps.push_back(std::move(m));
    }
    if (validate) require_valid_maps(maps, family, tol);
    return maps;
}

RealMatrix lie_orbit_information(const DensityOperator &rho0, const std::vector<ComplexMatrix> &generators,
                                 const Tolerances &tol) {
    const ComplexMatrix inv = inverse_positive_definite(rho0.matrix(), tol.inv_floor, tol);
    std::vector<ComplexMatrix> comms;
    for (const auto &g : generators) {
        if (g.rows() != rho0.dim() || g.cols() != rho0.dim())
            fail(ErrorCode::DimensionMismatch, "generator dimension mismatch");
        comms.push_back(commutator(g, rho0.matrix()));
    }
    const auto d = static_cast<Eigen::Index>(generators.size());
    RealMatrix info(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j) {
            info(i, j) = trace_product(inv, ComplexMatrix(comms[static_cast<std::size_t>(i)] *
                                                          comms[static_cast<std::size_t>(j)]))
                             .real();
            info(j, i) = info(i, j);
        }
    return info;
}

std::vector<FisherMap> lie_orbit_maps(const ParametricFamily &family, const std::vector<ComplexMatrix> &generators,
                                      const Tolerances &tol) {
    const std::vector<ComplexMatrix> inv = inverses(family, tol);
    std::vector<FisherMap> maps;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const ComplexMatrix &g = generators[i];
        if (g.rows() != family.dim() || g.cols() != family.dim())
            fail(ErrorCode::DimensionMismatch, "generator dimension mismatch");
        FisherMap m{"lie[" + std::to_string(i) + "]", {}};
        for (std::size_t k = 0; k < family.size(); ++k)
            m.values.push_back(commutator(g, family.state(k).matrix()) * inv[k]);
        maps.push_back(std::move(m));
    }
    return maps;
}

RealMatrix lie_orbit_bound(const DensityOperator &rho0, const std::vector<ComplexMatrix> &generators,
                           const RealMatrix &directional, const Tolerances &tol) {
    if (directional.cols() != static_cast<Eigen::Index>(generators.size()))
        fail(ErrorCode::DimensionMismatch, "one directional derivative per generator is required");
    return generalized_bound(directional, lie_orbit_information(rho0, generators, tol), tol).bound;
}

LiapunovFamily exponential_family(const ParameterGrid &grid, const DensityOperator &rho0,
                                  const std::vector<ComplexMatrix> &generators, const Tolerances &tol) {
    if (generators.size() != grid.d())
        fail(ErrorCode::DimensionMismatch, "one generator per parameter coordinate is required");
    for (const auto &g : generators)
        if (g.rows() != rho0.dim() || g.cols() != rho0.dim())
            fail(ErrorCode::DimensionMismatch, "generator dimension mismatch");
    for (std::size_t a = 0; a < generators.size(); ++a)
        for (std::size_t b = a + 1; b < generators.size(); ++b)
            if (operator_norm(commutator(generators[a], generators[b])) >
                tol.relative(tol.herm, operator_norm(generators[a]) * operator_norm(generators[b])))
                fail(ErrorCode::InvalidArgument, "exponential family generators must commute");

    const ComplexMatrix base = rho0.matrix();
    StateCallback callback = [base, generators](const RealVector &theta) {
        ComplexMatrix exponent = ComplexMatrix::Zero(base.rows(), base.cols());
        for (std::size_t j = 0; j < generators.size(); ++j)
            exponent += (0.5 * theta(static_cast<Eigen::Index>(j))) * generators[j];
        const ComplexMatrix e = exponent.exp();
        const ComplexMatrix unnormalised = e * base * e.adjoint();
        return ComplexMatrix(hermitian_part(unnormalised / unnormalised.trace().real()));
    };
    LiapunovFamily out{ParametricFamily::from_callback(grid, std::move(callback), tol), {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<ComplexMatrix> row;
        const ComplexMatrix &rho = out.base.state(k).matrix();
        for (const auto &g : generators)
            row.push_back(g - trace_product(rho, g).real() * identity(rho.rows()));
        out.coefficients.push_back(std::move(row));
    }
    return out;
}

LiapunovFamily recenter(const LiapunovFamily &family) {
    LiapunovFamily out = family;
    for (std::size_t k = 0; k < out.coefficients.size(); ++k) {
        const ComplexMatrix &rho = family.base.state(k).matrix();
        for (auto &l : out.coefficients[k])
            l -= Complex(0.0, trace_product(rho, l).imag()) * identity(rho.rows());
    }
    return out;
}

namespace {

void require_coefficient_shape(const LiapunovFamily &family) {
    if (family.coefficients.size() != family.base.size())
        fail(ErrorCode::DimensionMismatch, "Liapunov coefficients need one row per grid point");
    for (const auto &row : family.coefficients) {
        if (row.size() != family.base.grid().d())
            fail(ErrorCode::DimensionMismatch, "Liapunov coefficients need one entry per coordinate");
        for (const auto &l : row)
            if (l.rows() != family.base.dim() || l.cols() != family.base.dim())
                fail(ErrorCode::DimensionMismatch, "Liapunov coefficient has wrong size");
    }
}

} // namespace

LiapunovReport liapunov_validate(const LiapunovFamily &family, const Tolerances &tol) {
    require_coefficient_shape(family);
    LiapunovReport report;
    const bool differentiable = family.base.can_differentiate();
    double worst = 0.0;
    for (std::size_t k = 0; k < family.base.size(); ++k) {
        const ComplexMatrix &rho = family.base.state(k).matrix();
        for (std::size_t j = 0; j < family.coefficients[k].size(); ++j) {
            const ComplexMatrix &l = family.coefficients[k][j];
            const Complex mean = trace_product(rho, l);
            report.max_shift = std::max(report.max_shift, std::abs(mean.imag()));
            const double centering = std::abs(mean.real());
            report.centering_defect = std::max(report.centering_defect, centering);
            double residual = 0.0;
            if (differentiable) {
                const ComplexMatrix predicted = 0.5 * (l * rho + rho * l.adjoint());
                residual = operator_norm(ComplexMatrix(family.base.derivative(k, j) - predicted));
                report.derivative_residual = std::max(report.derivative_residual, residual);
            }
            const double score = std::max(residual / tol.liapunov, centering / tol.centering);
            if (score > worst) {
                worst = score;
                report.worst_point = k;
            }
        }
    }
    // Constant families need no derivative data: the residual test is only
    // meaningful when the family can be differentiated.
    report.ok = report.derivative_residual <= tol.liapunov && report.centering_defect <= tol.centering;
    if (!differentiable) {
        for (const auto &row : family.coefficients)
            for (const auto &l : row)
                if (l.norm() != 0.0) report.ok = false;
    }
    return report;
}

std::vector<FisherMap> liapunov_fisher_maps(const LiapunovFamily &family, const Tolerances &tol) {
    const LiapunovReport report = liapunov_validate(family, tol);
    if (!report.ok) {
        std::ostringstream os;
        os << "Liapunov family fails at grid point " << report.worst_point << " (derivative residual "
           << report.derivative_residual << ", centering " << report.centering_defect << ")";
        fail(ErrorCode::ValidationFailed, os.str());
    }
    const LiapunovFamily centred = recenter(family);
    std::vector<FisherMap> maps(family.base.grid().d());
    for (std::size_t j = 0; j < maps.size(); ++j) {
        maps[j].label = "liapunov[" + std::to_string(j) + "]";
        for (std::size_t k = 0; k < family.base.size(); ++k) maps[j].values.push_back(centred.coefficients[k][j]);
    }
    return maps;
}

RealMatrix liapunov_information(const LiapunovFamily &family, std::size_t point) {
    require_coefficient_shape(family);
    if (point >= family.base.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    const LiapunovFamily centred = recenter(family);
    const ComplexMatrix &rho = family.base.state(point).matrix();
    const auto &row = centred.coefficients[point];
    const auto d = static_cast<Eigen::Index>(row.size());
    RealMatrix info(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j) {
            info(i, j) = trace_product(rho, ComplexMatrix(row[static_cast<std::size_t>(i)].adjoint() *
                                                          row[static_cast<std::size_t>(j)]))
                             .real();
            info(j, i) = info(i, j);
        }
    return info;
}

LiapunovFamily liapunov_tensor_product(const LiapunovFamily &a, const LiapunovFamily &b, const Tolerances &tol) {
    require_coefficient_shape(a);
    require_coefficient_shape(b);
    if (!a.base.grid().same_points(b.base.grid()))
        fail(ErrorCode::GridMismatch, "tensor factors must share the parameter grid");
    const ParameterGrid &grid = a.base.grid();
    const Eigen::Index na = a.base.dim();
    const Eigen::Index nb = b.base.dim();

    std::optional<ParametricFamily> base;
    if (a.base.has_callback() && b.base.has_callback()) {
        const ParametricFamily fa = a.base;
        const ParametricFamily fb = b.base;
        base = ParametricFamily::from_callback(
            grid, [fa, fb](const RealVector &theta) { return kron(fa.evaluate(theta), fb.evaluate(theta)); },
            tol);
    } else {
        std::vector<DensityOperator> states;
        for (std::size_t k = 0; k < grid.size(); ++k)
            states.emplace_back(kron(a.base.state(k).matrix(), b.base.state(k).matrix()), tol);
        base.emplace(grid, std::move(states), tol);
        if (a.base.can_differentiate() && b.base.can_differentiate()) {
            DerivativeTable derivs(grid.size());
            for (std::size_t k = 0; k < grid.size(); ++k)
                for (std::size_t j = 0; j < grid.d(); ++j)
                    derivs[k].push_back(kron(a.base.derivative(k, j), b.base.state(k).matrix()) +
                                        kron(a.base.state(k).matrix(), b.base.derivative(k, j)));
            base = base->with_derivatives(std::move(derivs));
        }
    }

    LiapunovFamily out{std::move(*base), {}};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::vector<ComplexMatrix> row;
        for (std::size_t j = 0; j < grid.d(); ++j)
            row.push_back(kron(a.coefficients[k][j], identity(nb)) + kron(identity(na), b.coefficients[k][j]));
        out.coefficients.push_back(std::move(row));
    }
    return out;
}

MixtureFamily make_mixture(std::vector<LiapunovFamily> components, std::vector<RealVector> weights,
                           std::vector<RealMatrix> weight_gradients, const Tolerances &tol) {
    if (components.empty()) fail(ErrorCode::InvalidArgument, "a mixture needs at least one component");
    const ParameterGrid &grid = components.front().base.grid();
    const auto r = static_cast<Eigen::Index>(components.size());
    for (const auto &c : components) {
        require_coefficient_shape(c);
        if (!c.base.grid().same_points(grid)) fail(ErrorCode::GridMismatch, "mixture components use different grids");
        if (c.base.dim() != components.front().base.dim())
            fail(ErrorCode::DimensionMismatch, "mixture components differ in dimension");
    }
    if (weights.size() != grid.size() || weight_gradients.size() != grid.size())
        fail(ErrorCode::DimensionMismatch, "weights and weight gradients need one entry per grid point");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (weights[k].size() != r) fail(ErrorCode::DimensionMismatch, "one weight per component is required");
        if (weight_gradients[k].rows() != r || weight_gradients[k].cols() != static_cast<Eigen::Index>(grid.d()))
            fail(ErrorCode::DimensionMismatch, "weight gradient must be components x d");
        if (weights[k].minCoeff() < 0.0 || std::abs(weights[k].sum() - 1.0) > tol.trace) {
            std::ostringstream os;
            os << "weights at grid point " << k << " are not a probability vector";
            fail(ErrorCode::DomainError, os.str());
        }
    }
    return MixtureFamily{std::move(components), std::move(weights), std::move(weight_gradients)};
}

ParametricFamily MixtureFamily::mixed_family(const Tolerances &tol) const {
    const ParameterGrid &grid = components.front().base.grid();
    const Eigen::Index n = components.front().base.dim();
    std::vector<DensityOperator> states;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        ComplexMatrix rho = ComplexMatrix::Zero(n, n);
        for (std::size_t r = 0; r < components.size(); ++r)
            rho += weights[k](static_cast<Eigen::Index>(r)) * components[r].base.state(k).matrix();
        states.emplace_back(rho, tol);
    }
    ParametricFamily family(grid, std::move(states), tol);
    const bool differentiable = std::all_of(components.begin(), components.end(),
                                            [](const LiapunovFamily &c) { return c.base.can_differentiate(); });
    if (!differentiable) return family;
    DerivativeTable derivs(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
        for (std::size_t j = 0; j < grid.d(); ++j) {
            ComplexMatrix d = ComplexMatrix::Zero(n, n);
            for (std::size_t r = 0; r < components.size(); ++r) {
                const auto ri = static_cast<Eigen::Index>(r);
                d += weight_gradients[k](ri, static_cast<Eigen::Index>(j)) * components[r].base.state(k).matrix() +
                     weights[k](ri) * components[r].base.derivative(k, j);
            }
            derivs[k].push_back(hermitian_part(d));
        }
    return family.with_derivatives(std::move(derivs));
}

MixtureBound mixture_bound(const MixtureFamily &mixture, const std::vector<EstimableBinding> &bindings,
                           std::size_t point, const Tolerances &tol) {
    const ParameterGrid &grid = mixture.components.front().base.grid();
    if (point >= grid.size()) fail(ErrorCode::GridPointNotFound, "grid index out of range");
    if (bindings.empty()) fail(ErrorCode::InvalidArgument, "mixture bound needs at least one estimator");
    const ParametricFamily mixed = mixture.mixed_family(tol);
    for (const auto &b : bindings) {
        const UnbiasednessReport u = is_unbiased(b.estimator, b.f_values, mixed, tol);
        if (!u.ok) {
            std::ostringstream os;
            os << "estimator '" << b.label << "' is biased for the mixture (defect " << u.max_defect
               << " at grid point " << u.worst_point << ")";
            fail(ErrorCode::NotUnbiased, os.str());
        }
    }

    const auto d = static_cast<Eigen::Index>(grid.d());
    const auto m = static_cast<Eigen::Index>(bindings.size());
    const Eigen::Index n = mixed.dim();
    RealMatrix psi = RealMatrix::Zero(d, d);
    RealMatrix gradient = RealMatrix::Zero(m, d);
    for (std::size_t r = 0; r < mixture.components.size(); ++r) {
        const LiapunovFamily &comp = mixture.components[r];
        const LiapunovReport check = liapunov_validate(comp, tol);
        if (!check.ok) {
            std::ostringstream os;
            os << "mixture component " << r << " is not a Liapunov family (residual "
               << check.derivative_residual << ", centering " << check.centering_defect << ")";
            fail(ErrorCode::ValidationFailed, os.str());
        }
        const auto ri = static_cast<Eigen::Index>(r);
        const double p = mixture.weights[point](ri);
        if (p < tol.weight_floor) {
            std::ostringstream os;
            os << "weight of component " << r << " at grid point " << point << " is " << p;
            fail(ErrorCode::ZeroWeight, os.str());
        }
        const ComplexMatrix &rho = comp.base.state(point).matrix();
        const LiapunovFamily centred = recenter(comp);
        std::vector<ComplexMatrix> scores;
        for (Eigen::Index j = 0; j < d; ++j)
            scores.push_back(mixture.weight_gradients[point](ri, j) / p * identity(n) +
                             centred.coefficients[point][static_cast<std::size_t>(j)]);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                psi(i, j) += p * trace_product(rho, ComplexMatrix(scores[static_cast<std::size_t>(i)].adjoint() *
                                                                  scores[static_cast<std::size_t>(j)]))
                                     .real();
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                gradient(i, j) += p * trace_product(rho, ComplexMatrix(bindings[static_cast<std::size_t>(i)].estimator.matrix() *
                                                                       scores[static_cast<std::size_t>(j)]))
                                          .real();
    }
    psi = 0.5 * (psi + psi.transpose());

    // Cross-check the gradient against Tr (d rho) X when derivatives exist.
    if (mixed.can_differentiate()) {
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                const double direct = trace_product(mixed.derivative(point, static_cast<std::size_t>(j)),
                                                    bindings[static_cast<std::size_t>(i)].estimator.matrix())
                                          .real();
                const double scale = std::max(1.0, operator_norm(bindings[static_cast<std::size_t>(i)].estimator.matrix()));
                if (std::abs(direct - gradient(i, j)) > tol.liapunov * scale) {
                    std::ostringstream os;
                    os << "mixture gradient " << gradient(i, j) << " disagrees with the state derivative value "
                       << direct;
                    fail(ErrorCode::InternalCheckFailed, os.str());
                }
            }
    }

    std::vector<Observable> estimators;
    for (const auto &b : bindings) estimators.push_back(b.estimator);
    RealMatrix cov = covariance_matrix(estimators, mixed.state(point), tol);
    CrbReport report = assemble_report(point, std::move(cov), psi, gradient, tol);
    return MixtureBound{std::move(psi), std::move(gradient), std::move(report)};
}

} // namespace qcrb
