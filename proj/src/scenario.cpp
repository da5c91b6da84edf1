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

#include "qcrb/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "qcrb/fisher_constructors.hpp"
#include "qcrb/measurement.hpp"
#include "qcrb/naimark.hpp"

namespace qcrb::scenario {

using nlohmann::json;

ScenarioError::ScenarioError(const std::string &message) : Error(ErrorCode::InvalidArgument, message) {}

bool ScenarioResult::all_pass() const {
    for (const auto &c : checks)
        if (!c.pass) return false;
    for (const auto &p : points)
        if (!p.pass) return false;
    return true;
}

int ScenarioResult::exit_code() const { return all_pass() ? 0 : 2; }

namespace {

// JSON value together with its location in the document, so that every
// diagnostic can name the field that caused it.
class Node {
  public:
    Node(const json &value, std::string path) : value_(&value), path_(std::move(path)) {}

    const std::string &path() const { return path_; }
    const json &raw() const { return *value_; }

    [[noreturn]] void error(const std::string &what) const {
        throw ScenarioError((path_.empty() ? std::string("scenario") : path_) + ": " + what);
    }

    bool has(const std::string &key) const { return value_->is_object() && value_->contains(key); }

    Node at(const std::string &key) const {
        if (!value_->is_object()) error("expected an object");
        const auto it = value_->find(key);
        if (it == value_->end()) throw ScenarioError("missing field '" + child_path(key) + "'");
        return Node(*it, child_path(key));
    }

    std::size_t size() const {
        if (!value_->is_array()) error("expected an array");
        return value_->size();
    }

    Node operator[](std::size_t i) const {
        if (!value_->is_array()) error("expected an array");
        if (i >= value_->size()) error("index " + std::to_string(i) + " out of range");
        return Node((*value_)[i], path_ + "[" + std::to_string(i) + "]");
    }

    double number() const {
        if (!value_->is_number()) error("expected a number");
        const double x = value_->get<double>();
        if (!std::isfinite(x)) error("expected a finite number");
        return x;
    }

    long long integer() const {
        if (!value_->is_number_integer()) error("expected an integer");
        return value_->get<long long>();
    }

    std::string string() const {
        if (!value_->is_string()) error("expected a string");
        return value_->get<std::string>();
    }

    bool boolean() const {
        if (!value_->is_boolean()) error("expected true or false");
        return value_->get<bool>();
    }

    Complex complex() const {
        if (value_->is_number()) return {number(), 0.0};
        if (value_->is_array() && value_->size() == 2) return {(*this)[0].number(), (*this)[1].number()};
        error("expected a number or a [re, im] pair");
    }

    ComplexMatrix matrix(Eigen::Index n) const {
        if (size() != static_cast<std::size_t>(n)) error("expected " + std::to_string(n) + " rows");
        ComplexMatrix m(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const Node row = (*this)[static_cast<std::size_t>(r)];
            if (row.size() != static_cast<std::size_t>(n))
                row.error("expected " + std::to_string(n) + " entries");
            for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)].complex();
        }
        return m;
    }

    RealVector vector(std::optional<std::size_t> length = std::nullopt) const {
        const std::size_t len = size();
        if (length && len != *length) error("expected " + std::to_string(*length) + " entries");
        RealVector v(static_cast<Eigen::Index>(len));
        for (std::size_t i = 0; i < len; ++i) v(static_cast<Eigen::Index>(i)) = (*this)[i].number();
        return v;
    }

    std::vector<double> values(std::size_t length) const {
        const RealVector v = vector(length);
        return std::vector<double>(v.data(), v.data() + v.size());
    }

    /// A parameter point: a bare number when d == 1, otherwise an array of d numbers.
    RealVector point(std::size_t d) const {
        if (d == 1 && value_->is_number()) return RealVector::Constant(1, number());
        return vector(d);
    }

  private:
    std::string child_path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    const json *value_;
    std::string path_;
};

// Library errors raised while interpreting a field become input errors at that field.
template <class F> auto guarded(const Node &node, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const ScenarioError &) {
        throw;
    } catch (const Error &e) {
        node.error(std::string(to_string(e.code())) + ": " + e.what());
    }
}

Tolerances parse_tolerances(const Node &root, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ScenarioError("--tol-scale must be a positive number");
    Tolerances tol = default_tolerances().scaled(scale);
    if (!root.has("tolerances")) return tol;
    const Node node = root.at("tolerances");
    if (!node.raw().is_object()) node.error("expected an object");
    std::map<std::string, double *> fields = {
        {"abs_floor", &tol.abs_floor}, {"herm", &tol.herm},
        {"psd", &tol.psd},             {"rcond", &tol.rcond},
        {"cluster", &tol.cluster},     {"trace", &tol.trace},
        {"imag", &tol.imag},           {"completeness", &tol.completeness},
        {"collapse_floor", &tol.collapse_floor}, {"unbiased", &tol.unbiased},
        {"fisher", &tol.fisher},       {"rank", &tol.rank},
        {"range", &tol.range},         {"inv_floor", &tol.inv_floor},
        {"liapunov", &tol.liapunov},   {"centering", &tol.centering},
        {"weight_floor", &tol.weight_floor}, {"mixing_det", &tol.mixing_det},
        {"bound", &tol.bound},
    };
    for (const auto &item : node.raw().items()) {
        const auto it = fields.find(item.key());
        if (it == fields.end()) throw ScenarioError("tolerances." + item.key() + ": unknown tolerance");
        const double v = node.at(item.key()).number();
        if (!(v > 0.0)) node.at(item.key()).error("tolerances must be positive");
        *it->second = v;
    }
    return tol;
}

ParameterGrid parse_grid(const Node &root) {
    const Node node = root.at("grid");
    std::size_t d = 1;
    if (node.has("d")) {
        const long long v = node.at("d").integer();
        if (v < 1) node.at("d").error("must be at least 1");
        d = static_cast<std::size_t>(v);
    }
    const Node pts = node.at("points");
    if (pts.size() == 0) pts.error("grid needs at least one point");
    std::vector<RealVector> points;
    for (std::size_t k = 0; k < pts.size(); ++k) points.push_back(pts[k].point(d));
    const double fd = node.has("fd_step") ? node.at("fd_step").number() : 1e-5;
    const double ho = node.has("higher_order_step") ? node.at("higher_order_step").number() : 1e-2;
    return guarded(node, [&] { return ParameterGrid(d, std::move(points), fd, ho); });
}

std::vector<ComplexMatrix> parse_generators(const Node &node, const std::string &single, const std::string &many,
                                            Eigen::Index n) {
    std::vector<ComplexMatrix> out;
    if (node.has(many)) {
        const Node list = node.at(many);
        for (std::size_t i = 0; i < list.size(); ++i) out.push_back(list[i].matrix(n));
    } else {
        out.push_back(node.at(single).matrix(n));
    }
    return out;
}

struct BuiltFamily {
    std::string kind;
    ParametricFamily family;
    std::optional<LiapunovFamily> liapunov;
    std::optional<MixtureFamily> mixture;
};

StateCallback builder_callback(const Node &node, Eigen::Index n) {
    const std::string name = node.at("name").string();
    if (name == "qz") {
        if (n != 2) node.error("the qz family lives in dimension 2");
        return [](const RealVector &theta) {
            const double t = theta(0);
            ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
            rho(0, 0) = 0.5 * (1.0 + t);
            rho(1, 1) = 0.5 * (1.0 - t);
            return rho;
        };
    }
    if (name == "binomial") {
        if (n != 3) node.error("the binomial family lives in dimension 3");
        return [](const RealVector &theta) {
            const double t = theta(0);
            ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
            rho(0, 0) = 0.25 * (1.0 - t) * (1.0 - t);
            rho(1, 1) = 0.5 * (1.0 - t * t);
            rho(2, 2) = 0.25 * (1.0 + t) * (1.0 + t);
            return rho;
        };
    }
    node.at("name").error("unknown builder '" + name + "' (expected qz or binomial)");
}

BuiltFamily parse_family(const Node &root, const ParameterGrid &grid, Eigen::Index n, const Tolerances &tol) {
    const Node node = root.at("family");
    const std::string kind = node.at("kind").string();
    const std::size_t points = grid.size();
    const std::size_t d = grid.d();

    if (kind == "builder") {
        if (d != 1) node.error("builder families take a single parameter");
        StateCallback cb = builder_callback(node, n);
        return {kind, guarded(node, [&] { return ParametricFamily::from_callback(grid, cb, tol); }), {}, {}};
    }
    if (kind == "explicit") {
        const Node states = node.at("states");
        if (states.size() != points) states.error("expected one state per grid point");
        std::vector<DensityOperator> rhos;
        for (std::size_t k = 0; k < points; ++k)
            rhos.push_back(guarded(states[k], [&] { return DensityOperator(states[k].matrix(n), tol); }));
        ParametricFamily family(grid, std::move(rhos), tol);
        if (node.has("derivatives")) {
            const Node dn = node.at("derivatives");
            if (dn.size() != points) dn.error("expected one entry per grid point");
            DerivativeTable table(points);
            for (std::size_t k = 0; k < points; ++k) {
                if (dn[k].size() != d) dn[k].error("expected one derivative per parameter");
                for (std::size_t j = 0; j < d; ++j) table[k].push_back(dn[k][j].matrix(n));
            }
            family = guarded(dn, [&] { return family.with_derivatives(std::move(table)); });
        }
        return {kind, std::move(family), {}, {}};
    }
    if (kind == "diagonal") {
        if (d != 1) node.error("diagonal families take a single parameter");
        const Node pn = node.at("probabilities");
        const Node dn = node.at("derivatives");
        if (pn.size() != points) pn.error("expected one probability vector per grid point");
        if (dn.size() != points) dn.error("expected one derivative vector per grid point");
        std::vector<RealVector> p;
        std::vector<RealVector> dp;
        for (std::size_t k = 0; k < points; ++k) {
            p.push_back(pn[k].vector(static_cast<std::size_t>(n)));
            dp.push_back(dn[k].vector(static_cast<std::size_t>(n)));
        }
        DiagonalFamily df = guarded(node, [&] { return classical_diagonal_family(grid, p, dp, tol); });
        return {kind, std::move(df.family), {}, {}};
    }
    if (kind == "exponential") {
        const DensityOperator rho0 =
            guarded(node.at("rho0"), [&] { return DensityOperator(node.at("rho0").matrix(n), tol); });
        const std::vector<ComplexMatrix> gens = parse_generators(node, "generator", "generators", n);
        LiapunovFamily lf = guarded(node, [&] { return exponential_family(grid, rho0, gens, tol); });
        ParametricFamily family = lf.base;
        return {kind, std::move(family), std::move(lf), {}};
    }
    if (kind == "unitary_orbit") {
        if (d != 1) node.error("unitary orbits take a single parameter");
        const ComplexMatrix rho0 =
            guarded(node.at("rho0"), [&] { return DensityOperator(node.at("rho0").matrix(n), tol).matrix(); });
        const ComplexMatrix gen = node.at("generator").matrix(n);
        if (operator_norm(ComplexMatrix(gen + gen.adjoint())) > tol.relative(tol.herm, operator_norm(gen)))
            node.at("generator").error("generator must be anti-Hermitian");
        StateCallback cb = [rho0, gen](const RealVector &theta) {
            const ComplexMatrix u = (theta(0) * gen).exp();
            return ComplexMatrix(hermitian_part(u * rho0 * u.adjoint()));
        };
        return {kind, guarded(node, [&] { return ParametricFamily::from_callback(grid, cb, tol); }), {}, {}};
    }
    if (kind == "mixture") {
        const Node comps = node.at("components");
        if (comps.size() == 0) comps.error("a mixture needs at least one component");
        std::vector<LiapunovFamily> components;
        for (std::size_t r = 0; r < comps.size(); ++r) {
            const Node c = comps[r];
            const DensityOperator rho0 =
                guarded(c.at("rho0"), [&] { return DensityOperator(c.at("rho0").matrix(n), tol); });
            std::vector<ComplexMatrix> gens;
            if (c.has("generator") || c.has("generators"))
                gens = parse_generators(c, "generator", "generators", n);
            else
                gens.assign(d, ComplexMatrix::Zero(n, n));
            components.push_back(guarded(c, [&] { return exponential_family(grid, rho0, gens, tol); }));
        }
        const Node wn = node.at("weights");
        const Node gn = node.at("weight_derivatives");
        if (wn.size() != points) wn.error("expected one weight vector per grid point");
        if (gn.size() != points) gn.error("expected one entry per grid point");
        std::vector<RealVector> weights;
        std::vector<RealMatrix> grads;
        const auto rc = static_cast<Eigen::Index>(components.size());
        for (std::size_t k = 0; k < points; ++k) {
            weights.push_back(wn[k].vector(components.size()));
            if (gn[k].size() != components.size()) gn[k].error("expected one entry per component");
            RealMatrix g(rc, static_cast<Eigen::Index>(d));
            for (std::size_t r = 0; r < components.size(); ++r)
                g.row(static_cast<Eigen::Index>(r)) = gn[k][r].point(d).transpose();
            grads.push_back(std::move(g));
        }
        MixtureFamily mf =
            guarded(node, [&] { return make_mixture(std::move(components), std::move(weights), std::move(grads), tol); });
        ParametricFamily mixed = guarded(node, [&] { return mf.mixed_family(tol); });
        return {kind, std::move(mixed), {}, std::move(mf)};
    }
    node.at("kind").error("unknown family kind '" + kind + "'");
}

std::vector<FisherMap> parse_fisher(const Node &root, const BuiltFamily &built, const Tolerances &tol,
                                    std::vector<CheckResult> &checks) {
    std::vector<FisherMap> maps;
    if (!root.has("fisher")) return maps;
    const Node list = root.at("fisher");
    const ParametricFamily &family = built.family;
    const std::size_t d = family.grid().d();
    const Eigen::Index n = family.dim();
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Node spec = list[i];
        const std::string type = spec.at("type").string();
        std::vector<FisherMap> produced;
        if (type == "derivative") {
            if (spec.has("orders")) {
                const Node orders = spec.at("orders");
                std::vector<MultiIndex> idx;
                for (std::size_t a = 0; a < orders.size(); ++a) {
                    const Node o = orders[a];
                    MultiIndex alpha;
                    if (d == 1 && o.raw().is_number()) {
                        alpha.push_back(static_cast<int>(o.integer()));
                    } else {
                        if (o.size() != d) o.error("multi-index needs one order per parameter");
                        for (std::size_t j = 0; j < d; ++j) alpha.push_back(static_cast<int>(o[j].integer()));
                    }
                    idx.push_back(std::move(alpha));
                }
                produced = guarded(spec, [&] { return bhattacharya_maps(family, idx, tol, false); });
            } else {
                produced = guarded(spec, [&] { return derivative_maps(family, tol, false); });
            }
        } else if (type == "barankin") {
            const Node gammas = spec.at("gammas");
            std::vector<std::size_t> idx;
            for (std::size_t a = 0; a < gammas.size(); ++a) {
                const RealVector g = gammas[a].point(d);
                idx.push_back(guarded(gammas[a], [&] { return family.grid().index_of(g, 1e-12); }));
            }
            produced = guarded(spec, [&] { return barankin_maps(family, idx, tol); });
        } else if (type == "liapunov") {
            if (!built.liapunov) spec.error("liapunov maps need an exponential family");
            const LiapunovReport r = liapunov_validate(*built.liapunov, tol);
            std::ostringstream os;
            os << "derivative residual " << format_number(r.derivative_residual) << ", centering " << format_number(r.centering_defect);
            checks.push_back({"liapunov equation", r.ok, os.str()});
            const LiapunovFamily centred = recenter(*built.liapunov);
            for (std::size_t j = 0; j < d; ++j) {
                FisherMap m{"liapunov[" + std::to_string(j) + "]", {}};
                for (std::size_t k = 0; k < family.size(); ++k) m.values.push_back(centred.coefficients[k][j]);
                produced.push_back(std::move(m));
            }
        } else if (type == "lie_orbit") {
            const std::vector<ComplexMatrix> gens = parse_generators(spec, "generator", "generators", n);
            produced = guarded(spec, [&] { return lie_orbit_maps(family, gens, tol); });
            double worst = 0.0;
            for (std::size_t k = 0; k < family.size(); ++k) {
                const RealMatrix direct = guarded(spec, [&] { return lie_orbit_information(family.state(k), gens, tol); });
                worst = std::max(worst, (direct - information_matrix(produced, family, k)).cwiseAbs().maxCoeff());
            }
            std::ostringstream os;
            os << "max difference " << format_number(worst);
            checks.push_back({"lie orbit information trace formula", worst <= tol.fisher, os.str()});
        } else if (type == "explicit") {
            FisherMap m{spec.has("label") ? spec.at("label").string() : "explicit" + std::to_string(i), {}};
            const Node mats = spec.at("matrices");
            if (mats.size() != family.size()) mats.error("expected one matrix per grid point");
            for (std::size_t k = 0; k < family.size(); ++k) m.values.push_back(mats[k].matrix(n));
            produced.push_back(std::move(m));
        } else {
            spec.at("type").error("unknown Fisher map type '" + type + "'");
        }
        if (spec.has("label") && type != "explicit") {
            const std::string base = spec.at("label").string();
            for (std::size_t j = 0; j < produced.size(); ++j)
                produced[j].label = produced.size() == 1 ? base : base + "[" + std::to_string(j) + "]";
        }
        for (auto &m : produced) maps.push_back(std::move(m));
    }
    return maps;
}

struct PovmSetup {
    GeneralizedMeasurement measurement;
    std::vector<std::vector<double>> phis;
};

struct Estimators {
    std::vector<EstimableBinding> bindings; // observables, or induced observables for a measurement
    std::optional<PovmSetup> povm;
};

Estimators parse_estimators(const Node &root, const ParametricFamily &family, const Tolerances &tol) {
    const Eigen::Index n = family.dim();
    const std::size_t points = family.size();
    Estimators out;
    if (root.has("povm")) {
        if (root.has("estimators")) root.error("give either 'estimators' or 'povm', not both");
        const Node node = root.at("povm");
        const Node kn = node.at("kraus");
        std::vector<ComplexMatrix> kraus;
        for (std::size_t s = 0; s < kn.size(); ++s) kraus.push_back(kn[s].matrix(n));
        std::vector<std::string> labels;
        if (node.has("labels")) {
            const Node ln = node.at("labels");
            if (ln.size() != kraus.size()) ln.error("expected one label per Kraus operator");
            for (std::size_t s = 0; s < ln.size(); ++s) labels.push_back(ln[s].string());
        } else {
            for (std::size_t s = 0; s < kraus.size(); ++s) labels.push_back(std::to_string(s));
        }
        GeneralizedMeasurement m =
            guarded(kn, [&] { return GeneralizedMeasurement(std::move(labels), std::move(kraus)); });
        guarded(kn, [&] {
            require_valid(m, tol);
            return 0;
        });
        PovmSetup setup{std::move(m), {}};
        const Node list = node.at("estimators");
        if (list.size() == 0) list.error("at least one estimator is required");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const Node e = list[i];
            std::vector<double> phi = e.at("values").values(setup.measurement.size());
            std::vector<double> f = e.at("f").values(points);
            const PovmUnbiasedness u = guarded(e, [&] { return povm_is_unbiased(setup.measurement, phi, family, f, tol); });
            if (!u.ok) {
                std::ostringstream os;
                os << "estimator is biased: defect " << format_number(u.max_defect) << " at grid point " << u.worst_point;
                e.error(os.str());
            }
            const std::string name = e.has("name") ? e.at("name").string() : "phi" + std::to_string(i);
            out.bindings.push_back(EstimableBinding{name, std::move(f), u.induced});
            setup.phis.push_back(std::move(phi));
        }
        out.povm = std::move(setup);
        return out;
    }
    const Node list = root.at("estimators");
    if (list.size() == 0) list.error("at least one estimator is required");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const Node e = list[i];
        const Observable x = guarded(e.at("observable"), [&] { return Observable(e.at("observable").matrix(n), tol); });
        std::vector<double> f = e.at("f").values(points);
        const UnbiasednessReport u = is_unbiased(x, f, family, tol);
        if (!u.ok) {
            std::ostringstream os;
            os << "estimator is biased: defect " << format_number(u.max_defect) << " at grid point " << u.worst_point;
            e.error(os.str());
        }
        const std::string name = e.has("name") ? e.at("name").string() : "x" + std::to_string(i);
        out.bindings.push_back(EstimableBinding{name, std::move(f), x});
    }
    return out;
}

std::string join(const std::vector<FisherMap> &maps, std::size_t count) {
    std::string s;
    for (std::size_t j = 0; j < count; ++j) s += (j ? "+" : "") + maps[j].label;
    return s;
}

std::vector<std::string> labels_of(const std::vector<EstimableBinding> &bindings) {
    std::vector<std::string> out;
    for (const auto &b : bindings) out.push_back(b.label);
    return out;
}

void add_aggregate(std::vector<CheckResult> &checks, const std::string &name, bool ok, const std::string &detail) {
    checks.push_back({name, ok, detail});
}

ScenarioResult run(const Node &root, const RunOptions &options) {
    if (!root.raw().is_object()) root.error("scenario must be a JSON object");
    const long long version = root.at("schema_version").integer();
    if (version != 1) root.at("schema_version").error("unsupported schema version " + std::to_string(version));

    ScenarioResult result;
    result.name = root.at("name").string();
    const long long dim = root.at("dim").integer();
    if (dim < 1) root.at("dim").error("must be at least 1");
    const auto n = static_cast<Eigen::Index>(dim);
    const Tolerances tol = parse_tolerances(root, options.tol_scale);
    const ParameterGrid grid = parse_grid(root);
    BuiltFamily built = parse_family(root, grid, n, tol);
    const ParametricFamily &family = built.family;
    if (family.dim() != n) root.at("dim").error("does not match the family dimension");

    Estimators est = parse_estimators(root, family, tol);
    const std::vector<FisherMap> maps = parse_fisher(root, built, tol, result.checks);
    if (maps.empty() && !built.mixture) root.error("no Fisher maps given ('fisher' is empty or missing)");

    result.dim = n;
    result.grid_size = grid.size();
    result.parameters = grid.d();
    for (const auto &m : maps) result.fisher_labels.push_back(m.label);
    result.estimator_labels = labels_of(est.bindings);

    // Fisher map conditions.
    const std::vector<Observable> basis = balanced_space_basis(family, tol);
    for (const auto &m : maps) {
        const FisherMapReport r = guarded(root, [&] { return validate_fisher_map(m, family, basis, tol); });
        std::ostringstream os;
        os << "centering " << format_number(r.centering_defect) << ", orthogonality " << format_number(r.orthogonality_defect);
        add_aggregate(result.checks, "fisher map " + m.label, r.ok, os.str());
    }

    // Measurement-specific checks.
    if (est.povm) {
        const GeneralizedMeasurement &m = est.povm->measurement;
        const NaimarkDilation dil = dilate(m, false, tol);
        const DilationDefects dd = dilation_defects(m, dil);
        const bool ok = dd.completeness <= tol.completeness && dd.orthogonality <= tol.completeness &&
                        dd.block <= tol.completeness;
        std::ostringstream os;
        os << "dimension " << dil.big_dim << ", completeness " << format_number(dd.completeness) << ", orthogonality "
           << format_number(dd.orthogonality) << ", block " << format_number(dd.block);
        add_aggregate(result.checks, "naimark dilation", ok, os.str());
        bool var_ok = true;
        std::string var_detail = "direct and dilated variances agree";
        for (std::size_t i = 0; i < est.povm->phis.size() && var_ok; ++i)
            for (std::size_t k = 0; k < family.size() && var_ok; ++k) {
                try {
                    povm_variance(m, est.povm->phis[i], family, est.bindings[i].f_values, k, tol);
                } catch (const Error &e) {
                    var_ok = false;
                    var_detail = e.what();
                }
            }
        add_aggregate(result.checks, "measurement variance", var_ok, var_detail);
    }

    // Bounds for every prefix of the map list, then the mixture bound.
    std::vector<std::vector<double>> f_lists;
    for (const auto &b : est.bindings) f_lists.push_back(b.f_values);
    std::vector<std::vector<RealMatrix>> prefix_bounds(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t count = 1; count <= maps.size(); ++count) {
            const std::vector<FisherMap> subset(maps.begin(), maps.begin() + static_cast<std::ptrdiff_t>(count));
            CrbReport report = guarded(root, [&] {
                if (est.povm)
                    return crb_report(
                        k, povm_covariance(est.povm->measurement, est.povm->phis, family, f_lists, k, tol),
                        est.bindings, subset, family, tol);
                return crb_bound(est.bindings, subset, family, k, tol);
            });
            PointResult pr{k, grid.point(k), join(maps, count), result.estimator_labels, report,
                           report.bound_holds(tol.bound) && report.range_ok};
            prefix_bounds[k].push_back(report.bound);
            result.points.push_back(std::move(pr));
        }
        if (built.mixture) {
            const MixtureBound mb = guarded(root, [&] { return mixture_bound(*built.mixture, est.bindings, k, tol); });
            PointResult pr{k, grid.point(k), "mixture", result.estimator_labels, mb.report,
                           mb.report.bound_holds(tol.bound) && mb.report.range_ok};
            result.points.push_back(std::move(pr));
        }
    }

    // Aggregate per bound kind.
    std::map<std::string, std::pair<double, bool>> worst_gap;
    std::vector<std::string> order;
    for (const auto &p : result.points) {
        auto it = worst_gap.find(p.bound_kind);
        if (it == worst_gap.end()) {
            order.push_back(p.bound_kind);
            it = worst_gap.emplace(p.bound_kind, std::make_pair(p.report.min_gap(), true)).first;
        }
        it->second.first = std::min(it->second.first, p.report.min_gap());
        it->second.second = it->second.second && p.report.range_ok;
    }
    for (const auto &kind : order) {
        const auto &[gap, range] = worst_gap.at(kind);
        std::ostringstream os;
        os << "minimum gap eigenvalue " << format_number(gap);
        add_aggregate(result.checks, "bound " + kind, gap >= -tol.bound, os.str());
        add_aggregate(result.checks, "range condition " + kind, range, range ? "rows of lambda lie in the range of I" : "residual above tolerance");
    }

    // Monotonicity along the prefix chain.
    for (std::size_t count = 2; count <= maps.size(); ++count) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const RealMatrix diff = prefix_bounds[k][count - 1] - prefix_bounds[k][count - 2];
            worst = std::min(worst, symmetric_eigenvalues(diff).minCoeff());
        }
        std::ostringstream os;
        os << "minimum eigenvalue of the increment " << format_number(worst);
        add_aggregate(result.checks, "monotonicity " + join(maps, count), worst >= -tol.bound, os.str());
    }

    // Lambda does not depend on the estimator chosen within X + N.
    if (!maps.empty()) {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> normal;
        double worst = 0.0;
        if (!basis.empty()) {
            for (const auto &b : est.bindings) {
                ComplexMatrix z = ComplexMatrix::Zero(n, n);
                for (const auto &zb : basis) z += normal(rng) * zb.matrix();
                z /= z.norm();
                const Observable shifted(b.estimator.matrix() + z, tol);
                for (const auto &m : maps)
                    for (std::size_t k = 0; k < grid.size(); ++k)
                        worst = std::max(worst, std::abs(crb_tensor(shifted, m, family, k) -
                                                         crb_tensor(b.estimator, m, family, k)));
            }
        }
        std::ostringstream os;
        os << "balanced dimension " << basis.size() << ", max change " << format_number(worst);
        add_aggregate(result.checks, "lambda invariance", worst <= tol.herm, os.str());
    }

    // Optional expectations stated by the scenario author.
    if (root.has("expect")) {
        const Node ex = root.at("expect");
        const std::string full = maps.empty() ? "mixture" : join(maps, maps.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto &p : result.points)
            if (p.bound_kind == full) {
                lo = std::min(lo, p.report.gap_spectrum.minCoeff());
                hi = std::max(hi, p.report.gap_spectrum.maxCoeff());
            }
        if (ex.has("tight") && ex.at("tight").boolean()) {
            const double spread = std::max(std::abs(lo), std::abs(hi));
            std::ostringstream os;
            os << "largest gap eigenvalue magnitude " << format_number(spread);
            add_aggregate(result.checks, "bound attained " + full, spread <= tol.fisher, os.str());
        }
        if (ex.has("min_gap_at_least")) {
            const double want = ex.at("min_gap_at_least").number();
            std::ostringstream os;
            os << "minimum gap eigenvalue " << format_number(lo) << " against " << format_number(want);
            add_aggregate(result.checks, "strict gap " + full, lo >= want, os.str());
        }
    }
    return result;
}

} // namespace

ScenarioResult run_scenario_text(const std::string &text, const RunOptions &options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ScenarioError(std::string("parse error: ") + e.what());
    }
    return run(Node(doc, ""), options);
}

ScenarioResult run_scenario_file(const std::string &path, const RunOptions &options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return run_scenario_text(buf.str(), options);
}

} // namespace qcrb::scenario
