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

#include "qcrb/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qcrb {

namespace {

void require_dims(const GeneralizedMeasurement &m, const DensityOperator &rho, const char *context) {
    if (m.dim() != rho.dim()) {
        std::ostringstream os;
        os << context << ": measurement dimension " << m.dim() << " vs state dimension " << rho.dim();
        fail(ErrorCode::DimensionMismatch, os.str());
    }
}

} // namespace

GeneralizedMeasurement::GeneralizedMeasurement(std::vector<std::string> outcomes,
                                               std::vector<ComplexMatrix> kraus)
    : outcomes_(std::move(outcomes)), kraus_(std::move(kraus)) {
    if (kraus_.empty()) fail(ErrorCode::InvalidArgument, "measurement needs at least one outcome");
    if (outcomes_.size() != kraus_.size())
        fail(ErrorCode::InvalidArgument, "one label per Kraus operator is required");
    const Eigen::Index n = kraus_.front().cols();
    for (const auto &l : kraus_) {
        if (l.rows() != n || l.cols() != n)
            fail(ErrorCode::DimensionMismatch, "Kraus operators must all be n x n");
        if (!l.allFinite()) fail(ErrorCode::DomainError, "Kraus operator has non-finite entries");
    }
    std::set<std::string> seen(outcomes_.begin(), outcomes_.end());
    if (seen.size() != outcomes_.size()) fail(ErrorCode::InvalidArgument, "duplicate outcome label");
}

GeneralizedMeasurement GeneralizedMeasurement::from_kraus(std::vector<ComplexMatrix> kraus) {
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < kraus.size(); ++s) labels.push_back(std::to_string(s));
    return GeneralizedMeasurement(std::move(labels), std::move(kraus));
}

GeneralizedMeasurement GeneralizedMeasurement::computational(Eigen::Index n) {
    return orthonormal_basis(ComplexMatrix::Identity(n, n));
}

GeneralizedMeasurement GeneralizedMeasurement::orthonormal_basis(const ComplexMatrix &unitary) {
    std::vector<ComplexMatrix> kraus;
    for (Eigen::Index k = 0; k < unitary.cols(); ++k)
        kraus.push_back(unitary.col(k) * unitary.col(k).adjoint());
    return from_kraus(std::move(kraus));
}

ComplexMatrix GeneralizedMeasurement::effect(std::size_t s) const {
    return hermitian_part(kraus_.at(s).adjoint() * kraus_.at(s));
}

std::vector<ComplexMatrix> GeneralizedMeasurement::effects() const {
    std::vector<ComplexMatrix> out;
    out.reserve(size());
    for (std::size_t s = 0; s < size(); ++s) out.push_back(effect(s));
    return out;
}

std::size_t GeneralizedMeasurement::index_of(const std::string &label) const {
    const auto it = std::find(outcomes_.begin(), outcomes_.end(), label);
    if (it == outcomes_.end()) fail(ErrorCode::InvalidArgument, "unknown outcome '" + label + "'");
    return static_cast<std::size_t>(it - outcomes_.begin());
}

CompletenessReport validate(const GeneralizedMeasurement &m, const Tolerances &tol) {
    ComplexMatrix sum = -ComplexMatrix::Identity(m.dim(), m.dim());
    for (std::size_t s = 0; s < m.size(); ++s) sum += m.effect(s);
    CompletenessReport report;
    report.defect = operator_norm(sum);
    report.ok = report.defect <= tol.completeness;
    return report;
}

void require_valid(const GeneralizedMeasurement &m, const Tolerances &tol) {
    const auto report = validate(m, tol);
    if (!report.ok) {
        std::ostringstream os;
        os << "completeness defect " << report.defect << " exceeds " << tol.completeness;
        fail(ErrorCode::InvalidMeasurement, os.str());
    }
}

double OutcomeDistribution::probability(const std::string &label) const {
    const auto it = std::find(outcomes.begin(), outcomes.end(), label);
    if (it == outcomes.end()) fail(ErrorCode::InvalidArgument, "unknown outcome '" + label + "'");
    return probabilities[static_cast<std::size_t>(it - outcomes.begin())];
}

OutcomeDistribution outcome_probabilities(const GeneralizedMeasurement &m,
                                          const DensityOperator &rho, const Tolerances &tol) {
    require_dims(m, rho, "outcome_probabilities");
    require_valid(m, tol);
    OutcomeDistribution out;
    out.outcomes = m.outcomes();
    out.probabilities.reserve(m.size());
    for (std::size_t s = 0; s < m.size(); ++s) {
        const double p = (rho.matrix() * m.effect(s)).trace().real();
        out.probabilities.push_back(std::clamp(p, 0.0, 1.0));
    }
    return out;
}

DensityOperator collapse(const GeneralizedMeasurement &m, const DensityOperator &rho,
                         const std::string &label, const Tolerances &tol) {
    require_dims(m, rho, "collapse");
    require_valid(m, tol);
    const ComplexMatrix &l = m.kraus()[m.index_of(label)];
    const ComplexMatrix unnormalised = l * rho.matrix() * l.adjoint();
    const double p = unnormalised.trace().real();
    if (p <= tol.collapse_floor) {
        std::ostringstream os;
        os << "outcome '" << label << "' has probability " << p;
        fail(ErrorCode::ZeroProbabilityOutcome, os.str());
    }
    return DensityOperator(hermitian_part(unnormalised) / p, tol);
}

GeneralizedMeasurement compose_sequential(const GeneralizedMeasurement &first,
                                          const GeneralizedMeasurement &second) {
    if (first.dim() != second.dim())
        fail(ErrorCode::DimensionMismatch, "compose_sequential: measurement dimensions differ");
    std::vector<std::string> labels;
    std::vector<ComplexMatrix> kraus;
    labels.reserve(first.size() * second.size());
    kraus.reserve(first.size() * second.size());
    for (std::size_t a = 0; a < first.size(); ++a) {
        for (std::size_t b = 0; b < second.size(); ++b) {
            labels.push_back(first.outcomes()[a] + "," + second.outcomes()[b]);
            kraus.push_back(second.kraus()[b] * first.kraus()[a]);
        }
    }
    return GeneralizedMeasurement(std::move(labels), std::move(kraus));
}

double shannon_entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for (const double p : probabilities)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double entropy(const GeneralizedMeasurement &m, const DensityOperator &rho, const Tolerances &tol) {
    return shannon_entropy(outcome_probabilities(m, rho, tol).probabilities);
}

double entropic_bound(const GeneralizedMeasurement &l, const GeneralizedMeasurement &m,
                      const Tolerances &tol) {
    if (l.dim() != m.dim()) fail(ErrorCode::DimensionMismatch, "entropic_bound: dimensions differ");
    require_valid(l, tol);
    require_valid(m, tol);
    std::vector<ComplexMatrix> roots_m;
    for (std::size_t t = 0; t < m.size(); ++t) roots_m.push_back(sqrt_psd(m.effect(t), tol));
    double overlap = 0.0;
    for (std::size_t s = 0; s < l.size(); ++s) {
        const ComplexMatrix root = sqrt_psd(l.effect(s), tol);
        for (const auto &other : roots_m) overlap = std::max(overlap, operator_norm(ComplexMatrix(root * other)));
    }
    // Completeness forces the overlap to be positive; clamp roundoff above 1.
    return -2.0 * std::log2(std::min(overlap, 1.0));
}

MeanVariance measurement_mean_variance(const GeneralizedMeasurement &m,
                                       std::span<const double> values, const DensityOperator &rho,
                                       const Tolerances &tol) {
    if (values.size() != m.size())
        fail(ErrorCode::DimensionMismatch, "one value per outcome is required");
    const auto dist = outcome_probabilities(m, rho, tol);
    MeanVariance out;
    double second = 0.0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        out.mean += values[s] * dist.probabilities[s];
        second += values[s] * values[s] * dist.probabilities[s];
    }
    out.variance = std::max(0.0, second - out.mean * out.mean);
    return out;
}

} // namespace qcrb
