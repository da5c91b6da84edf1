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

#include <span>
#include <string>
#include <vector>

#include "qcrb/quantum_state.hpp"

namespace qcrb {

/// Finite outcome set with one Kraus operator per outcome. Completeness
/// (sum L^dagger L = I) is not enforced on construction so that defective
/// inputs can still be reported by `validate`; every operation that needs a
/// proper measurement checks it.
class GeneralizedMeasurement {
  public:
    GeneralizedMeasurement(std::vector<std::string> outcomes, std::vector<ComplexMatrix> kraus);

    /// Outcomes labelled "0", "1", ...
    static GeneralizedMeasurement from_kraus(std::vector<ComplexMatrix> kraus);
    /// Projective measurement in the computational basis.
    static GeneralizedMeasurement computational(Eigen::Index n);
    /// Projective measurement onto the columns of a unitary.
    static GeneralizedMeasurement orthonormal_basis(const ComplexMatrix &unitary);

    const std::vector<std::string> &outcomes() const noexcept { return outcomes_; }
    const std::vector<ComplexMatrix> &kraus() const noexcept { return kraus_; }
    std::size_t size() const noexcept { return kraus_.size(); }
    Eigen::Index dim() const noexcept { return kraus_.front().cols(); }

    /// T(s) = L(s)^dagger L(s).
    ComplexMatrix effect(std::size_t s) const;
    std::vector<ComplexMatrix> effects() const;

    /// Throws InvalidArgument if the label is unknown.
    std::size_t index_of(const std::string &label) const;

  private:
    std::vector<std::string> outcomes_;
    std::vector<ComplexMatrix> kraus_;
};

struct CompletenessReport {
    double defect = 0.0; // || sum L^dagger L - I ||
    bool ok = false;
};

CompletenessReport validate(const GeneralizedMeasurement &m,
                            const Tolerances &tol = default_tolerances());

/// Throws InvalidMeasurement when `validate` fails.
void require_valid(const GeneralizedMeasurement &m, const Tolerances &tol = default_tolerances());

struct OutcomeDistribution {
    std::vector<std::string> outcomes;
    std::vector<double> probabilities;

    double probability(const std::string &label) const;
};

OutcomeDistribution outcome_probabilities(const GeneralizedMeasurement &m,
                                          const DensityOperator &rho,
                                          const Tolerances &tol = default_tolerances());

/// Post-measurement state L(s) rho L(s)^dagger / p(s).
DensityOperator collapse(const GeneralizedMeasurement &m, const DensityOperator &rho,
                         const std::string &label, const Tolerances &tol = default_tolerances());

/// M1 followed by M2: outcomes (s1, s2) in lexicographic order with s1 major,
/// labelled "s1,s2", Kraus operators L2(s2) L1(s1).
GeneralizedMeasurement compose_sequential(const GeneralizedMeasurement &first,
                                          const GeneralizedMeasurement &second);

/// -sum p log2 p with 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

/// Entropy in bits of the outcome distribution of `m` in state `rho`.
double entropy(const GeneralizedMeasurement &m, const DensityOperator &rho,
               const Tolerances &tol = default_tolerances());

/// -2 log2 max_{s,t} ||X(s)^{1/2} Y(t)^{1/2}||. State independent lower bound
/// on entropy(l, rho) + entropy(m, rho).
double entropic_bound(const GeneralizedMeasurement &l, const GeneralizedMeasurement &m,
                      const Tolerances &tol = default_tolerances());

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of the real value attached to each outcome.
MeanVariance measurement_mean_variance(const GeneralizedMeasurement &m,
                                       std::span<const double> values, const DensityOperator &rho,
                                       const Tolerances &tol = default_tolerances());

} // namespace qcrb
