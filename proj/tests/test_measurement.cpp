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

#include <cmath>

#include <gtest/gtest.h>

#include "qcrb/measurement.hpp"
#include "test_support.hpp"

namespace qcrb {
namespace {

using testing::Rng;

const ComplexMatrix kI2 = ComplexMatrix::Identity(2, 2);

GeneralizedMeasurement half_x() {
    return GeneralizedMeasurement::from_kraus({kI2 / std::sqrt(2.0), ops::pauli_x() / std::sqrt(2.0)});
}

GeneralizedMeasurement hadamard_basis() {
    ComplexMatrix h(2, 2);
    h << 1, 1, 1, -1;
    return GeneralizedMeasurement::orthonormal_basis(h / std::sqrt(2.0));
}

DensityOperator qz(double theta) { return DensityOperator(0.5 * (kI2 + theta * ops::pauli_z())); }

TEST(Measurement, ValidateExamples) {
    EXPECT_TRUE(validate(GeneralizedMeasurement::computational(2)).ok);
    EXPECT_TRUE(validate(half_x()).ok);
    const CompletenessReport bad = validate(GeneralizedMeasurement::from_kraus({kI2, kI2}));
    EXPECT_FALSE(bad.ok);
    EXPECT_NEAR(bad.defect, 1.0, 1e-14);
    EXPECT_THROW(require_valid(GeneralizedMeasurement::from_kraus({kI2, kI2})), Error);
}

TEST(Measurement, RejectsDuplicateLabels) {
    EXPECT_THROW(GeneralizedMeasurement({"a", "a"}, {kI2, kI2}), Error);
}

TEST(Measurement, OutcomeProbabilityExamples) {
    const auto m = GeneralizedMeasurement::computational(2);
    const auto uniform = outcome_probabilities(m, DensityOperator::maximally_mixed(2));
    EXPECT_NEAR(uniform.probabilities[0], 0.5, 1e-15);
    EXPECT_NEAR(uniform.probabilities[1], 0.5, 1e-15);
    const auto det = outcome_probabilities(m, DensityOperator::pure(ops::basis_vector(2, 0)));
    EXPECT_NEAR(det.probabilities[0], 1.0, 1e-15);
    EXPECT_NEAR(det.probabilities[1], 0.0, 1e-15);
    const auto biased = outcome_probabilities(m, qz(0.5));
    EXPECT_NEAR(biased.probability("0"), 0.75, 1e-15);
    EXPECT_NEAR(biased.probability("1"), 0.25, 1e-15);
}

TEST(Measurement, CollapseExamples) {
    const auto m = GeneralizedMeasurement::computational(2);
    const DensityOperator zero = DensityOperator::pure(ops::basis_vector(2, 0));
    EXPECT_LE(max_abs_entry(ComplexMatrix(collapse(m, zero, "0").matrix() - zero.matrix())), 1e-15);

    Rng rng(53);
    const ComplexMatrix u = testing::random_unitary(rng, 3);
    const DensityOperator rho(testing::random_density(rng, 3));
    const auto unitary = GeneralizedMeasurement::from_kraus({u});
    EXPECT_LE(max_abs_entry(ComplexMatrix(collapse(unitary, rho, "0").matrix() - u * rho.matrix() * u.adjoint())), 1e-12);

    const ComplexVector plus = (ops::basis_vector(2, 0) + ops::basis_vector(2, 1)) / std::sqrt(2.0);
    const DensityOperator after = collapse(m, DensityOperator::pure(plus), "0");
    EXPECT_LE(max_abs_entry(ComplexMatrix(after.matrix() - zero.matrix())), 1e-15);

    try {
        collapse(m, zero, "1");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroProbabilityOutcome);
    }
}

TEST(Measurement, SequentialCompositionExamples) {
    const DensityOperator zero = DensityOperator::pure(ops::basis_vector(2, 0));
    const auto trivial = GeneralizedMeasurement::from_kraus({kI2});
    const auto comp = GeneralizedMeasurement::computational(2);

    const auto with_trivial = compose_sequential(half_x(), trivial);
    const auto p1 = outcome_probabilities(half_x(), qz(0.3));
    const auto p2 = outcome_probabilities(with_trivial, qz(0.3));
    ASSERT_EQ(p2.probabilities.size(), 2u);
    EXPECT_NEAR(p1.probabilities[0], p2.probabilities[0], 1e-15);

    const auto repeated = compose_sequential(comp, comp);
    const auto pr = outcome_probabilities(repeated, qz(0.5));
    EXPECT_EQ(repeated.outcomes()[1], "0,1");
    EXPECT_NEAR(pr.probability("0,0"), 0.75, 1e-15);
    EXPECT_NEAR(pr.probability("0,1"), 0.0, 1e-15);
    EXPECT_NEAR(pr.probability("1,0"), 0.0, 1e-15);
    EXPECT_NEAR(pr.probability("1,1"), 0.25, 1e-15);

    const auto chain = compose_sequential(half_x(), comp);
    const auto pc = outcome_probabilities(chain, zero);
    // I/sqrt2 keeps |0>, sigma_x/sqrt2 sends it to |1>; each branch has weight 1/2.
    EXPECT_NEAR(pc.probability("0,0"), 0.5, 1e-15);
    EXPECT_NEAR(pc.probability("0,1"), 0.0, 1e-15);
    EXPECT_NEAR(pc.probability("1,0"), 0.0, 1e-15);
    EXPECT_NEAR(pc.probability("1,1"), 0.5, 1e-15);
}

TEST(Measurement, SequentialMarginalsOnRandomInstances) {
    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 1, 4);
        const auto m1 = testing::random_measurement(rng, n, testing::uniform_int(rng, 1, 3));
        const auto m2 = testing::random_measurement(rng, n, testing::uniform_int(rng, 1, 3));
        const DensityOperator rho(testing::random_density(rng, n));
        const auto joint = compose_sequential(m1, m2);
        EXPECT_TRUE(validate(joint).ok);
        const auto pj = outcome_probabilities(joint, rho);
        const auto p1 = outcome_probabilities(m1, rho);
        for (std::size_t s1 = 0; s1 < m1.size(); ++s1) {
            double sum = 0.0;
            for (std::size_t s2 = 0; s2 < m2.size(); ++s2) sum += pj.probabilities[s1 * m2.size() + s2];
            EXPECT_NEAR(sum, p1.probabilities[s1], 1e-9);
        }
    }
}

TEST(Measurement, EntropyExamples) {
    const std::vector<double> uniform{0.5, 0.5};
    const std::vector<double> det{1.0, 0.0};
    const std::vector<double> biased{0.75, 0.25};
    EXPECT_NEAR(shannon_entropy(uniform), 1.0, 1e-15);
    EXPECT_NEAR(shannon_entropy(det), 0.0, 1e-15);
    EXPECT_NEAR(shannon_entropy(biased), 0.8112781245, 1e-10);
    EXPECT_NEAR(entropy(GeneralizedMeasurement::computational(2), qz(0.5)), 0.8112781245, 1e-10);
}

TEST(Measurement, EntropicBoundExamples) {
    const auto comp = GeneralizedMeasurement::computational(2);
    EXPECT_NEAR(entropic_bound(comp, hadamard_basis()), 1.0, 1e-12);
    EXPECT_NEAR(entropic_bound(comp, comp), 0.0, 1e-12);
    EXPECT_NEAR(entropic_bound(comp, GeneralizedMeasurement::from_kraus({kI2})), 0.0, 1e-12);
}

TEST(Measurement, EntropicInequalityOnRandomTriples) {
    Rng rng(61);
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 2, 4);
        const auto l = testing::random_measurement(rng, n, testing::uniform_int(rng, 2, 4));
        const auto m = testing::random_measurement(rng, n, testing::uniform_int(rng, 2, 4));
        const DensityOperator rho(testing::random_density(rng, n));
        EXPECT_GE(entropy(l, rho) + entropy(m, rho), entropic_bound(l, m) - 1e-9);
    }
}

TEST(Measurement, MeanVarianceExamples) {
    const auto comp = GeneralizedMeasurement::computational(2);
    const std::vector<double> spin{1.0, -1.0};
    const auto a = measurement_mean_variance(comp, spin, DensityOperator::maximally_mixed(2));
    EXPECT_NEAR(a.mean, 0.0, 1e-15);
    EXPECT_NEAR(a.variance, 1.0, 1e-15);
    const std::vector<double> constant{2.5, 2.5};
    const auto b = measurement_mean_variance(comp, constant, qz(0.2));
    EXPECT_NEAR(b.mean, 2.5, 1e-15);
    EXPECT_NEAR(b.variance, 0.0, 1e-14);
    const std::vector<double> indicator{1.0, 0.0};
    const auto c = measurement_mean_variance(comp, indicator, qz(0.5));
    EXPECT_NEAR(c.mean, 0.75, 1e-15);
    EXPECT_NEAR(c.variance, 0.1875, 1e-15);
}

TEST(Measurement, ProjectiveVarianceMatchesObservableVariance) {
    Rng rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 1, 5);
        const ComplexMatrix u = testing::random_unitary(rng, n);
        std::vector<double> values;
        RealVector spec(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            spec(i) = testing::uniform(rng, -2.0, 2.0);
            values.push_back(spec(i));
        }
        const Observable x(hermitian_part(u * spec.cast<Complex>().asDiagonal() * u.adjoint()));
        const DensityOperator rho(testing::random_density(rng, n));
        const auto mv = measurement_mean_variance(GeneralizedMeasurement::orthonormal_basis(u), values, rho);
        EXPECT_NEAR(mv.variance, variance(x, rho), 1e-10);
        EXPECT_NEAR(mv.mean, expectation(x, rho), 1e-10);
    }
}

} // namespace
} // namespace qcrb
