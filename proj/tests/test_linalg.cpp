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

#include <gtest/gtest.h>

#include "qcrb/linalg.hpp"
#include "qcrb/quantum_state.hpp"
#include "test_support.hpp"

namespace qcrb {
namespace {

using testing::Rng;

TEST(SpectralDecomposition, PauliZHasTwoRankOneProjectors) {
    const SpectralDecomposition sd = spectral_decomposition(ops::pauli_z());
    ASSERT_EQ(sd.eigenvalues.size(), 2u);
    EXPECT_NEAR(sd.eigenvalues[0], 1.0, 1e-12);
    EXPECT_NEAR(sd.eigenvalues[1], -1.0, 1e-12);
    EXPECT_LT(max_abs_entry(ComplexMatrix(sd.projectors[0] - ComplexMatrix(RealVector::Unit(2, 0).cast<Complex>().asDiagonal()))), 1e-12);
    EXPECT_LT(max_abs_entry(ComplexMatrix(sd.projectors[1] - ComplexMatrix(RealVector::Unit(2, 1).cast<Complex>().asDiagonal()))), 1e-12);
}

TEST(SpectralDecomposition, IdentityClustersIntoOneProjector) {
    const SpectralDecomposition sd = spectral_decomposition(ComplexMatrix::Identity(2, 2));
    ASSERT_EQ(sd.eigenvalues.size(), 1u);
    EXPECT_NEAR(sd.eigenvalues[0], 1.0, 1e-12);
    EXPECT_LT(max_abs_entry(ComplexMatrix(sd.projectors[0] - ComplexMatrix::Identity(2, 2))), 1e-12);
}

TEST(SpectralDecomposition, PauliXProjectorsAreHalfIdentityPlusMinusX) {
    const SpectralDecomposition sd = spectral_decomposition(ops::pauli_x());
    ASSERT_EQ(sd.eigenvalues.size(), 2u);
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    EXPECT_LT(max_abs_entry(ComplexMatrix(sd.projectors[0] - 0.5 * (i2 + ops::pauli_x()))), 1e-12);
    EXPECT_LT(max_abs_entry(ComplexMatrix(sd.projectors[1] - 0.5 * (i2 - ops::pauli_x()))), 1e-12);
}

TEST(SpectralDecomposition, RejectsNonHermitianInput) {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    try {
        spectral_decomposition(a);
        FAIL() << "expected NotHermitian";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
    }
}

TEST(SpectralDecomposition, RandomResolutionsSatisfyProjectorIdentities) {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 1, 8);
        ComplexMatrix a = testing::random_hermitian(rng, n);
        if (trial % 3 == 0) {
            // Force a degenerate eigenvalue.
            const ComplexMatrix u = testing::random_unitary(rng, n);
            RealVector d = RealVector::Random(n);
            if (n > 1) d(1) = d(0);
            a = u * d.cast<Complex>().asDiagonal() * u.adjoint();
            a = 0.5 * (a + a.adjoint());
        }
        const SpectralDecomposition sd = spectral_decomposition(a);
        const double scale = 1.0 + testing::oracle_operator_norm(a);
        EXPECT_LE(operator_norm(ComplexMatrix(sd.reconstruct() - a)), 1e-9 * scale);
        ComplexMatrix sum = ComplexMatrix::Zero(n, n);
        for (std::size_t j = 0; j < sd.projectors.size(); ++j) {
            sum += sd.projectors[j];
            for (std::size_t k = 0; k < sd.projectors.size(); ++k) {
                ComplexMatrix prod = sd.projectors[j] * sd.projectors[k];
                if (j == k) prod -= sd.projectors[k];
                EXPECT_LE(testing::oracle_operator_norm(prod), 1e-9);
            }
        }
        EXPECT_LE(testing::oracle_operator_norm(ComplexMatrix(sum - ComplexMatrix::Identity(n, n))), 1e-9);
        for (std::size_t j = 1; j < sd.eigenvalues.size(); ++j) EXPECT_GT(sd.eigenvalues[j - 1], sd.eigenvalues[j]);
    }
}

TEST(PseudoInverse, IdentityAndRankDeficientDiagonal) {
    EXPECT_LT(max_abs_entry(RealMatrix(pseudo_inverse(RealMatrix(RealMatrix::Identity(3, 3))) - RealMatrix::Identity(3, 3))), 1e-14);
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    const RealMatrix inv = pseudo_inverse(d);
    EXPECT_NEAR(inv(0, 0), 0.5, 1e-14);
    EXPECT_NEAR(inv(1, 1), 0.0, 1e-14);
    EXPECT_EQ(max_abs_entry(pseudo_inverse(RealMatrix(RealMatrix::Zero(3, 3)))), 0.0);
}

TEST(PseudoInverse, RankTwoPsdReconstructs) {
    Rng rng(7);
    const RealMatrix g = RealMatrix::Random(3, 2);
    const RealMatrix a = g * g.transpose();
    const RealMatrix inv = pseudo_inverse(a);
    EXPECT_LE((a * inv * a - a).norm(), 1e-10);
    EXPECT_LE((inv - testing::oracle_pinv(a)).norm(), 1e-8 * testing::oracle_pinv(a).norm());
}

TEST(PseudoInverse, PenroseIdentitiesOnRandomHermitianInputs) {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 1, 16);
        const Eigen::Index rank = testing::uniform_int(rng, 0, static_cast<int>(n));
        const ComplexMatrix u = testing::random_unitary(rng, n);
        RealVector d = RealVector::Zero(n);
        for (Eigen::Index i = 0; i < rank; ++i) d(i) = testing::uniform(rng, 0.1, 3.0) * (i % 2 ? -1.0 : 1.0);
        const ComplexMatrix a = hermitian_part(u * d.cast<Complex>().asDiagonal() * u.adjoint());
        const ComplexMatrix inv = pseudo_inverse(a);
        const double na = std::max(1.0, testing::oracle_operator_norm(a));
        const double ni = std::max(1.0, testing::oracle_operator_norm(inv));
        EXPECT_LE(testing::oracle_operator_norm(ComplexMatrix(a * inv * a - a)), 1e-9 * na);
        EXPECT_LE(testing::oracle_operator_norm(ComplexMatrix(inv * a * inv - inv)), 1e-9 * ni);
        EXPECT_LE(testing::oracle_operator_norm(ComplexMatrix((a * inv).adjoint() - a * inv)), 1e-9);
    }
}

TEST(PsdGap, Examples) {
    EXPECT_NEAR(psd_gap(RealMatrix(RealMatrix::Identity(2, 2))), 1.0, 1e-14);
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -0.5;
    EXPECT_NEAR(psd_gap(d), -0.5, 1e-14);
    const ComplexVector e0 = ops::basis_vector(2, 0);
    EXPECT_NEAR(psd_gap(ComplexMatrix(e0 * e0.adjoint())), 0.0, 1e-14);
}

TEST(OperatorNorm, Examples) {
    EXPECT_NEAR(operator_norm(ComplexMatrix(ComplexMatrix::Identity(3, 3))), 1.0, 1e-14);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -4.0;
    EXPECT_NEAR(operator_norm(d), 4.0, 1e-13);
    const ComplexVector plus = (ops::basis_vector(2, 0) + ops::basis_vector(2, 1)) / std::sqrt(2.0);
    const ComplexMatrix outer = ops::basis_vector(2, 0) * plus.adjoint();
    EXPECT_NEAR(operator_norm(outer), testing::oracle_operator_norm(outer), 1e-13);
    EXPECT_NEAR(operator_norm(outer), 1.0, 1e-13);
}

TEST(OperatorNorm, SubmultiplicativeAndUnitarilyInvariant) {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = testing::uniform_int(rng, 1, 6);
        const ComplexMatrix a = testing::ginibre(rng, n, n);
        const ComplexMatrix b = testing::ginibre(rng, n, n);
        const ComplexMatrix u = testing::random_unitary(rng, n);
        const double na = operator_norm(a);
        EXPECT_NEAR(na, testing::oracle_operator_norm(a), 1e-10 * na);
        EXPECT_LE(operator_norm(ComplexMatrix(a * b)), na * operator_norm(b) * (1 + 1e-10));
        EXPECT_NEAR(operator_norm(ComplexMatrix(u * a * u.adjoint())), na, 1e-10 * na);
    }
}

TEST(HermitianBasis, IsHilbertSchmidtOrthonormal) {
    for (Eigen::Index n = 1; n <= 4; ++n) {
        const auto basis = hermitian_basis(n);
        ASSERT_EQ(static_cast<Eigen::Index>(basis.size()), n * n);
        for (std::size_t a = 0; a < basis.size(); ++a) {
            EXPECT_TRUE(is_hermitian(basis[a]));
            for (std::size_t b = 0; b < basis.size(); ++b)
                EXPECT_NEAR(testing::oracle_trace(basis[a].adjoint() * basis[b]).real(), a == b ? 1.0 : 0.0, 1e-14);
        }
    }
}

TEST(OrthonormalComplement, CompletesAnIsometryToAUnitary) {
    Rng rng(17);
    const ComplexMatrix u = testing::random_unitary(rng, 6);
    const ComplexMatrix v = u.leftCols(2);
    const ComplexMatrix c = orthonormal_complement(v);
    ASSERT_EQ(c.cols(), 4);
    ComplexMatrix w(6, 6);
    w << v, c;
    EXPECT_LE(testing::oracle_operator_norm(ComplexMatrix(w.adjoint() * w - ComplexMatrix::Identity(6, 6))), 1e-12);
}

TEST(SqrtPsd, SquaresBackAndRejectsNegativeInput) {
    Rng rng(19);
    const ComplexMatrix rho = testing::random_density(rng, 4);
    const ComplexMatrix r = sqrt_psd(rho);
    EXPECT_LE(operator_norm(ComplexMatrix(r * r - rho)), 1e-12);
    ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
    neg(1, 1) = -0.1;
    EXPECT_THROW(sqrt_psd(neg), Error);
}

} // namespace
} // namespace qcrb
