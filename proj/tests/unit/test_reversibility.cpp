#include "crev/reversibility.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

using namespace crev;
using namespace crev::reversibility;
using namespace crev::testing;

namespace {

const Complex I{0.0, 1.0};

ComplexMatrix swap2() {
    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    return s;
}

ComplexMatrix diag_two_half() { return spectral::jordan_form({{2.0, 1}, {0.5, 1}}); }

ComplexMatrix a1() { return spectral::jordan_form({{2.0, 2}, {0.5, 1}, {0.5, 1}}); }

Complex det(const ComplexMatrix& m) { return Eigen::PartialPivLU<ComplexMatrix>(m).determinant(); }

ComplexMatrix conj_inverse(const ComplexMatrix& m) {
    return Eigen::PartialPivLU<ComplexMatrix>(m.conjugate()).inverse();
}

}  // namespace

TEST(Pairing, Identity4) {
    const auto p = pairing_check(spectral::eigen_structure(ComplexMatrix::Identity(4, 4)));
    EXPECT_TRUE(p.verdict);
    EXPECT_EQ(p.singletons.size(), 1u);
    EXPECT_TRUE(p.pairs.empty());
}

TEST(Pairing, DiagTwoHalf) {
    const auto s = spectral::eigen_structure(diag_two_half());
    const auto p = pairing_check(s);
    EXPECT_TRUE(p.verdict);
    ASSERT_EQ(p.pairs.size(), 1u);
    EXPECT_EQ(p.pairs[0].blocks, std::vector<int>{1});
    const Complex a = s.clusters[p.pairs[0].first].eigenvalue, b = s.clusters[p.pairs[0].second].eigenvalue;
    EXPECT_NEAR(std::abs(a * std::conj(b) - 1.0), 0.0, 1e-12);
}

TEST(Pairing, A1BlockMismatch) {
    const auto p = pairing_check(spectral::eigen_structure(a1()));
    EXPECT_FALSE(p.verdict);
    ASSERT_TRUE(p.obstruction.has_value());
    EXPECT_NE(p.obstruction->find("block-size multiset mismatch {2} vs {1,1}"), std::string::npos) << *p.obstruction;
}

TEST(Pairing, UnmatchedEigenvalue) {
    // det 1 with no conj-inverse partner for 2.
    const auto p = pairing_check(spectral::eigen_structure(spectral::jordan_form({{2.0, 1}, {0.5 * I, 1}, {-I, 1}})));
    EXPECT_FALSE(p.verdict);
    EXPECT_FALSE(p.unmatched.empty());
}

TEST(Pairing, RandomReversibleAndObstructedContent) {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        SpectrumOptions o;
        o.n = uniform_int(rng, 1, 8);
        const auto good = reversible_content(o, rng);
        const auto pg = random_conjugator(o.n, 10.0, rng);
        EXPECT_TRUE(pairing_check(spectral::eigen_structure(conjugate(jordan_matrix(good), pg.p))).verdict);

        const int n = uniform_int(rng, 4, 8);
        const auto bad = obstructed_content(n, uniform_int(rng, 0, 1) == 1, rng);
        const auto pb = random_conjugator(n, 10.0, rng);
        EXPECT_FALSE(pairing_check(spectral::eigen_structure(conjugate(jordan_matrix(bad), pb.p))).verdict);
    }
}

TEST(UnitSymmetry, Examples) {
    EXPECT_LE(frobenius(build_unit_symmetry(1.0, 1, 1.0) - ComplexMatrix::Identity(1, 1)), 1e-15);
    // n = 2, lambda = i, b = 1: [[1, 0], [0, -1/i^2]]
    EXPECT_LE(frobenius(build_unit_symmetry(I, 2, 1.0) - ComplexMatrix::Identity(2, 2)), 1e-15);
    const ComplexMatrix b = build_unit_symmetry(I, 2, 1.0);
    EXPECT_LE(frobenius(b * b.conjugate() - ComplexMatrix::Identity(2, 2)), 1e-15);
    const ComplexMatrix j = spectral::jordan_block(I, 2);
    EXPECT_LE(frobenius(b * j * b.inverse() - conj_inverse(j)), 1e-14);
}

TEST(UnitSymmetry, RejectsOffCircleInput) {
    EXPECT_THROW(build_unit_symmetry(2.0, 2, 1.0), Error);
    EXPECT_THROW(build_unit_symmetry(1.0, 2, 2.0), Error);
    EXPECT_THROW(build_unit_symmetry(1.0, 0, 1.0), Error);
}

// det B = s(n) b^n / lambda^{n(n-1)}, s(n) = +1 for n = 0,1 mod 4 and -1 otherwise.
TEST(UnitSymmetry, DeterminantFormula) {
    Rng rng(32);
    for (int n = 1; n <= 10; ++n) {
        for (int t = 0; t < 20; ++t) {
            const Complex lambda = unit_complex(rng), b = unit_complex(rng);
            const double sign = (n % 4 == 0 || n % 4 == 1) ? 1.0 : -1.0;
            const Complex expected = sign * std::pow(b, n) / std::pow(lambda, n * (n - 1));
            EXPECT_NEAR(std::abs(det(build_unit_symmetry(lambda, n, b)) - expected), 0.0, 1e-12) << "n = " << n;
        }
    }
}

TEST(UnitSymmetry, InvolutionAndReversal) {
    Rng rng(33);
    for (int n = 1; n <= 8; ++n) {
        for (int t = 0; t < 20; ++t) {
            const Complex lambda = unit_complex(rng), b = unit_complex(rng);
            const ComplexMatrix m = build_unit_symmetry(lambda, n, b);
            const ComplexMatrix j = spectral::jordan_block(lambda, n);
            EXPECT_LE(frobenius(m * m.conjugate() - ComplexMatrix::Identity(n, n)), 1e-11);
            EXPECT_LE(frobenius(m * j - conj_inverse(j) * m), 1e-11);
        }
    }
}

TEST(PairSymmetry, SwapForTwo) {
    EXPECT_LE(frobenius(build_pair_symmetry(2.0, 1, 1.0) - swap2()), 1e-15);
}

TEST(PairSymmetry, PhasedBlockForTwoHasUnitDeterminant) {
    const Complex b = choose_phase(PhaseMode::PairBlock, 2.0, 1);
    const ComplexMatrix c = build_pair_symmetry(2.0, 1, b);
    // 2x2 antidiagonal [[0, b], [1/conj(b), 0]]: det = -b / conj(b)
    EXPECT_NEAR(std::abs(-b / std::conj(b) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(det(c) - 1.0), 0.0, 1e-15);
    const ComplexMatrix a = diag_two_half();
    EXPECT_LE(frobenius(c * a * c.inverse() - spectral::jordan_form({{0.5, 1}, {2.0, 1}})), 1e-15);
}

TEST(PairSymmetry, IdentitiesForModerateModulus) {
    Rng rng(34);
    for (int n = 1; n <= 8; ++n) {
        for (int t = 0; t < 20; ++t) {
            const Complex lambda = off_circle(rng, 1.1, 2.0);
            const ComplexMatrix c = build_pair_symmetry(lambda, n, choose_phase(PhaseMode::PairBlock, lambda, n));
            const ComplexMatrix a =
                spectral::block_diagonal({spectral::jordan_block(lambda, n), spectral::jordan_block(partner(lambda), n)});
            EXPECT_LE(frobenius(c * c.conjugate() - ComplexMatrix::Identity(2 * n, 2 * n)), 1e-10);
            EXPECT_LE(frobenius(c * a - conj_inverse(a) * c), 1e-9 * frobenius(c) * frobenius(a));
            EXPECT_NEAR(std::abs(det(c) - 1.0), 0.0, 1e-9);
        }
    }
}

TEST(PairSymmetry, RejectsUnitLambda) { EXPECT_THROW(build_pair_symmetry(I, 2, 1.0), Error); }

TEST(ChoosePhase, UnitExamples) {
    EXPECT_NEAR(std::abs(choose_phase(PhaseMode::UnitBlock, 1.0, 1) - 1.0), 0.0, 1e-15);
    // det B = -b^2 / lambda^2 = 1 at lambda = 1: b^2 = -1, principal root i.
    const Complex b = choose_phase(PhaseMode::UnitBlock, 1.0, 2);
    EXPECT_NEAR(std::abs(b * b + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b - I), 0.0, 1e-15);
}

TEST(ChoosePhase, GivesUnitDeterminant) {
    Rng rng(35);
    for (int n = 1; n <= 10; ++n) {
        for (int t = 0; t < 20; ++t) {
            const Complex u = unit_complex(rng);
            EXPECT_NEAR(std::abs(det(build_unit_symmetry(u, n, choose_phase(PhaseMode::UnitBlock, u, n))) - 1.0),
                        0.0, 1e-11);
            const Complex z = off_circle(rng, 1.1, 1.6);
            EXPECT_NEAR(std::abs(det(build_pair_symmetry(z, n, choose_phase(PhaseMode::PairBlock, z, n))) - 1.0),
                        0.0, 1e-9);
        }
    }
}

TEST(VerifyReverser, IdentityPair) {
    const auto w = verify_reverser(ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(3, 3));
    EXPECT_EQ(w.residual_conjugation, 0.0);
    EXPECT_EQ(w.residual_involution, 0.0);
    EXPECT_EQ(w.residual_det, 0.0);
}

TEST(VerifyReverser, SwapReversesDiagTwoHalf) {
    const auto w = verify_reverser(diag_two_half(), swap2());
    EXPECT_LE(w.residual_conjugation, 1e-15);
    EXPECT_LE(w.residual_involution, 1e-15);
    // det of the swap is -1, so it is a reverser but not in SL(2).
    EXPECT_NEAR(w.residual_det, 2.0, 1e-15);
}

TEST(VerifyReverser, RandomMatricesDoNotReverseA1) {
    Rng rng(36);
    for (int t = 0; t < 100; ++t) {
        ComplexMatrix h(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) h(i, k) = gaussian_complex(rng);
        EXPECT_GE(verify_reverser(a1(), h).residual_conjugation, 0.1);
    }
}

TEST(VerifyReverser, RejectsSingularAndMismatched) {
    EXPECT_THROW(verify_reverser(ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(2, 2)), Error);
    EXPECT_THROW(verify_reverser(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)), Error);
}

TEST(AssembleReverser, Identity) {
    const ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    const auto s = spectral::eigen_structure_with_basis(a);
    const auto w = assemble_reverser(a, s, pairing_check(s));
    EXPECT_TRUE(w.accepted);
    EXPECT_LE(frobenius(w.h - a), 1e-14);
    EXPECT_EQ(w.residual_conjugation, 0.0);
}

TEST(AssembleReverser, UnitJordanBlock) {
    const ComplexMatrix a = spectral::jordan_block(I, 2);
    const auto s = spectral::eigen_structure_with_basis(a);
    const auto w = assemble_reverser(a, s, pairing_check(s));
    EXPECT_TRUE(w.accepted);
    EXPECT_LE(w.residual_conjugation, 1e-12);
    EXPECT_LE(w.residual_involution, 1e-12);
    EXPECT_LE(w.residual_det, 1e-12);
}

TEST(AssembleReverser, DiagTwoHalf) {
    const ComplexMatrix a = diag_two_half();
    const auto s = spectral::eigen_structure_with_basis(a);
    const auto w = assemble_reverser(a, s, pairing_check(s));
    EXPECT_TRUE(w.accepted);
    EXPECT_NEAR(std::abs(w.h(0, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(w.h(1, 1)), 0.0, 1e-14);
    EXPECT_LE(frobenius(w.h * a * w.h.inverse() - spectral::jordan_form({{0.5, 1}, {2.0, 1}})), 1e-14);
    EXPECT_NEAR(std::abs(det(w.h) - 1.0), 0.0, 1e-14);
}

TEST(AssembleReverser, RefusesUnpairable) {
    const auto s = spectral::eigen_structure_with_basis(a1());
    try {
        assemble_reverser(a1(), s, pairing_check(s));
        FAIL() << "expected NotReversible";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotReversible);
    }
}

// A reverser's square h conj(h) centralizes A.
TEST(AssembleReverser, ConjugateSquareCentralizes) {
    Rng rng(37);
    for (int t = 0; t < 100; ++t) {
        SpectrumOptions o;
        o.n = uniform_int(rng, 1, 6);
        const auto content = reversible_content(o, rng);
        const ComplexMatrix a = conjugate(jordan_matrix(content), random_conjugator(o.n, 5.0, rng).p);
        const auto s = spectral::eigen_structure_with_basis(a);
        const auto w = assemble_reverser(a, s, pairing_check(s));
        // checked directly: when A equals conj(A)^-1 (a unit scalar, say) the label is Centralizes
        const ComplexMatrix hinv = Eigen::PartialPivLU<ComplexMatrix>(w.h).inverse();
        const ComplexMatrix abar_inv = Eigen::PartialPivLU<ComplexMatrix>(a.conjugate()).inverse();
        EXPECT_LE(frobenius(w.h * a * hinv - abar_inv), 1e-6 * frobenius(a));
        EXPECT_NE(reverser_relation(a, w.h, 1e-6), Relation::Neither);
        const ComplexMatrix g = w.h.conjugate() * w.h;
        EXPECT_LE(frobenius(g * a - a * g), 1e-6 * frobenius(g) * frobenius(a));
    }
}

TEST(FactorInvolutory, Identity) {
    SymmetryWitness w;
    w.h = ComplexMatrix::Identity(2, 2);
    const auto [g1, g2] = factor_involutory(ComplexMatrix::Identity(2, 2), w);
    EXPECT_LE(frobenius(g1 - ComplexMatrix::Identity(2, 2)), 1e-15);
    EXPECT_LE(frobenius(g2 - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(FactorInvolutory, DiagTwoHalfWithSwap) {
    SymmetryWitness w;
    w.h = swap2();
    const ComplexMatrix a = diag_two_half();
    const auto [g1, g2] = factor_involutory(a, w);
    ComplexMatrix expected(2, 2);
    expected << 0.0, 0.5, 2.0, 0.0;
    EXPECT_LE(frobenius(g1 - swap2()), 1e-15);
    EXPECT_LE(frobenius(g2 - expected), 1e-15);
    EXPECT_LE(frobenius(g1 * g2 - a), 1e-15);
    EXPECT_LE(frobenius(g1 * g1.conjugate() - ComplexMatrix::Identity(2, 2)), 1e-15);
    EXPECT_LE(frobenius(g2 * g2.conjugate() - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(FactorInvolutory, UnitJordanBlockWitness) {
    const ComplexMatrix a = spectral::jordan_block(I, 2);
    const auto s = spectral::eigen_structure_with_basis(a);
    const auto w = assemble_reverser(a, s, pairing_check(s));
    const auto [g1, g2] = factor_involutory(a, w);
    EXPECT_LE(frobenius(g1 * g2 - a), 1e-10);
    EXPECT_LE(frobenius(g1 * g1.conjugate() - ComplexMatrix::Identity(2, 2)), 1e-10);
    EXPECT_LE(frobenius(g2 * g2.conjugate() - ComplexMatrix::Identity(2, 2)), 1e-10);
}

TEST(ReverserRelation, Examples) {
    Rng rng(38);
    ComplexMatrix g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) g(i, k) = gaussian_complex(rng);
    EXPECT_EQ(reverser_relation(g, ComplexMatrix::Identity(3, 3), 1e-12), Relation::Centralizes);
    EXPECT_EQ(reverser_relation(diag_two_half(), swap2(), 1e-12), Relation::Reverses);
    EXPECT_EQ(reverser_relation(diag_two_half(), spectral::jordan_form({{I, 1}, {-I, 1}}), 1e-12),
              Relation::Centralizes);
    ComplexMatrix shear(2, 2);
    shear << 1.0, 1.0, 0.0, 1.0;
    EXPECT_EQ(reverser_relation(diag_two_half(), shear, 1e-12), Relation::Neither);
    EXPECT_EQ(to_string(Relation::Reverses), "reverses");
}
