#include "crev/spectral.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace crev;
using namespace crev::spectral;
using namespace crev::testing;

namespace {

const Complex I{0.0, 1.0};

// Clusters compared against the generator's content, up to order.
void expect_matches_content(const SpectralData& s, const std::vector<Content>& content, double tol) {
    ASSERT_EQ(s.clusters.size(), content.size());
    for (const auto& c : content) {
        auto want = c.blocks;
        std::sort(want.begin(), want.end(), std::greater<>());
        const auto hit = std::find_if(s.clusters.begin(), s.clusters.end(), [&](const EigenCluster& e) {
            return std::abs(e.eigenvalue - c.eigenvalue) <= tol;
        });
        ASSERT_NE(hit, s.clusters.end()) << "eigenvalue " << c.eigenvalue;
        EXPECT_EQ(hit->blocks, want) << "eigenvalue " << c.eigenvalue;
    }
}

}  // namespace

TEST(EigenStructure, Identity4) {
    const auto s = eigen_structure(ComplexMatrix::Identity(4, 4));
    ASSERT_EQ(s.clusters.size(), 1u);
    EXPECT_NEAR(std::abs(s.clusters[0].eigenvalue - 1.0), 0.0, 1e-12);
    EXPECT_EQ(s.clusters[0].blocks, (std::vector<int>{1, 1, 1, 1}));
}

TEST(EigenStructure, JordanPair) {
    const auto s = eigen_structure(jordan_form({{2.0, 2}, {0.5, 2}}));
    expect_matches_content(s, {{2.0, {2}}, {0.5, {2}}}, 1e-10);
}

TEST(EigenStructure, SingleUnipotentBlock) {
    ComplexMatrix a(2, 2);
    a << 1.0, 1.0, 0.0, 1.0;
    const auto s = eigen_structure(a);
    expect_matches_content(s, {{1.0, {2}}}, 1e-10);
}

TEST(EigenStructure, RecoversRandomJordanContent) {
    Rng rng(21);
    for (int t = 0; t < 300; ++t) {
        SpectrumOptions o;
        o.n = uniform_int(rng, 1, 8);
        const auto content = reversible_content(o, rng);
        const auto p = random_conjugator(o.n, std::exp(uniform(rng, 0.0, std::log(50.0))), rng);
        const auto s = eigen_structure(conjugate(jordan_matrix(content), p.p));
        expect_matches_content(s, content, 1e-9);
    }
}

// Conjugacy invariance: P A P^-1 has the same Jordan data as A.
TEST(EigenStructure, ConjugacyInvariance) {
    Rng rng(22);
    for (int t = 0; t < 100; ++t) {
        SpectrumOptions o;
        o.n = uniform_int(rng, 2, 7);
        const auto content = reversible_content(o, rng);
        const ComplexMatrix a = conjugate(jordan_matrix(content), random_conjugator(o.n, 5.0, rng).p);
        const ComplexMatrix b = conjugate(a, random_conjugator(o.n, 5.0, rng).p);
        const auto sa = eigen_structure(a);
        const auto sb = eigen_structure(b);
        ASSERT_EQ(sa.clusters.size(), sb.clusters.size());
        for (std::size_t k = 0; k < sa.clusters.size(); ++k) {
            EXPECT_NEAR(std::abs(sa.clusters[k].eigenvalue - sb.clusters[k].eigenvalue), 0.0, 1e-9);
            EXPECT_EQ(sa.clusters[k].blocks, sb.clusters[k].blocks);
        }
    }
}

TEST(EigenStructure, RejectsSingularAndNonSquare) {
    EXPECT_THROW(eigen_structure(ComplexMatrix::Zero(2, 2)), Error);
    EXPECT_THROW(eigen_structure(ComplexMatrix::Identity(2, 3)), Error);
}

TEST(MinimalPolynomial, Identity4) {
    const auto m = minimal_polynomial(eigen_structure(ComplexMatrix::Identity(4, 4)));
    ASSERT_EQ(m.degree(), 1);
    EXPECT_NEAR(std::abs(m.coeff(0) + 1.0), 0.0, 1e-12);
}

TEST(MinimalPolynomial, JordanPairAnnihilates) {
    const ComplexMatrix a = jordan_form({{2.0, 2}, {0.5, 2}});
    const auto m = minimal_polynomial(eigen_structure(a));
    const std::vector<Complex> roots{2.0, 2.0, 0.5, 0.5};
    EXPECT_LE(m.distance(numerics::Polynomial::from_roots(roots)), 1e-9);
    EXPECT_LE(frobenius(m.evaluate(a)), 1e-8);
}

TEST(MinimalPolynomial, A1HasDegreeThree) {
    const auto m = minimal_polynomial(eigen_structure(jordan_form({{2.0, 2}, {0.5, 1}, {0.5, 1}})));
    EXPECT_EQ(m.degree(), 3);
    const std::vector<Complex> roots{2.0, 2.0, 0.5};
    EXPECT_LE(m.distance(numerics::Polynomial::from_roots(roots)), 1e-9);
}

TEST(JordanBasis, CanonicalFormGivesIdentity) {
    const ComplexMatrix a = jordan_form({{2.0, 2}, {0.5, 2}});
    const auto b = jordan_basis(a, eigen_structure(a));
    EXPECT_LE(frobenius(b.p - ComplexMatrix::Identity(4, 4)), 1e-10);
}

TEST(JordanBasis, ResidualForConjugatedJordanPair) {
    Rng rng(23);
    const ComplexMatrix j = jordan_form({{2.0, 2}, {0.5, 2}});
    const ComplexMatrix a = conjugate(j, random_conjugator(4, 3.0, rng).p);
    const auto b = jordan_basis(a, eigen_structure(a));
    const ComplexMatrix back = b.p * b.j * Eigen::PartialPivLU<ComplexMatrix>(b.p).inverse();
    EXPECT_LE(frobenius(a - back), 1e-7);
}

TEST(JordanBasis, DiagonalizableRotation) {
    Rng rng(24);
    const ComplexMatrix a = conjugate(jordan_form({{I, 1}, {-I, 1}}), random_conjugator(2, 4.0, rng).p);
    const auto b = jordan_basis(a, eigen_structure(a));
    EXPECT_NEAR(std::abs(Eigen::PartialPivLU<ComplexMatrix>(b.p).determinant() - 1.0), 0.0, 1e-12);
    EXPECT_LE(frobenius(a * b.p - b.p * b.j), 1e-10);
}

TEST(JordanBasis, RandomContentResiduals) {
    Rng rng(25);
    for (int t = 0; t < 200; ++t) {
        SpectrumOptions o;
        o.n = uniform_int(rng, 1, 8);
        const auto content = reversible_content(o, rng);
        const auto p = random_conjugator(o.n, std::exp(uniform(rng, 0.0, std::log(50.0))), rng);
        const ComplexMatrix a = conjugate(jordan_matrix(content), p.p);
        const auto s = eigen_structure_with_basis(a);
        ASSERT_TRUE(s.basis.has_value());
        EXPECT_LE(s.basis->residual, 1e-7);
        EXPECT_NEAR(std::abs(Eigen::PartialPivLU<ComplexMatrix>(s.basis->p).determinant() - 1.0), 0.0, 1e-9);
    }
}

namespace {

void all_partitions(int n, int max_part, std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(current);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        current.push_back(p);
        all_partitions(n - p, p, current, out);
        current.pop_back();
    }
}

}  // namespace

TEST(Partitions, SegreWeyrRoundTrip) {
    for (int n = 1; n <= 12; ++n) {
        std::vector<std::vector<int>> parts;
        std::vector<int> current;
        all_partitions(n, n, current, parts);
        for (const auto& p : parts) EXPECT_EQ(segre_from_weyr(weyr_from_segre(p)), p);
    }
}

// Cumulative kernel dimensions dim ker N^k of a nilpotent with the given blocks.
TEST(Partitions, WeyrIsKernelDimensions) {
    EXPECT_EQ(weyr_from_segre({3, 1}), (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(weyr_from_segre({2, 2}), (std::vector<int>{2, 4}));
    EXPECT_EQ(weyr_from_segre({1, 1, 1}), (std::vector<int>{3}));
    for (const std::vector<int>& blocks : {std::vector<int>{3, 1}, std::vector<int>{2, 2, 1}, std::vector<int>{4}}) {
        std::vector<JordanBlockSpec> specs;
        for (int b : blocks) specs.push_back({0.0, b});
        const ComplexMatrix n = jordan_form(specs);
        ComplexMatrix power = n;
        const auto w = weyr_from_segre(blocks);
        for (std::size_t k = 0; k < w.size(); ++k) {
            EXPECT_EQ(static_cast<int>(n.rows()) - numerics::numeric_rank(power, 1e-12), w[k]);
            power = power * n;
        }
    }
}
