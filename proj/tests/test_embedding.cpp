#include <gtest/gtest.h>

#include <cmath>

#include "conric/embedding.hpp"
#include "conric/solver.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace conric;

namespace {

const Complex kJ(0.0, 1.0);

}  // namespace

TEST(Heart, Examples) {
    EXPECT_EQ(heart(CMatrix{{kJ}}).matrix(), (CMatrix{{0.0, -1.0}, {1.0, 0.0}}));
    EXPECT_EQ(heart(CMatrix::identity(3)).matrix(), CMatrix::identity(6));
    oracle::Random rng(5);
    const CMatrix a = rng.gaussian(3, 2);
    const CMatrix b = rng.gaussian(2, 4);
    EXPECT_LE(props::rel(heart(a * b).matrix(), heart(a).matrix() * heart(b).matrix()), 1e-12);
    EXPECT_TRUE(heart(a).is_heart_structured());
}

TEST(Lozenge, Examples) {
    EXPECT_EQ(lozenge(CMatrix{{kJ}}).matrix(), (CMatrix{{1.0, 0.0}, {0.0, -1.0}}));
    EXPECT_EQ(lozenge(CMatrix::identity(1)).matrix(), e_matrix(1).matrix());
    oracle::Random rng(6);
    const CMatrix a = rng.gaussian(3, 3);
    EXPECT_LE(props::rel(lozenge(a).matrix(), e_matrix(3).matrix() * heart(a).matrix()), 1e-14);
}

TEST(FixedMatrices, UnitaryAndConjugation) {
    EXPECT_EQ(e_matrix(1).matrix(), (CMatrix{{0.0, 1.0}, {1.0, 0.0}}));
    for (std::size_t n = 1; n <= 4; ++n) {
        const CMatrix p = p_matrix(n);
        const CMatrix e = e_matrix(n).matrix();
        EXPECT_LE(oracle::max_diff(p * adjoint(p), CMatrix::identity(2 * n)), 1e-14);
        EXPECT_LE(oracle::max_diff(e * adjoint(e), CMatrix::identity(2 * n)), 1e-14);
        EXPECT_LE(oracle::max_diff(adjoint(p) * e * p, e), 1e-14);
    }
    EXPECT_THROW((void)e_matrix(0), Error);
    EXPECT_THROW((void)p_matrix(0), Error);
}

TEST(Unheart, Examples) {
    EXPECT_EQ(unheart(EmbeddedReal(CMatrix::identity(4), 2, 2)), CMatrix::identity(2));
    oracle::Random rng(8);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = rng.index(1, 6);
        const CMatrix m = rng.gaussian(n, n);
        EXPECT_LE(oracle::max_diff(unheart(heart(m)), m), 1e-15);
        EXPECT_LE(oracle::max_diff(heart(unheart(heart(m))).matrix(), heart(m).matrix()), 1e-12);
    }
}

TEST(Unheart, ExampleOneMaximalEmbedding) {
    const SolveOutcome w = standard_solve_maximal(lozenge(oracle::example1_a()).matrix());
    const CMatrix x = unheart(EmbeddedReal(w.solution, 2, 2));
    EXPECT_LE(oracle::max_diff(x, oracle::example1_x_plus()), 1e-10);
}

TEST(Unheart, RefusesBrokenStructure) {
    CMatrix w = CMatrix::identity(2);
    w(0, 1) = 0.5;  // top-right not the negated bottom-left
    try {
        (void)unheart(EmbeddedReal(w, 1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::not_heart_structured);
    }
}

TEST(EmbeddedRealType, RejectsImaginaryEntries) {
    EXPECT_THROW(EmbeddedReal(CMatrix{{kJ, 0.0}, {0.0, 1.0}}, 1, 1), Error);
    EXPECT_THROW(EmbeddedReal(CMatrix::identity(3), 1, 1), Error);
}

TEST(HeartDefect, CountsImaginaryParts) {
    EXPECT_EQ(heart_defect(CMatrix::identity(4)), 0.0);
    CMatrix w = CMatrix::identity(2);
    w(0, 0) = Complex(1.0, 0.5);
    w(1, 1) = Complex(1.0, 0.5);
    EXPECT_GT(heart_defect(w), 0.1);
}

TEST(ConNormal, Examples) {
    EXPECT_TRUE(is_con_normal(CMatrix{{0.3, 0.0}, {0.0, 0.4 * kJ}}).holds);
    EXPECT_TRUE(is_con_normal(CMatrix{{0.0, 1.0}, {-1.0, 0.0}}).holds);
    const Certified shift = is_con_normal(CMatrix{{0.0, 1.0}, {0.0, 0.0}});
    EXPECT_FALSE(shift.holds);
    EXPECT_LT(shift.margin, 0.0);
}

TEST(CoSpectral, Examples) {
    EXPECT_EQ(co_spectral_radius_vs_one(CMatrix::identity(2)).ordering, Ordering::at);
    const CoSpectralClass half = co_spectral_radius_vs_one(0.5 * kJ * CMatrix::identity(2));
    EXPECT_EQ(half.ordering, Ordering::below);
    EXPECT_NEAR(half.rho, 0.25, 1e-12);
    EXPECT_EQ(co_spectral_radius_vs_one(2.0 * CMatrix::identity(1)).ordering, Ordering::above);

    const CMatrix x = oracle::example1_x_plus();
    const CMatrix m = solve(conj(x), oracle::example1_a());
    EXPECT_NE(co_spectral_radius_vs_one(m).ordering, Ordering::above);
}

TEST(IdentitySuite, EveryIdentityOnRandomInstances) {
    const props::IdentitySuite s = props::run_identity_suite(2024, 200);
    for (const props::Check* c : s.all()) {
        EXPECT_TRUE(c->ok()) << c->name << ": worst " << c->worst << " limit " << c->limit;
        EXPECT_GT(c->samples, 0u) << c->name;
    }
}
