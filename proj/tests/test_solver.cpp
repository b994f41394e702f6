#include <gtest/gtest.h>

#include <cmath>

#include "conric/embedding.hpp"
#include "conric/solver.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace conric;

namespace {

const Complex kJ(0.0, 1.0);

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::invalid_argument;
}

Tolerances boundary_tolerances() {
    Tolerances tol;
    tol.stop_rel = 1e-14;
    tol.max_iter = 100000000;
    return tol;
}

CMatrix diag2(Complex a, Complex b) { return CMatrix{{a, 0.0}, {0.0, b}}; }

}  // namespace

TEST(NormalizeQ, Examples) {
    const CMatrix a = oracle::example1_a();
    EXPECT_EQ(normalize_q(ProblemInstance(a)).a_q, a);

    const Normalization four = normalize_q(ProblemInstance(a, 4.0 * CMatrix::identity(2)));
    EXPECT_LE(oracle::max_diff(four.a_q, a * Complex(0.25)), 1e-15);
    const CMatrix y = oracle::example1_x_plus();
    EXPECT_LE(oracle::max_diff(four.back_map(y), y * Complex(4.0)), 1e-14);
    EXPECT_LE(oracle::max_diff(four.forward_map(four.back_map(y)), y), 1e-14);

    oracle::Random rng(31);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = rng.index(1, 5);
        const CMatrix q = rng.hermitian(n, 0.2, 3.0);
        const SolveOutcome out = solve_maximal(ProblemInstance(CMatrix(n, n), q));
        EXPECT_LE(oracle::max_diff(out.solution, q), 1e-12);
    }
}

TEST(NormalizeQ, ScaledQMatchesScaledSolve) {
    const CMatrix a = oracle::example1_a();
    const SolveOutcome scaled = solve_maximal(ProblemInstance(a, 4.0 * CMatrix::identity(2)));
    const SolveOutcome unit = solve_maximal(ProblemInstance(a * Complex(0.25)));
    EXPECT_LE(oracle::max_diff(scaled.solution, unit.solution * Complex(4.0)), 1e-12);
}

TEST(NormalizeQ, RandomQSolutionsSatisfyOriginalEquation) {
    oracle::Random rng(37);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = rng.index(1, 5);
        const CMatrix q = rng.hermitian(n, 0.5, 2.0);
        // A_Q stays solvable: ‖A_Q‖ ≤ ‖A‖/λ_min(Q) ≤ 0.45.
        const CMatrix a = instances::with_norm(rng, n, 0.05, 0.225);
        const ProblemInstance p(a, q);
        const SolveOutcome out = solve_maximal(p);
        EXPECT_LE(residual(out.solution, p), residual_threshold(p));
        EXPECT_TRUE(extremality_check(out.solution, p, SolutionKind::maximal).holds);
    }
}

TEST(ProblemInstanceType, Validation) {
    EXPECT_EQ(code_of([] { ProblemInstance p(CMatrix(2, 3)); }), ErrorCode::not_square);
    EXPECT_EQ(code_of([] { ProblemInstance p(CMatrix(2, 2), CMatrix::identity(3)); }),
              ErrorCode::dimension_mismatch);
    EXPECT_EQ(code_of([] { ProblemInstance p(CMatrix(1, 1), CMatrix{{-1.0}}); }),
              ErrorCode::q_not_pd);
    EXPECT_EQ(code_of([] { ProblemInstance p(CMatrix(2, 2), CMatrix{{1.0, 1.0}, {0.0, 1.0}}); }),
              ErrorCode::q_not_pd);
}

TEST(StandardSolve, Examples) {
    const SolveOutcome zero = standard_solve_maximal(CMatrix(3, 3));
    EXPECT_EQ(zero.solution, CMatrix::identity(3));
    EXPECT_EQ(zero.iterations, 1u);

    const SolveOutcome s = standard_solve_maximal(CMatrix{{0.3}});
    EXPECT_NEAR(s.solution(0, 0).real(), oracle::scalar_max_root(0.3), 1e-12);
    EXPECT_NEAR(s.solution(0, 0).real(), 0.9, 1e-12);

    const CMatrix w = standard_solve_maximal(lozenge(oracle::example1_a()).matrix()).solution;
    EXPECT_LE(oracle::max_diff(unheart(EmbeddedReal(w, 2, 2)), oracle::example1_x_plus()), 1e-10);
}

TEST(StandardSolve, ExampleOneStandardEquation) {
    // ρ = 1/2 exactly for the standard equation, so convergence is sublinear
    // and the error is about the square root of the last change.
    const SolveOutcome s = standard_solve_maximal(oracle::example1_a(), boundary_tolerances());
    EXPECT_LE(oracle::max_diff(s.solution, oracle::example1_standard_x_plus()), 1e-6);
    EXPECT_LE(s.residual, 1e-9);
}

TEST(StandardSolve, LossOfDefinitenessIsEvidence) {
    try {
        (void)standard_solve_maximal(CMatrix{{0.8}});
        FAIL();
    } catch (const IterationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_solution_evidence);
        EXPECT_GT(e.iterations(), 0u);
    }
}

TEST(StandardSolve, CapIsReportedSeparately) {
    Tolerances tol;
    tol.max_iter = 50;
    try {
        (void)standard_solve_maximal(CMatrix{{0.5}}, tol);
        FAIL();
    } catch (const IterationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::max_iterations);
        EXPECT_EQ(e.trace().size(), 50u);
    }
}

TEST(SolveMaximal, Examples) {
    EXPECT_EQ(solve_maximal(ProblemInstance(CMatrix(2, 2))).solution, CMatrix::identity(2));

    const ProblemInstance ex(oracle::example1_a());
    const SolveOutcome out = solve_maximal(ex);
    EXPECT_EQ(out.kind, SolutionKind::maximal);
    EXPECT_LE(oracle::max_diff(out.solution, oracle::example1_x_plus()), 1e-10);
    EXPECT_LE(out.residual, 1e-9);
    EXPECT_LE(out.path_disagreement, 1e-8);
    EXPECT_LE(out.structure_drift, 1e-10);

    const SolveOutcome d = solve_maximal(ProblemInstance(diag2(0.3, 0.4 * kJ)));
    EXPECT_LE(oracle::max_diff(d.solution, diag2(oracle::scalar_max_root(0.3),
                                                 oracle::scalar_max_root(0.4))),
              1e-12);
    EXPECT_LE(oracle::max_diff(d.solution, diag2(0.9, 0.8)), 1e-12);
}

TEST(SolveMaximal, NoSolutionEvidence) {
    try {
        (void)solve_maximal(ProblemInstance(0.8 * CMatrix::identity(2)));
        FAIL();
    } catch (const IterationError& e) {
        EXPECT_EQ(e.code(), ErrorCode::no_solution_evidence);
    }
}

TEST(SolveMinimal, Examples) {
    const SolveOutcome s = solve_minimal(ProblemInstance(CMatrix{{0.3}}));
    EXPECT_EQ(s.kind, SolutionKind::minimal);
    EXPECT_NEAR(s.solution(0, 0).real(), oracle::scalar_min_root(0.3), 1e-12);
    EXPECT_NEAR(s.solution(0, 0).real(), 0.1, 1e-12);

    const SolveOutcome d = solve_minimal(ProblemInstance(diag2(0.3, 0.4 * kJ)));
    EXPECT_LE(oracle::max_diff(d.solution, diag2(0.1, 0.2)), 1e-12);

    const SolveOutcome ex = solve_minimal(ProblemInstance(oracle::example1_a()));
    EXPECT_LE(ex.residual, 1e-9);
    EXPECT_NEAR(ex.solution(0, 0).real(), 0.5 - std::sqrt(6.0) / 8.0, 1e-10);
}

TEST(SolveMinimal, BoundaryHalfIdentity) {
    // Sublinear convergence: the default stop rule times out, and a looser
    // stop rule meets the residual bound with X₋ = X₊ = ½I to 1e-4.
    const ProblemInstance strict(0.5 * CMatrix::identity(2));
    EXPECT_EQ(code_of([&] { (void)solve_maximal(strict); }), ErrorCode::max_iterations);

    Tolerances loose;
    loose.stop_rel = 1e-10;
    loose.max_iter = 10000000;
    const ProblemInstance p(0.5 * CMatrix::identity(2), std::nullopt, loose);
    const SolveOutcome hi = solve_maximal(p);
    const SolveOutcome lo = solve_minimal(p);
    EXPECT_LE(oracle::max_diff(hi.solution, 0.5 * CMatrix::identity(2)), 1e-4);
    EXPECT_LE(oracle::max_diff(lo.solution, 0.5 * CMatrix::identity(2)), 1e-4);
    EXPECT_LE(lo.residual, residual_threshold(p));
}

TEST(SolveMinimal, SingularARefused) {
    EXPECT_EQ(code_of([] { (void)solve_minimal(ProblemInstance(diag2(0.3, 0.0))); }),
              ErrorCode::singular_a);
    EXPECT_EQ(code_of([] { (void)solve_minimal(ProblemInstance(CMatrix(2, 2))); }),
              ErrorCode::singular_a);
}

TEST(Residual, Examples) {
    EXPECT_LE(residual(oracle::example1_x_plus(), ProblemInstance(oracle::example1_a())), 1e-9);
    EXPECT_EQ(residual(CMatrix::identity(2), ProblemInstance(CMatrix(2, 2))), 0.0);
    EXPECT_NEAR(residual(CMatrix{{0.5}}, ProblemInstance(CMatrix{{0.5}})), 0.0, 1e-15);
    EXPECT_EQ(code_of([] { (void)residual(CMatrix{{-1.0}}, ProblemInstance(CMatrix{{0.1}})); }),
              ErrorCode::not_positive_definite);
}

TEST(Extremality, Examples) {
    const ProblemInstance ex(oracle::example1_a());
    EXPECT_TRUE(extremality_check(oracle::example1_x_plus(), ex, SolutionKind::maximal).holds);

    const ProblemInstance s(CMatrix{{0.3}});
    const ExtremalityResult hi = extremality_check(CMatrix{{0.9}}, s, SolutionKind::maximal);
    EXPECT_TRUE(hi.holds);
    EXPECT_NEAR(hi.rho, 1.0 / 9.0, 1e-9);
    const ExtremalityResult lo = extremality_check(CMatrix{{0.1}}, s, SolutionKind::minimal);
    EXPECT_TRUE(lo.holds);
    EXPECT_NEAR(lo.rho, 9.0, 1e-7);

    // Swapped roles fail.
    EXPECT_FALSE(extremality_check(CMatrix{{0.1}}, s, SolutionKind::maximal).holds);
    EXPECT_FALSE(extremality_check(CMatrix{{0.9}}, s, SolutionKind::minimal).holds);
    EXPECT_EQ(code_of([&] { (void)extremality_check(CMatrix{{0.5}}, s, SolutionKind::maximal); }),
              ErrorCode::not_a_solution);
}

TEST(Invariants, MonotoneEnvelopeAndHeartStructure) {
    oracle::Random rng(41);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = rng.index(1, 5);
        const ProblemInstance p(instances::solvable_nonsingular(rng, n));
        CMatrix previous;
        bool have = false;
        double worst_step = 0.0;
        double worst_cap = 0.0;
        double worst_defect = 0.0;
        IterationOptions opts;
        opts.observer = [&](std::size_t, const CMatrix& w) {
            worst_defect = std::max(worst_defect, heart_defect(w));
            worst_cap = std::max(worst_cap, max_eigenvalue(hermitian_part(w)) - 1.0);
            if (have) {
                worst_step = std::max(worst_step, -min_eigenvalue(hermitian_part(previous - w)));
            }
            previous = w;
            have = true;
        };
        const SolveOutcome out = solve_maximal(p, opts);
        EXPECT_LE(worst_step, 1e-12);
        EXPECT_LE(worst_cap, 1e-12);
        EXPECT_LE(worst_defect, 1e-10);
        EXPECT_LE(oracle::max_diff(previous, heart(out.solution).matrix()), 1e-9);
    }
}

TEST(Invariants, LinearRateOnExampleOne) {
    const SolveOutcome out = solve_maximal(ProblemInstance(oracle::example1_a()));
    ASSERT_TRUE(out.rate_certificate.has_value());
    EXPECT_TRUE(out.rate_certificate->linear_rate_guaranteed);
    EXPECT_LT(out.rate_certificate->value, 1.0);
    const double mu = out.rate_certificate->value * out.rate_certificate->value + 0.05;
    ASSERT_GE(out.trace.size(), 4u);
    // Some k* within the first quarter after which every ratio is below μ.
    std::size_t k_star = out.trace.size();
    for (std::size_t k = out.trace.size() - 1; k-- > 0;) {
        if (out.trace[k + 1] > mu * out.trace[k]) {
            break;
        }
        k_star = k;
    }
    EXPECT_LE(k_star, out.trace.size() / 4);
}

TEST(Invariants, TraceEventuallyDecreasing) {
    oracle::Random rng(43);
    for (int t = 0; t < 20; ++t) {
        const SolveOutcome out =
            solve_maximal(ProblemInstance(instances::solvable_nonsingular(rng, rng.index(1, 4))));
        ASSERT_GE(out.trace.size(), 2u);
        const std::size_t tail = out.trace.size() / 2;
        for (std::size_t k = tail; k + 1 < out.trace.size(); ++k) {
            if (out.trace[k] > 1e-14) {
                EXPECT_LE(out.trace[k + 1], out.trace[k]);
            }
        }
    }
}

TEST(Invariants, RealCoefficientGivesRealSolutions) {
    oracle::Random rng(47);
    int tested = 0;
    while (tested < 30) {
        const std::size_t n = rng.index(1, 5);
        const CMatrix a = rng.with_singular_values(n, 0.25, n == 1 ? 0.49 : 0.65, true);
        if (numerical_radius(lozenge(a).matrix()) > 0.49) {
            continue;
        }
        ++tested;
        const auto [hi, lo] = solve_extremal_pair(ProblemInstance(a));
        EXPECT_LE(max_imag(hi.solution), 1e-10);
        EXPECT_LE(max_imag(lo.solution), 1e-10);
    }
}

TEST(Invariants, OrderOfExtremalSolutions) {
    oracle::Random rng(53);
    for (int t = 0; t < 40; ++t) {
        const ProblemInstance p(instances::solvable_nonsingular(rng, rng.index(1, 5)));
        const auto [hi, lo] = solve_extremal_pair(p);
        EXPECT_GE(min_eigenvalue(hermitian_part(hi.solution - lo.solution)), -1e-9);
        EXPECT_LE(hi.residual, residual_threshold(p));
        EXPECT_LE(lo.residual, residual_threshold(p));
        EXPECT_TRUE(extremality_check(hi.solution, p, SolutionKind::maximal).holds);
        EXPECT_TRUE(extremality_check(lo.solution, p, SolutionKind::minimal).holds);
    }
}

TEST(Invariants, DistinctFromStandardEquation) {
    const CMatrix x = solve_maximal(ProblemInstance(oracle::example1_a())).solution;
    const CMatrix x_std =
        standard_solve_maximal(oracle::example1_a(), boundary_tolerances()).solution;
    EXPECT_GT(op_norm_2(x - x_std), 0.05);
}
