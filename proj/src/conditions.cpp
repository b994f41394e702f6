#include "conric/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "conric/embedding.hpp"

namespace conric {

namespace {

Condition make_condition(std::string name, double margin, bool strict, double band) {
    Condition c;
    c.name = std::move(name);
    c.margin = margin;
    c.holds = strict ? margin > 0.0 : margin >= 0.0;
    c.in_band = std::abs(margin) <= band;
    return c;
}

bool fails_beyond_band(const Condition& c) { return !c.holds && !c.in_band; }

// coρ(B) ≤ 1 through ρ(B B̄) ≤ 1.
double co_rho_margin(const CMatrix& b, const Tolerances& tol) {
    return 1.0 - spectral_radius(b * conj(b), tol);
}

}  // namespace

ExistenceReport check_existence(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "existence test needs a square matrix");
    }
    const std::size_t n = a.rows();
    const CMatrix id = CMatrix::identity(n);
    const double a_norm = op_norm_2(a);
    ExistenceReport out;

    out.necessary.push_back(make_condition(
        "rho_quarter", 0.25 - spectral_radius(a * conj(a), tol), false, kConditionBand));
    out.necessary.push_back(make_condition("norm_lt_one", 1.0 - a_norm, true, kConditionBand));
    const CMatrix gram = hermitian_part(id - a * adjoint(a) - conj(adjoint(a) * a));
    out.necessary.push_back(make_condition("gram_sum", min_eigenvalue(gram), true, kConditionBand));
    // conj(A)* = Aᵀ
    out.necessary.push_back(
        make_condition("co_rho_plus", co_rho_margin(a + transpose(a), tol), false, kConditionBand));
    out.necessary.push_back(
        make_condition("co_rho_minus", co_rho_margin(a - transpose(a), tol), false, kConditionBand));

    out.sufficient_norm_half = make_condition("norm_half", 0.5 - a_norm, false, kConditionBand);

    if (n > 0 && smallest_singular_value(a, tol) > tol.pd_floor * a_norm) {
        const double omega = numerical_radius(lozenge(a).matrix(), tol);
        out.exact_invertible = make_condition("omega_lozenge_half", 0.5 - omega, false, kOmegaBand);
    }

    for (const Condition& c : out.necessary) {
        if (fails_beyond_band(c)) {
            out.verdict = Verdict::not_exists;
            out.decided_by = c.name;
            return out;
        }
    }
    if (out.sufficient_norm_half.holds) {
        out.verdict = Verdict::exists;
        out.decided_by = out.sufficient_norm_half.name;
        return out;
    }
    if (out.exact_invertible) {
        const Condition& e = *out.exact_invertible;
        if (!e.in_band) {
            out.verdict = e.holds ? Verdict::exists : Verdict::not_exists;
            out.decided_by = e.name;
        }
    }
    return out;
}

CMatrix con_normal_closed_form(const CMatrix& a, SolutionKind want, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "closed form needs a square matrix");
    }
    if (!is_con_normal(a).holds) {
        throw Error(ErrorCode::not_con_normal, "A*A differs from conj(AA*)");
    }
    const std::size_t n = a.rows();
    const double a_norm = op_norm_2(a);
    if (a_norm > 0.5 + kConditionBand) {
        throw Error(ErrorCode::norm_exceeds_half, "‖A‖ = " + std::to_string(a_norm) + " > 1/2");
    }
    if (want == SolutionKind::minimal && !(smallest_singular_value(a, tol) > tol.pd_floor * a_norm)) {
        throw Error(ErrorCode::singular_a, "the minimal closed form needs a nonsingular A");
    }
    const CMatrix id = CMatrix::identity(n);
    // Within the band I − 4A*A may dip just below zero; clamp before the root.
    const HermitianEigen eig = hermitian_eigen(hermitian_part(id - 4.0 * (adjoint(a) * a)));
    CMatrix disc(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(eig.values[k], 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                disc(i, j) += eig.vectors(i, k) * root * std::conj(eig.vectors(j, k));
            }
        }
    }
    const double sign = want == SolutionKind::maximal ? 1.0 : -1.0;
    return hermitian_part(0.5 * (id + sign * hermitian_part(disc)));
}

CrossValidation cross_validate(const CMatrix& a, const Tolerances& tol) {
    CrossValidation out;
    out.existence = check_existence(a, tol);
    try {
        const ProblemInstance p(a, std::nullopt, tol);
        const SolveOutcome s = solve_maximal(p);
        out.solver_succeeded = true;
        out.solver_residual = s.residual;
        out.solver_iterations = s.iterations;
    } catch (const IterationError& e) {
        out.solver_error = e.code();
        out.solver_message = e.what();
        out.solver_iterations = e.iterations();
    } catch (const Error& e) {
        out.solver_error = e.code();
        out.solver_message = e.what();
    }
    switch (out.existence.verdict) {
        case Verdict::exists:
            out.inconsistent = !out.solver_succeeded;
            break;
        case Verdict::not_exists:
            out.inconsistent = out.solver_succeeded ||
                               (out.solver_error != ErrorCode::no_solution_evidence &&
                                out.solver_error != ErrorCode::max_iterations);
            break;
        case Verdict::undetermined:
            break;
    }
    return out;
}

}  // namespace conric
