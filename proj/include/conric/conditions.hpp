#pragma once

// Existence tests for X + A* X̄⁻¹ A = I and the closed forms available when
// A is con-normal.

#include <optional>
#include <string>
#include <vector>

#include "conric/matrix.hpp"
#include "conric/solver.hpp"

namespace conric {

/// Classification band for the 1/4, 1/2 and 1 thresholds.
inline constexpr double kConditionBand = 1e-8;
/// Wider band for ω(A◊), which carries the bias of the angle grid.
inline constexpr double kOmegaBand = 1e-4;

struct Condition {
    std::string name;
    bool holds = false;
    double margin = 0.0;   ///< positive when satisfied with room to spare
    bool in_band = false;  ///< |margin| within the classification band
};

enum class Verdict { exists, not_exists, undetermined };

[[nodiscard]] constexpr const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::exists: return "exists";
        case Verdict::not_exists: return "not_exists";
        case Verdict::undetermined: return "undetermined";
    }
    return "unknown";
}

struct ExistenceReport {
    /// rho_quarter, norm_lt_one, gram_sum, co_rho_plus, co_rho_minus in that order.
    std::vector<Condition> necessary;
    Condition sufficient_norm_half;
    /// ω(A◊) ≤ 1/2; present only when A is invertible to tolerance.
    std::optional<Condition> exact_invertible;
    Verdict verdict = Verdict::undetermined;
    /// Name of the condition that settled the verdict, empty if undetermined.
    std::string decided_by;
};

/// Necessary: ρ(AĀ) ≤ 1/4, ‖A‖ < 1, I − AA* − conj(A*A) ≻ 0 and
/// ρ((A ± Aᵀ)·conj(A ± Aᵀ)) ≤ 1. Sufficient: ‖A‖ ≤ 1/2. Exact for
/// invertible A: ω(A◊) ≤ 1/2.
[[nodiscard]] ExistenceReport check_existence(const CMatrix& a, const Tolerances& tol = {});

/// ½(I ± (I − 4A*A)^{1/2}). Throws not_con_normal, norm_exceeds_half, or
/// singular_a (minimal kind only).
[[nodiscard]] CMatrix con_normal_closed_form(const CMatrix& a, SolutionKind want,
                                             const Tolerances& tol = {});

struct CrossValidation {
    ExistenceReport existence;
    bool solver_succeeded = false;
    std::optional<ErrorCode> solver_error;
    std::string solver_message;
    double solver_residual = 0.0;
    std::size_t solver_iterations = 0;
    /// True when the verdict and the solver outcome contradict each other.
    bool inconsistent = false;
};

/// Runs check_existence and solve_maximal (Q = I) and compares them: exists
/// requires success, not_exists requires no_solution_evidence or
/// max_iterations. Never throws for square input.
[[nodiscard]] CrossValidation cross_validate(const CMatrix& a, const Tolerances& tol = {});

}  // namespace conric
