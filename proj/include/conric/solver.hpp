#pragma once

// Fixed-point engines for
//
//   X + A* X̄⁻¹ A = Q        (con-conjugate equation)
//   X + B* X⁻¹ B = I        (standard equation)
//
// The con-conjugate equation is solved through its real embedding
// W + (A◊)ᵀ W⁻¹ A◊ = I₂ₙ, with X = unheart(W), and cross-checked against the
// direct complex iteration Y ← I − A* Ȳ⁻¹ A.

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "conric/embedding.hpp"
#include "conric/matrix.hpp"

namespace conric {

enum class SolutionKind { maximal, minimal };

[[nodiscard]] constexpr const char* to_string(SolutionKind k) noexcept {
    return k == SolutionKind::maximal ? "maximal" : "minimal";
}

/// One equation X + A* X̄⁻¹ A = Q. The constructor validates every invariant.
class ProblemInstance {
public:
    /// Q defaults to the identity. Throws not_square, dimension_mismatch or
    /// q_not_pd.
    explicit ProblemInstance(CMatrix a, std::optional<CMatrix> q = std::nullopt,
                             Tolerances tol = {});

    [[nodiscard]] const CMatrix& a() const noexcept { return a_; }
    [[nodiscard]] const CMatrix& q() const noexcept { return q_; }
    [[nodiscard]] const Tolerances& tol() const noexcept { return tol_; }
    [[nodiscard]] std::size_t n() const noexcept { return a_.rows(); }
    [[nodiscard]] bool unit_q() const noexcept { return unit_q_; }

private:
    CMatrix a_;
    CMatrix q_;
    Tolerances tol_;
    bool unit_q_ = true;
};

/// A_Q = conj(Q)^{-1/2} A Q^{-1/2}; a solution Y of the unit-Q equation maps
/// back through X = Q^{1/2} Y Q^{1/2}.
struct Normalization {
    CMatrix a_q;
    CMatrix q_half;
    CMatrix q_inv_half;

    [[nodiscard]] CMatrix back_map(const CMatrix& y) const;
    [[nodiscard]] CMatrix forward_map(const CMatrix& x) const;
};

[[nodiscard]] Normalization normalize_q(const ProblemInstance& p);

struct RateCertificate {
    double value = 0.0;  ///< ‖X₊⁻¹Ā‖ in normalized coordinates
    bool linear_rate_guaranteed = false;
};

struct SolveOutcome {
    CMatrix solution;
    SolutionKind kind = SolutionKind::maximal;
    std::size_t iterations = 0;
    double residual = 0.0;
    /// ‖W_{k+1} − W_k‖_F per step, possibly cut at IterationOptions::trace_limit.
    std::vector<double> trace;
    bool trace_truncated = false;
    std::optional<RateCertificate> rate_certificate;
    double structure_drift = 0.0;     ///< max heart defect over the embedded iterates
    double path_disagreement = 0.0;   ///< max entry gap, embedded vs. direct
};

struct IterationOptions {
    /// Called with (k, X_k) for every iterate, X₀ = I included.
    std::function<void(std::size_t, const CMatrix&)> observer;
    std::size_t trace_limit = std::size_t{1} << 20;
};

/// Maximal solution of X + B* X⁻¹ B = I from X₀ = I. Stops once
/// ‖X_{k+1} − X_k‖ ≤ stop_rel·‖X_k‖ and the residual is within residual_tol.
/// Throws IterationError(no_solution_evidence) when an iterate loses positive
/// definiteness and IterationError(max_iterations) at the cap.
[[nodiscard]] SolveOutcome standard_solve_maximal(const CMatrix& b, const Tolerances& tol = {},
                                                  const IterationOptions& opts = {});

/// Maximal solution of the con-conjugate equation. The embedded observer sees
/// the 2n×2n real iterates W_k.
[[nodiscard]] SolveOutcome solve_maximal(const ProblemInstance& p,
                                         const IterationOptions& opts = {});

/// Minimal solution via the dual equation Y + A Ȳ⁻¹ A* = I, X₋ = I − conj(Y₊).
/// Throws Error(singular_a) when σ_min(A) ≤ pd_floor·‖A‖.
[[nodiscard]] SolveOutcome solve_minimal(const ProblemInstance& p,
                                         const IterationOptions& opts = {});

/// Both extremal solutions with the order X₋ ≤ X₊ verified to 1e-9.
[[nodiscard]] std::pair<SolveOutcome, SolveOutcome> solve_extremal_pair(
    const ProblemInstance& p);

/// ‖x + A* x̄⁻¹ A − Q‖₂. Throws Error(not_positive_definite) unless x is
/// Hermitian positive definite.
[[nodiscard]] double residual(const CMatrix& x, const ProblemInstance& p);

/// Residual acceptance threshold for an instance, residual_tol·max(1, ‖Q‖).
[[nodiscard]] double residual_threshold(const ProblemInstance& p);

struct ExtremalityResult {
    bool holds = false;
    double rho = 0.0;  ///< ρ(M M̄)
    Ordering ordering = Ordering::at;
};

/// Maximal: ρ(M M̄) ≤ 1 for M = X̄⁻¹A. Minimal: ρ(M M̄) ≥ 1 for M = X̄⁻¹A*.
/// Evaluated after Q-normalization. Throws Error(not_a_solution) when the
/// residual exceeds residual_threshold.
[[nodiscard]] ExtremalityResult extremality_check(const CMatrix& x, const ProblemInstance& p,
                                                  SolutionKind kind);

}  // namespace conric
