#pragma once

// Schur-complement bounds S_k ≺ X ≺ R_k on every positive definite solution
// of X + A* X̄⁻¹ A = I.
//
// H_k is block tridiagonal with identity diagonal blocks and super-diagonal
// blocks A*, Aᵀ, A*, Aᵀ, ... ; G_k is the same ladder built from A*.
//
//   S_k = F* H_k⁻¹ F (k even),  F* H̄_k⁻¹ F (k odd),          F  = [0; Aᵀ]
//   R_k = I − F'* Ḡ_k⁻¹ F' (k even),  I − F'* G_k⁻¹ F' (k odd), F' = [0; A]

#include <cstddef>
#include <optional>
#include <vector>

#include "conric/matrix.hpp"
#include "conric/solver.hpp"

namespace conric {

enum class BoundSide { lower, upper };

[[nodiscard]] constexpr const char* to_string(BoundSide s) noexcept {
    return s == BoundSide::lower ? "lower" : "upper";
}

struct BoundsLadder {
    BoundSide side = BoundSide::lower;
    std::size_t depth = 0;          ///< rungs actually built
    std::size_t requested_depth = 0;
    std::vector<CMatrix> matrices;  ///< S₁..S_K or R₁..R_K
    /// λ_min(S_{k+1} − S_k) or λ_min(R_k − R_{k+1}), one per consecutive pair.
    std::vector<double> monotone_gaps;
    std::vector<CMatrix> ladder_blocks;  ///< H_k or G_k, kn × kn
    std::vector<double> pivot_margins;   ///< smallest Cholesky pivot ratio per rung
    /// Set when a rung's Cholesky margin fell below pd_floor while staying
    /// nonnegative; depth then stops short of requested_depth.
    bool truncated = false;
};

/// H_k (lower) or G_k (upper) for the given k ≥ 1.
[[nodiscard]] CMatrix ladder_block(const CMatrix& a, BoundSide side, std::size_t k);

/// Throws Error(ladder_breakdown) when some H_k or G_k is indefinite, which
/// rules out a positive definite solution; Error(singular_a) for the upper
/// side with singular A.
[[nodiscard]] BoundsLadder build_ladder(const CMatrix& a, BoundSide side, std::size_t depth,
                                        const Tolerances& tol = {});

enum class ClosedForm { S1, S2, S3, R1, R2, R3 };

/// S₁ = conj(AA*), S₂ = Ā(I − AA*)⁻¹Aᵀ, S₃ = Ā(I − A(I − conj(AA*))⁻¹A*)⁻¹Aᵀ,
/// R₁ = I − A*A, R₂ = I − A*(I − conj(A*A))⁻¹A, R₃ = I − A*(I − Aᵀ(I − A*A)⁻¹Ā)⁻¹A.
/// Throws Error(inner_not_pd) when a matrix being inverted is not PD.
[[nodiscard]] CMatrix closed_form_bounds(const CMatrix& a, ClosedForm which,
                                         const Tolerances& tol = {});

struct SandwichReport {
    BoundsLadder lower;
    std::optional<BoundsLadder> upper;  ///< absent when A is singular
    SolveOutcome maximal;
    std::optional<SolveOutcome> minimal;
    /// λ_min(X₋ − S_K), or λ_min(X₊ − S_K) when X₋ is unavailable.
    double lower_gap = 0.0;
    std::optional<double> upper_gap;  ///< λ_min(R_K − X₊)
    /// Last two lower monotone gaps, the S_K → S_∞ trend.
    std::vector<double> lower_trend;
    bool upper_refused = false;
};

[[nodiscard]] SandwichReport sandwich_report(const CMatrix& a, std::size_t depth,
                                             const Tolerances& tol = {});

}  // namespace conric
