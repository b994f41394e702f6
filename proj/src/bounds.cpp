#include "conric/bounds.hpp"

#include <string>

namespace conric {

namespace {

bool nonsingular(const CMatrix& a, const Tolerances& tol) {
    return smallest_singular_value(a, tol) > tol.pd_floor * op_norm_2(a);
}

CMatrix positive_inverse(const CMatrix& m, const Tolerances& tol, const char* what) {
    const CMatrix h = hermitian_part(m);
    if (!cholesky(h, tol).ok) {
        throw Error(ErrorCode::inner_not_pd, std::string(what) + " is not positive definite");
    }
    return mat_inverse(h, tol);
}

}  // namespace

CMatrix ladder_block(const CMatrix& a, BoundSide side, std::size_t k) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "ladder needs a square matrix");
    }
    if (k == 0) {
        throw Error(ErrorCode::invalid_argument, "ladder index starts at 1");
    }
    const std::size_t n = a.rows();
    const CMatrix c = side == BoundSide::lower ? a : adjoint(a);
    const CMatrix odd = adjoint(c);
    const CMatrix even = transpose(c);
    CMatrix h = CMatrix::identity(k * n);
    for (std::size_t i = 1; i < k; ++i) {
        const CMatrix& sup = (i % 2 == 1) ? odd : even;
        h.set_block((i - 1) * n, i * n, sup);
        h.set_block(i * n, (i - 1) * n, adjoint(sup));
    }
    return h;
}

BoundsLadder build_ladder(const CMatrix& a, BoundSide side, std::size_t depth,
                          const Tolerances& tol) {
    tol.validate();
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "ladder needs a square matrix");
    }
    if (depth == 0) {
        throw Error(ErrorCode::invalid_argument, "ladder depth must be at least 1");
    }
    if (side == BoundSide::upper && !nonsingular(a, tol)) {
        throw Error(ErrorCode::singular_a, "the upper ladder needs a nonsingular A");
    }
    const std::size_t n = a.rows();
    const CMatrix f_block = side == BoundSide::lower ? transpose(a) : a;
    const CMatrix id = CMatrix::identity(n);

    BoundsLadder out;
    out.side = side;
    out.requested_depth = depth;
    for (std::size_t k = 1; k <= depth; ++k) {
        CMatrix block = ladder_block(a, side, k);
        const bool plain = side == BoundSide::lower ? (k % 2 == 0) : (k % 2 == 1);
        const Cholesky chol = cholesky(plain ? block : conj(block), tol);
        if (!chol.ok) {
            if (chol.min_pivot_ratio < -tol.pd_floor) {
                throw Error(ErrorCode::ladder_breakdown,
                            std::string(side == BoundSide::lower ? "H_" : "G_") +
                                std::to_string(k) + " is not positive definite");
            }
            out.truncated = true;
            break;
        }
        CMatrix f(k * n, n);
        f.set_block((k - 1) * n, 0, f_block);
        const CMatrix z = forward_substitute(chol.lower, f);
        const CMatrix form = hermitian_part(adjoint(z) * z);
        out.matrices.push_back(side == BoundSide::lower ? form : hermitian_part(id - form));
        out.ladder_blocks.push_back(std::move(block));
        out.pivot_margins.push_back(chol.min_pivot_ratio);
    }
    out.depth = out.matrices.size();
    for (std::size_t k = 0; k + 1 < out.depth; ++k) {
        const CMatrix diff = side == BoundSide::lower ? out.matrices[k + 1] - out.matrices[k]
                                                      : out.matrices[k] - out.matrices[k + 1];
        out.monotone_gaps.push_back(min_eigenvalue(hermitian_part(diff)));
    }
    return out;
}

CMatrix closed_form_bounds(const CMatrix& a, ClosedForm which, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "closed forms need a square matrix");
    }
    const CMatrix id = CMatrix::identity(a.rows());
    const CMatrix as = adjoint(a);
    const CMatrix ab = conj(a);
    const CMatrix at = transpose(a);
    switch (which) {
        case ClosedForm::S1:
            return hermitian_part(conj(a * as));
        case ClosedForm::S2:
            return hermitian_part(ab * positive_inverse(id - a * as, tol, "I − AA*") * at);
        case ClosedForm::S3: {
            const CMatrix inner = positive_inverse(id - conj(a * as), tol, "I − conj(AA*)");
            return hermitian_part(
                ab * positive_inverse(id - a * inner * as, tol, "I − A(I − conj(AA*))⁻¹A*") * at);
        }
        case ClosedForm::R1:
            return hermitian_part(id - as * a);
        case ClosedForm::R2:
            return hermitian_part(
                id - as * positive_inverse(id - conj(as * a), tol, "I − conj(A*A)") * a);
        case ClosedForm::R3: {
            const CMatrix inner = positive_inverse(id - as * a, tol, "I − A*A");
            return hermitian_part(
                id - as * positive_inverse(id - at * inner * ab, tol, "I − Aᵀ(I − A*A)⁻¹Ā") * a);
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown closed form");
}

SandwichReport sandwich_report(const CMatrix& a, std::size_t depth, const Tolerances& tol) {
    const ProblemInstance p(a, std::nullopt, tol);
    SandwichReport out{build_ladder(a, BoundSide::lower, depth, tol), std::nullopt,
                       solve_maximal(p), std::nullopt, 0.0, std::nullopt, {}, false};
    if (nonsingular(a, tol)) {
        out.minimal = solve_minimal(p);
        out.upper = build_ladder(a, BoundSide::upper, depth, tol);
        out.upper_gap =
            min_eigenvalue(hermitian_part(out.upper->matrices.back() - out.maximal.solution));
    } else {
        out.upper_refused = true;
    }
    const CMatrix& below = out.minimal ? out.minimal->solution : out.maximal.solution;
    out.lower_gap = min_eigenvalue(hermitian_part(below - out.lower.matrices.back()));
    const auto& gaps = out.lower.monotone_gaps;
    out.lower_trend.assign(gaps.size() >= 2 ? gaps.end() - 2 : gaps.begin(), gaps.end());
    return out;
}

}  // namespace conric
