#include "conric/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conric {

namespace {

constexpr double kPathAgreement = 1e-8;
constexpr double kOrderTol = 1e-9;

struct KernelResult {
    CMatrix x;
    std::size_t iterations = 0;
    std::vector<double> trace;
    bool trace_truncated = false;
    double heart_drift = 0.0;
};

double frobenius(const std::vector<Complex>& v) noexcept {
    double s = 0.0;
    for (const Complex& z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

// Block-pattern defect of a 2m×2m buffer relative to its largest entry.
double buffer_heart_defect(const std::vector<Complex>& w, std::size_t dim) noexcept {
    const std::size_t m = dim / 2;
    double defect = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            scale = std::max(scale, std::abs(w[i * dim + j]));
            defect = std::max(defect, std::abs(w[i * dim + j].imag()));
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            defect = std::max(defect, std::abs(w[i * dim + j] - w[(m + i) * dim + m + j]));
            defect = std::max(defect, std::abs(w[i * dim + m + j] + w[(m + i) * dim + j]));
        }
    }
    return scale == 0.0 ? 0.0 : defect / scale;
}

// ‖X + B* op(X)⁻¹ B − I‖₂ with op = conj when conjugate is set.
double kernel_residual(const CMatrix& x, const CMatrix& b, bool conjugate, const Tolerances& tol) {
    const CMatrix xo = conjugate ? conj(x) : x;
    const CMatrix d = x + adjoint(b) * solve(xo, b, tol) - CMatrix::identity(x.rows());
    return op_norm_2(d);
}

// X_{k+1} = I − B* op(X_k)⁻¹ B from X₀ = I. op(X_k) is factored as L·L*, so
// X_{k+1} = I − Z*Z with Z = L⁻¹B; the Cholesky doubles as the PD test.
KernelResult run_kernel(const CMatrix& b, bool conjugate, const Tolerances& tol,
                        const IterationOptions& opts, bool track_heart,
                        std::size_t fixed_steps = 0) {
    tol.validate();
    if (!b.is_square()) {
        throw Error(ErrorCode::not_square, "iteration coefficient must be square");
    }
    const std::size_t n = b.rows();
    KernelResult out;
    std::vector<Complex> x(n * n, Complex{});
    for (std::size_t i = 0; i < n; ++i) {
        x[i * n + i] = 1.0;
    }
    std::vector<Complex> l(n * n);
    std::vector<Complex> z(n * n);
    std::vector<Complex> next(n * n);
    const auto bd = b.entries();

    auto as_matrix = [n](const std::vector<Complex>& v) { return CMatrix(n, n, v); };
    if (opts.observer) {
        opts.observer(0, as_matrix(x));
    }

    const std::size_t cap = fixed_steps > 0 ? fixed_steps : tol.max_iter;
    for (std::size_t k = 0; k < cap; ++k) {
        // Cholesky of op(X_k).
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += x[i * n + i].real();
        }
        mean /= static_cast<double>(std::max<std::size_t>(n, 1));
        bool pd = mean > 0.0;
        for (std::size_t j = 0; pd && j < n; ++j) {
            double d = x[j * n + j].real();
            for (std::size_t p = 0; p < j; ++p) {
                d -= std::norm(l[j * n + p]);
            }
            if (d <= tol.pd_floor * mean) {
                pd = false;
                break;
            }
            const double ljj = std::sqrt(d);
            l[j * n + j] = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                Complex s = conjugate ? std::conj(x[i * n + j]) : x[i * n + j];
                for (std::size_t p = 0; p < j; ++p) {
                    s -= l[i * n + p] * std::conj(l[j * n + p]);
                }
                l[i * n + j] = s / ljj;
            }
        }
        if (!pd) {
            throw IterationError(ErrorCode::no_solution_evidence,
                                 "iterate " + std::to_string(k) + " lost positive definiteness",
                                 k, std::move(out.trace));
        }
        // Z = L⁻¹ B.
        for (std::size_t c = 0; c < n; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                Complex s = bd[i * n + c];
                for (std::size_t p = 0; p < i; ++p) {
                    s -= l[i * n + p] * z[p * n + c];
                }
                z[i * n + c] = s / l[i * n + i].real();
            }
        }
        // next = I − Z*Z, filled from the upper triangle so it stays Hermitian.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                Complex s{};
                for (std::size_t p = 0; p < n; ++p) {
                    s += std::conj(z[p * n + i]) * z[p * n + j];
                }
                const Complex v = (i == j ? Complex(1.0 - s.real(), 0.0) : -s);
                next[i * n + j] = v;
                next[j * n + i] = std::conj(v);
            }
        }
        double change2 = 0.0;
        for (std::size_t i = 0; i < n * n; ++i) {
            change2 += std::norm(next[i] - x[i]);
        }
        const double change = std::sqrt(change2);
        const double size = frobenius(x);
        if (out.trace.size() < opts.trace_limit) {
            out.trace.push_back(change);
        } else {
            out.trace_truncated = true;
        }
        if (track_heart) {
            out.heart_drift = std::max(out.heart_drift, buffer_heart_defect(next, n));
        }
        std::swap(x, next);
        out.iterations = k + 1;
        if (opts.observer) {
            opts.observer(k + 1, as_matrix(x));
        }
        // The Frobenius test is necessary for the 2-norm one; only then is the
        // spectral norm of the previous iterate worth computing.
        if (fixed_steps == 0 && change <= tol.stop_rel * size) {
            const double prev_norm = hermitian_norm_2(as_matrix(next));
            if (change <= tol.stop_rel * prev_norm) {
                const CMatrix xm = as_matrix(x);
                if (kernel_residual(xm, b, conjugate, tol) <= tol.residual_tol) {
                    out.x = xm;
                    return out;
                }
            }
        }
    }
    if (fixed_steps > 0) {
        out.x = as_matrix(x);
        return out;
    }
    throw IterationError(ErrorCode::max_iterations,
                         "no convergence within " + std::to_string(tol.max_iter) + " iterations",
                         out.iterations, std::move(out.trace));
}

void require_bounded_residual(double r, double threshold, const char* what) {
    if (!(r <= threshold)) {
        throw Error(ErrorCode::internal_inconsistency,
                    std::string(what) + " residual " + std::to_string(r) +
                        " exceeds " + std::to_string(threshold));
    }
}

}  // namespace

ProblemInstance::ProblemInstance(CMatrix a, std::optional<CMatrix> q, Tolerances tol)
    : a_(std::move(a)), tol_(tol) {
    tol_.validate();
    if (!a_.is_square()) {
        throw Error(ErrorCode::not_square, "coefficient A must be square");
    }
    if (!q) {
        q_ = CMatrix::identity(a_.rows());
        return;
    }
    q_ = std::move(*q);
    if (q_.rows() != a_.rows() || q_.cols() != a_.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "Q and A must have the same dimensions");
    }
    if (!is_hermitian(q_) || !cholesky(q_, tol_).ok) {
        throw Error(ErrorCode::q_not_pd, "Q must be Hermitian positive definite");
    }
    q_ = hermitian_part(q_);
    unit_q_ = q_ == CMatrix::identity(a_.rows());
}

CMatrix Normalization::back_map(const CMatrix& y) const {
    return hermitian_part(q_half * y * q_half);
}

CMatrix Normalization::forward_map(const CMatrix& x) const {
    return hermitian_part(q_inv_half * x * q_inv_half);
}

Normalization normalize_q(const ProblemInstance& p) {
    Normalization out;
    if (p.unit_q()) {
        out.a_q = p.a();
        out.q_half = CMatrix::identity(p.n());
        out.q_inv_half = out.q_half;
        return out;
    }
    try {
        out.q_half = psd_sqrt(p.q());
        out.q_inv_half = pd_inverse_sqrt(p.q(), p.tol());
    } catch (const Error&) {
        throw Error(ErrorCode::q_not_pd, "Q must be Hermitian positive definite");
    }
    out.a_q = conj(out.q_inv_half) * p.a() * out.q_inv_half;
    return out;
}

SolveOutcome standard_solve_maximal(const CMatrix& b, const Tolerances& tol,
                                    const IterationOptions& opts) {
    KernelResult k = run_kernel(b, false, tol, opts, false);
    SolveOutcome out;
    out.residual = kernel_residual(k.x, b, false, tol);
    out.solution = std::move(k.x);
    out.kind = SolutionKind::maximal;
    out.iterations = k.iterations;
    out.trace = std::move(k.trace);
    out.trace_truncated = k.trace_truncated;
    return out;
}

SolveOutcome solve_maximal(const ProblemInstance& p, const IterationOptions& opts) {
    const Tolerances& tol = p.tol();
    const std::size_t n = p.n();
    const Normalization norm = normalize_q(p);

    const CMatrix diamond = lozenge(norm.a_q).matrix();
    KernelResult embedded = run_kernel(diamond, false, tol, opts, true);
    if (embedded.heart_drift > kHeartTolerance) {
        throw Error(ErrorCode::internal_inconsistency,
                    "embedded iterate lost heart structure (defect " +
                        std::to_string(embedded.heart_drift) + ")");
    }
    const CMatrix y_embedded = unheart(EmbeddedReal(embedded.x, n, n));

    KernelResult direct;
    try {
        // Same step count: W_k = Y_k♥ holds iterate by iterate.
        direct = run_kernel(norm.a_q, true, tol, IterationOptions{{}, 0}, false,
                            embedded.iterations);
    } catch (const Error& e) {
        throw Error(ErrorCode::internal_inconsistency,
                    std::string("direct iteration failed where the embedded one converged: ") +
                        e.what());
    }
    const double gap = max_abs(y_embedded - direct.x);
    if (gap > kPathAgreement * std::max(1.0, max_abs(direct.x))) {
        throw Error(ErrorCode::internal_inconsistency,
                    "embedded and direct iterations disagree by " + std::to_string(gap));
    }

    const CMatrix y = hermitian_part(y_embedded);
    SolveOutcome out;
    out.solution = norm.back_map(y);
    out.kind = SolutionKind::maximal;
    out.iterations = embedded.iterations;
    out.trace = std::move(embedded.trace);
    out.trace_truncated = embedded.trace_truncated;
    out.structure_drift = embedded.heart_drift;
    out.path_disagreement = gap;
    out.residual = residual(out.solution, p);
    require_bounded_residual(out.residual, residual_threshold(p), "maximal solution");

    const double rate = op_norm_2(solve(y, conj(norm.a_q), tol));
    out.rate_certificate = RateCertificate{rate, rate < 1.0};
    return out;
}

SolveOutcome solve_minimal(const ProblemInstance& p, const IterationOptions& opts) {
    const Tolerances& tol = p.tol();
    const double a_norm = op_norm_2(p.a());
    if (!(smallest_singular_value(p.a(), tol) > tol.pd_floor * a_norm)) {
        throw Error(ErrorCode::singular_a, "the minimal solution needs a nonsingular A");
    }
    const Normalization norm = normalize_q(p);
    const std::size_t n = p.n();

    // Dual equation Y + M* Ȳ⁻¹ M = I with M = A_Q*; then X₋ = I − conj(Y₊).
    const ProblemInstance dual(adjoint(norm.a_q), std::nullopt, tol);
    SolveOutcome out = solve_maximal(dual, opts);
    const CMatrix x_unit = hermitian_part(CMatrix::identity(n) - conj(out.solution));
    if (!cholesky(x_unit, tol).ok) {
        throw Error(ErrorCode::no_solution_evidence,
                    "I − conj(Y₊) of the dual equation is not positive definite");
    }
    out.solution = norm.back_map(x_unit);
    out.kind = SolutionKind::minimal;
    out.residual = residual(out.solution, p);
    require_bounded_residual(out.residual, residual_threshold(p), "minimal solution");
    return out;
}

std::pair<SolveOutcome, SolveOutcome> solve_extremal_pair(const ProblemInstance& p) {
    SolveOutcome plus = solve_maximal(p);
    SolveOutcome minus = solve_minimal(p);
    const double gap = min_eigenvalue(hermitian_part(plus.solution - minus.solution));
    if (gap < -kOrderTol) {
        throw Error(ErrorCode::internal_inconsistency,
                    "X₋ ≤ X₊ violated, min eigenvalue " + std::to_string(gap));
    }
    return {std::move(plus), std::move(minus)};
}

double residual(const CMatrix& x, const ProblemInstance& p) {
    if (x.rows() != p.n() || x.cols() != p.n()) {
        throw Error(ErrorCode::dimension_mismatch, "candidate solution has the wrong size");
    }
    if (!is_hermitian(x) || !cholesky(x, p.tol()).ok) {
        throw Error(ErrorCode::not_positive_definite,
                    "candidate solution is not Hermitian positive definite");
    }
    const CMatrix d = x + adjoint(p.a()) * solve(conj(x), p.a(), p.tol()) - p.q();
    return op_norm_2(d);
}

double residual_threshold(const ProblemInstance& p) {
    const double q_norm = p.unit_q() ? 1.0 : hermitian_norm_2(p.q());
    return p.tol().residual_tol * std::max(1.0, q_norm);
}

ExtremalityResult extremality_check(const CMatrix& x, const ProblemInstance& p,
                                    SolutionKind kind) {
    const double r = residual(x, p);
    if (r > residual_threshold(p)) {
        throw Error(ErrorCode::not_a_solution,
                    "residual " + std::to_string(r) + " exceeds the acceptance threshold");
    }
    const Normalization norm = normalize_q(p);
    const CMatrix y = norm.forward_map(x);
    const CMatrix coef = kind == SolutionKind::maximal ? norm.a_q : adjoint(norm.a_q);
    const CMatrix m = solve(conj(y), coef, p.tol());
    const CoSpectralClass cls = co_spectral_radius_vs_one(m, p.tol());
    ExtremalityResult out;
    out.rho = cls.rho;
    out.ordering = cls.ordering;
    out.holds = kind == SolutionKind::maximal ? cls.ordering != Ordering::above
                                              : cls.ordering != Ordering::below;
    return out;
}

}  // namespace conric
