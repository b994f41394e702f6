#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "conric/matrix.hpp"

namespace conric {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr std::size_t kMaxSweeps = 100;

// Applies the unitary plane rotation G (acting on coordinates p, q) as
// a ← G* a G and v ← v G, where
//   G = [[c, s], [-s·conj(phase), c·conj(phase)]].
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q, double c, double s,
            Complex phase) {
    const std::size_t n = a.rows();
    const Complex cp = std::conj(phase);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * c - akq * (s * cp);
        a(k, q) = akp * s + akq * (c * cp);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = apk * c - aqk * (s * phase);
        a(q, k) = apk * s + aqk * (c * phase);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * c - vkq * (s * cp);
        v(k, q) = vkp * s + vkq * (c * cp);
    }
}

// Applies f to the eigenvalues of a Hermitian matrix.
template <typename F>
CMatrix hermitian_function(const HermitianEigen& eig, F f) {
    const std::size_t n = eig.values.size();
    CMatrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(eig.values[k]);
        if (fk == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = eig.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(eig.vectors(j, k));
            }
        }
    }
    return hermitian_part(out);
}

double lambda_max_of_rotated(const CMatrix& a, double theta) {
    const Complex phase = std::polar(1.0, theta);
    return max_eigenvalue(hermitian_part(a * phase));
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& h) {
    if (!h.is_square()) {
        throw Error(ErrorCode::not_square, "eigendecomposition of a non-square matrix");
    }
    if (!is_hermitian(h, kHermitianTol)) {
        throw Error(ErrorCode::not_hermitian, "eigendecomposition needs a Hermitian matrix");
    }
    const std::size_t n = h.rows();
    CMatrix a = hermitian_part(h);
    CMatrix v = CMatrix::identity(n);
    const double total = frobenius_norm(a);
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (off == 0.0 || std::sqrt(off) <= eps * total * 1e-2) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex g = a(p, q);
                const double r = std::abs(g);
                if (r == 0.0) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                // Negligible against both diagonal entries: drop instead of rotating.
                if (sweep > 3 && r < eps * 1e-3 * (std::abs(app) + std::abs(aqq))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 0.5 / tau;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                rotate(a, v, p, q, c, s, g / r);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    HermitianEigen out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double min_eigenvalue(const CMatrix& h) {
    const auto eig = hermitian_eigen(h);
    return eig.values.empty() ? 0.0 : eig.values.front();
}

double max_eigenvalue(const CMatrix& h) {
    const auto eig = hermitian_eigen(h);
    return eig.values.empty() ? 0.0 : eig.values.back();
}

double hermitian_norm_2(const CMatrix& h) {
    const auto eig = hermitian_eigen(h);
    if (eig.values.empty()) {
        return 0.0;
    }
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double op_norm_2(const CMatrix& a) {
    if (a.empty()) {
        return 0.0;
    }
    // The smaller Gram matrix carries the same nonzero spectrum.
    const CMatrix gram = a.rows() < a.cols() ? a * adjoint(a) : adjoint(a) * a;
    return std::sqrt(std::max(0.0, max_eigenvalue(gram)));
}

double smallest_singular_value(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "smallest singular value of a non-square matrix");
    }
    if (a.empty()) {
        return 0.0;
    }
    try {
        const CMatrix inv = mat_inverse(a, tol);
        return 1.0 / op_norm_2(inv);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::singular) {
            return 0.0;
        }
        throw;
    }
}

double spectral_radius(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "spectral radius of a non-square matrix");
    }
    const double s0 = frobenius_norm(a);
    if (a.empty() || s0 == 0.0) {
        return 0.0;
    }
    // Invariant: a^(2^k) = exp(log_scale) · b with ‖b‖_F = 1. The Frobenius
    // norm keeps rotations flat, so log‖a^N‖/N − log ρ ≈ c/N and one
    // Richardson step 2ℓ_k − ℓ_{k−1} removes the constant.
    CMatrix b = a * Complex(1.0 / s0);
    double log_scale = std::log(s0);
    double level = log_scale;
    double estimate = s0;
    // Equal-modulus eigenvalue pairs make ‖b‖ oscillate with no decay, so
    // agreement of successive estimates is not evidence; square to the cap.
    for (std::size_t k = 1; k <= tol.gelfand_squarings; ++k) {
        b = b * b;
        const double s = frobenius_norm(b);
        if (s == 0.0 || !std::isfinite(s)) {
            return 0.0;
        }
        b *= Complex(1.0 / s);
        log_scale = 2.0 * log_scale + std::log(s);
        const double next_level = std::ldexp(log_scale, -static_cast<int>(k));
        estimate = std::exp(2.0 * next_level - level);
        level = next_level;
    }
    return estimate;
}

double numerical_radius(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "numerical radius of a non-square matrix");
    }
    if (a.empty() || max_abs(a) == 0.0) {
        return 0.0;
    }
    const std::size_t grid = tol.omega_grid;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    double best = -std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    for (std::size_t i = 0; i < grid; ++i) {
        const double theta = step * static_cast<double>(i);
        const double v = lambda_max_of_rotated(a, theta);
        if (v > best) {
            best = v;
            best_theta = theta;
        }
    }
    double lo = best_theta - step;
    double hi = best_theta + step;
    while (hi - lo > tol.omega_refine_tol) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (lambda_max_of_rotated(a, m1) < lambda_max_of_rotated(a, m2)) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best = std::max(best, lambda_max_of_rotated(a, 0.5 * (lo + hi)));
    return std::max(best, 0.0);
}

CMatrix psd_sqrt(const CMatrix& h) {
    const auto eig = hermitian_eigen(h);
    if (eig.values.empty()) {
        return h;
    }
    const double scale = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    if (eig.values.front() < -kPsdTol * scale) {
        throw Error(ErrorCode::not_psd,
                    "smallest eigenvalue " + std::to_string(eig.values.front()) + " is negative");
    }
    return hermitian_function(eig, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix pd_inverse_sqrt(const CMatrix& h, const Tolerances& tol) {
    const auto eig = hermitian_eigen(h);
    if (eig.values.empty()) {
        return h;
    }
    const double scale = std::abs(eig.values.back());
    if (!(eig.values.front() > tol.pd_floor * scale)) {
        throw Error(ErrorCode::not_positive_definite, "inverse square root needs a PD matrix");
    }
    return hermitian_function(eig, [](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace conric
