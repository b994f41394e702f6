#include "conric/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conric {

namespace {

constexpr double kImagDropTol = 1e-14;
constexpr double kCoSpectralBand = 1e-8;
constexpr double kConNormalTol = 1e-10;

}  // namespace

EmbeddedReal::EmbeddedReal(CMatrix inner, std::size_t n, std::size_t m)
    : inner_(std::move(inner)), n_(n), m_(m) {
    if (inner_.rows() != 2 * n_ || inner_.cols() != 2 * m_) {
        throw Error(ErrorCode::dimension_mismatch, "embedded matrix must be 2n x 2m");
    }
    const double scale = std::max(max_abs(inner_), 1e-300);
    if (max_imag(inner_) > kImagDropTol * scale) {
        throw Error(ErrorCode::invalid_argument, "embedded matrix has imaginary entries");
    }
    for (std::size_t i = 0; i < inner_.rows(); ++i) {
        for (std::size_t j = 0; j < inner_.cols(); ++j) {
            inner_(i, j) = inner_(i, j).real();
        }
    }
}

double EmbeddedReal::heart_defect() const noexcept {
    double defect = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < m_; ++j) {
            defect = std::max(defect, std::abs(inner_(i, j) - inner_(n_ + i, m_ + j)));
            defect = std::max(defect, std::abs(inner_(i, m_ + j) + inner_(n_ + i, j)));
        }
    }
    const double scale = max_abs(inner_);
    return scale == 0.0 ? 0.0 : defect / scale;
}

EmbeddedReal heart(const CMatrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    CMatrix w(2 * n, 2 * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double re = a(i, j).real();
            const double im = a(i, j).imag();
            w(i, j) = re;
            w(i, m + j) = -im;
            w(n + i, j) = im;
            w(n + i, m + j) = re;
        }
    }
    return EmbeddedReal(std::move(w), n, m);
}

EmbeddedReal lozenge(const CMatrix& a) {
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    CMatrix w(2 * n, 2 * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double re = a(i, j).real();
            const double im = a(i, j).imag();
            w(i, j) = im;
            w(i, m + j) = re;
            w(n + i, j) = re;
            w(n + i, m + j) = -im;
        }
    }
    return EmbeddedReal(std::move(w), n, m);
}

EmbeddedReal e_matrix(std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::invalid_argument, "E_n needs n >= 1");
    }
    CMatrix e(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        e(i, n + i) = 1.0;
        e(n + i, i) = 1.0;
    }
    return EmbeddedReal(std::move(e), n, n);
}

CMatrix p_matrix(std::size_t n) {
    if (n == 0) {
        throw Error(ErrorCode::invalid_argument, "P_n needs n >= 1");
    }
    const double h = std::sqrt(2.0) / 2.0;
    CMatrix p(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) = Complex(0.0, h);
        p(i, n + i) = h;
        p(n + i, i) = h;
        p(n + i, n + i) = Complex(0.0, h);
    }
    return p;
}

double heart_defect(const CMatrix& w) {
    if (!w.is_square() || w.rows() % 2 != 0) {
        throw Error(ErrorCode::dimension_mismatch, "heart structure needs an even square matrix");
    }
    const std::size_t n = w.rows() / 2;
    double defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            defect = std::max(defect, std::abs(w(i, j) - w(n + i, n + j)));
            defect = std::max(defect, std::abs(w(i, n + j) + w(n + i, j)));
        }
    }
    defect = std::max(defect, max_imag(w));
    const double scale = max_abs(w);
    return scale == 0.0 ? 0.0 : defect / scale;
}

CMatrix unheart(const EmbeddedReal& w) {
    if (w.n() != w.m()) {
        throw Error(ErrorCode::dimension_mismatch, "unheart needs a square embedding");
    }
    const double defect = w.heart_defect();
    if (defect > kHeartTolerance) {
        throw Error(ErrorCode::not_heart_structured,
                    "block defect " + std::to_string(defect) + " exceeds tolerance");
    }
    const std::size_t n = w.n();
    const CMatrix& m = w.matrix();
    // (1/2)[jI; I]* W [jI; I] = (W₁₁ + W₂₂)/2 + j(W₂₁ − W₁₂)/2
    CMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = 0.5 * (m(i, j).real() + m(n + i, n + j).real());
            const double im = 0.5 * (m(n + i, j).real() - m(i, n + j).real());
            x(i, j) = Complex(re, im);
        }
    }
    return x;
}

Certified is_con_normal(const CMatrix& a) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "con-normality needs a square matrix");
    }
    const double norm = op_norm_2(a);
    const double bound = kConNormalTol * std::max(1.0, norm * norm);
    const double defect = op_norm_2(adjoint(a) * a - conj(a * adjoint(a)));
    return Certified{defect <= bound, bound - defect};
}

CoSpectralClass co_spectral_radius_vs_one(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "con-spectral radius needs a square matrix");
    }
    CoSpectralClass out;
    out.rho = spectral_radius(a * conj(a), tol);
    if (out.rho < 1.0 - kCoSpectralBand) {
        out.ordering = Ordering::below;
    } else if (out.rho > 1.0 + kCoSpectralBand) {
        out.ordering = Ordering::above;
    } else {
        out.ordering = Ordering::at;
    }
    return out;
}

}  // namespace conric
