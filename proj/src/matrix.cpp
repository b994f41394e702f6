#include "conric/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace conric {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::dimension_mismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
    }
}

bool finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void Tolerances::validate() const {
    const bool ok = pd_floor > 0 && stop_rel > 0 && residual_tol > 0 && max_iter >= 1 &&
                    omega_grid >= 8 && omega_refine_tol > 0 && gelfand_squarings >= 1;
    if (!ok) {
        throw Error(ErrorCode::invalid_argument, "tolerances out of range");
    }
}

Tolerances Tolerances::strict() {
    Tolerances t;
    t.pd_floor = 1e-14;
    t.stop_rel = 1e-14;
    t.residual_tol = 1e-11;
    t.max_iter = 1000000;
    t.omega_grid = 4096;
    t.omega_refine_tol = 1e-12;
    t.gelfand_squarings = 50;
    return t;
}

Tolerances Tolerances::from_profile(std::string_view name) {
    if (name.empty() || name == "default") {
        return Tolerances{};
    }
    if (name == "strict") {
        return strict();
    }
    throw Error(ErrorCode::invalid_argument, "unknown tolerance profile '" + std::string(name) + "'");
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::dimension_mismatch, "entry count does not match rows x cols");
    }
    if (!std::all_of(data_.begin(), data_.end(), finite)) {
        throw Error(ErrorCode::non_finite, "matrix entries must be finite");
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorCode::dimension_mismatch, "ragged initializer list");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    if (!std::all_of(data_.begin(), data_.end(), finite)) {
        throw Error(ErrorCode::non_finite, "matrix entries must be finite");
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::diagonal(std::span<const Complex> values) {
    CMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw Error(ErrorCode::dimension_mismatch, "block out of range");
    }
    CMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            out(i, j) = (*this)(r0 + i, c0 + j);
        }
    }
    return out;
}

void CMatrix::set_block(std::size_t r0, std::size_t c0, const CMatrix& src) {
    if (r0 + src.rows() > rows_ || c0 + src.cols() > cols_) {
        throw Error(ErrorCode::dimension_mismatch, "block out of range");
    }
    for (std::size_t i = 0; i < src.rows(); ++i) {
        for (std::size_t j = 0; j < src.cols(); ++j) {
            (*this)(r0 + i, c0 + j) = src(i, j);
        }
    }
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    require_same_shape(*this, other, "addition");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    require_same_shape(*this, other, "subtraction");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) noexcept {
    for (auto& z : data_) {
        z *= s;
    }
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator-(CMatrix a) { return a *= -1.0; }
CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
CMatrix operator*(const CMatrix& a, const CMatrix& b) { return mat_mul(a, b); }

CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

CMatrix conj(const CMatrix& a) {
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = std::conj(a(i, j));
        }
    }
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

CMatrix transpose(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = a(i, j);
        }
    }
    return out;
}

CMatrix hermitian_part(const CMatrix& a) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "hermitian part of a non-square matrix");
    }
    CMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return out;
}

double frobenius_norm(const CMatrix& a) noexcept {
    double s = 0.0;
    for (const auto& z : a.entries()) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

double max_abs(const CMatrix& a) noexcept {
    double m = 0.0;
    for (const auto& z : a.entries()) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double max_imag(const CMatrix& a) noexcept {
    double m = 0.0;
    for (const auto& z : a.entries()) {
        m = std::max(m, std::abs(z.imag()));
    }
    return m;
}

bool is_hermitian(const CMatrix& h, double rel_tol) noexcept {
    if (!h.is_square()) {
        return false;
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        for (std::size_t j = 0; j < h.cols(); ++j) {
            defect += std::norm(h(i, j) - std::conj(h(j, i)));
        }
    }
    return std::sqrt(defect) <= rel_tol * frobenius_norm(h);
}

CMatrix solve(const CMatrix& a, const CMatrix& b, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "linear solve needs a square matrix");
    }
    if (b.rows() != a.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "right-hand side rows do not match");
    }
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    CMatrix lu = a;
    CMatrix x = b;
    const double scale = max_abs(a);
    const double floor = tol.pd_floor * scale;
    if (n > 0 && scale == 0.0) {
        throw Error(ErrorCode::singular, "zero matrix");
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= floor) {
            throw Error(ErrorCode::singular,
                        "pivot " + std::to_string(best) + " below floor at column " +
                            std::to_string(k));
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(piv, j));
            }
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(x(k, j), x(piv, j));
            }
        }
        const Complex inv_p = 1.0 / lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) * inv_p;
            if (f == Complex{}) {
                continue;
            }
            lu(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
            for (std::size_t j = 0; j < m; ++j) {
                x(i, j) -= f * x(k, j);
            }
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const Complex inv_p = 1.0 / lu(kk, kk);
        for (std::size_t j = 0; j < m; ++j) {
            Complex s = x(kk, j);
            for (std::size_t c = kk + 1; c < n; ++c) {
                s -= lu(kk, c) * x(c, j);
            }
            x(kk, j) = s * inv_p;
        }
    }
    return x;
}

CMatrix mat_inverse(const CMatrix& a, const Tolerances& tol) {
    if (!a.is_square()) {
        throw Error(ErrorCode::not_square, "inverse of a non-square matrix");
    }
    return solve(a, CMatrix::identity(a.rows()), tol);
}

Cholesky cholesky(const CMatrix& h, const Tolerances& tol) {
    if (!h.is_square()) {
        throw Error(ErrorCode::not_square, "cholesky of a non-square matrix");
    }
    const std::size_t n = h.rows();
    Cholesky out;
    out.lower = CMatrix(n, n);
    if (n == 0) {
        out.ok = true;
        out.min_pivot_ratio = 1.0;
        return out;
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        trace += h(i, i).real();
    }
    const double mean = trace / static_cast<double>(n);
    // A non-positive trace already rules out definiteness; the ratios are then
    // taken against the largest diagonal magnitude so they stay signed.
    double scale = mean;
    if (scale <= 0.0) {
        scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            scale = std::max(scale, std::abs(h(i, i).real()));
        }
        if (scale == 0.0) {
            scale = 1.0;
        }
    }
    auto& l = out.lower;
    out.min_pivot_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            d -= std::norm(l(j, k));
        }
        const double ratio = d / scale;
        out.min_pivot_ratio = std::min(out.min_pivot_ratio, ratio);
        if (mean <= 0.0 || ratio <= tol.pd_floor) {
            out.ok = false;
            out.failed_at = j;
            if (mean <= 0.0) {
                out.min_pivot_ratio = std::min(out.min_pivot_ratio, mean / scale);
            }
            return out;
        }
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * std::conj(l(j, k));
            }
            l(i, j) = s / ljj;
        }
    }
    out.ok = true;
    return out;
}

CMatrix forward_substitute(const CMatrix& lower, const CMatrix& b) {
    if (!lower.is_square() || lower.rows() != b.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "forward substitution shapes");
    }
    const std::size_t n = lower.rows();
    CMatrix z = b;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = z(i, j);
            for (std::size_t k = 0; k < i; ++k) {
                s -= lower(i, k) * z(k, j);
            }
            z(i, j) = s / lower(i, i);
        }
    }
    return z;
}

Certified is_positive_definite(const CMatrix& h, const Tolerances& tol) {
    if (!is_hermitian(h)) {
        throw Error(ErrorCode::not_hermitian, "positive definiteness needs a Hermitian matrix");
    }
    const auto c = cholesky(h, tol);
    return Certified{c.ok, c.min_pivot_ratio};
}

}  // namespace conric
