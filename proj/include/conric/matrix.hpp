#pragma once

// Dense complex linear algebra kernel: storage, arithmetic, factorizations
// and the spectral quantities used throughout the library.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "conric/error.hpp"

namespace conric {

using Complex = std::complex<double>;

/// Numerical thresholds shared by every algorithm in the library.
struct Tolerances {
    double pd_floor = 1e-12;            ///< relative Cholesky pivot floor
    double stop_rel = 1e-13;            ///< relative iterate-change stop
    double residual_tol = 1e-9;         ///< equation residual acceptance
    std::size_t max_iter = 100000;      ///< fixed-point iteration cap
    std::size_t omega_grid = 1024;      ///< angle samples for the numerical radius
    double omega_refine_tol = 1e-10;    ///< angle refinement tolerance
    std::size_t gelfand_squarings = 40; ///< cap on squarings for the spectral radius

    /// Throws Error(invalid_argument) unless every field is in range.
    void validate() const;

    [[nodiscard]] static Tolerances strict();
    /// "default" or "strict"; anything else is an invalid_argument error.
    [[nodiscard]] static Tolerances from_profile(std::string_view name);
};

/// Dense row-major complex matrix. All entries are finite.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    [[nodiscard]] static CMatrix identity(std::size_t n);
    [[nodiscard]] static CMatrix zeros(std::size_t rows, std::size_t cols);
    [[nodiscard]] static CMatrix diagonal(std::span<const Complex> values);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<const Complex> entries() const noexcept { return data_; }

    [[nodiscard]] CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                                std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const CMatrix& src);

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(Complex s) noexcept;

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

[[nodiscard]] CMatrix operator+(CMatrix a, const CMatrix& b);
[[nodiscard]] CMatrix operator-(CMatrix a, const CMatrix& b);
[[nodiscard]] CMatrix operator-(CMatrix a);
[[nodiscard]] CMatrix operator*(CMatrix a, Complex s);
[[nodiscard]] CMatrix operator*(Complex s, CMatrix a);
[[nodiscard]] CMatrix operator*(const CMatrix& a, const CMatrix& b);

[[nodiscard]] CMatrix mat_mul(const CMatrix& a, const CMatrix& b);
[[nodiscard]] CMatrix conj(const CMatrix& a);
[[nodiscard]] CMatrix adjoint(const CMatrix& a);
[[nodiscard]] CMatrix transpose(const CMatrix& a);
/// (a + a*) / 2
[[nodiscard]] CMatrix hermitian_part(const CMatrix& a);

[[nodiscard]] double frobenius_norm(const CMatrix& a) noexcept;
[[nodiscard]] double max_abs(const CMatrix& a) noexcept;
/// Largest entry magnitude of the imaginary parts.
[[nodiscard]] double max_imag(const CMatrix& a) noexcept;
/// True when ‖h − h*‖_F ≤ rel_tol·‖h‖_F.
[[nodiscard]] bool is_hermitian(const CMatrix& h, double rel_tol = 1e-10) noexcept;

/// Inverse by Gaussian elimination with partial pivoting. Throws
/// Error(singular) when a pivot falls below pd_floor times the largest entry.
[[nodiscard]] CMatrix mat_inverse(const CMatrix& a, const Tolerances& tol = {});
/// Solves a·x = b with the same elimination and singularity rule.
[[nodiscard]] CMatrix solve(const CMatrix& a, const CMatrix& b, const Tolerances& tol = {});

struct HermitianEigen {
    std::vector<double> values;  ///< ascending
    CMatrix vectors;             ///< unitary, column j pairs with values[j]
};

/// Cyclic complex Jacobi. Throws Error(not_hermitian) when
/// ‖h − h*‖_F > 1e-10·‖h‖_F.
[[nodiscard]] HermitianEigen hermitian_eigen(const CMatrix& h);

[[nodiscard]] double min_eigenvalue(const CMatrix& h);
[[nodiscard]] double max_eigenvalue(const CMatrix& h);
/// 2-norm of a Hermitian matrix, max |λ|.
[[nodiscard]] double hermitian_norm_2(const CMatrix& h);

/// Spectral norm √λ_max(a*a).
[[nodiscard]] double op_norm_2(const CMatrix& a);
/// σ_min via 1 / ‖a⁻¹‖; zero when a is singular to tolerance.
[[nodiscard]] double smallest_singular_value(const CMatrix& a, const Tolerances& tol = {});

/// Gelfand estimate lim ‖aᴺ‖^{1/N} by repeated normalized squaring.
[[nodiscard]] double spectral_radius(const CMatrix& a, const Tolerances& tol = {});

/// ω(a) = max_θ λ_max(Re(e^{jθ}a)). Angle grid followed by ternary
/// refinement around the best sample; the estimate is biased low by at most
/// ‖a‖·Δθ before refinement.
[[nodiscard]] double numerical_radius(const CMatrix& a, const Tolerances& tol = {});

/// Principal square root of a Hermitian PSD matrix. Eigenvalues down to
/// −1e-10·‖h‖ are clamped to zero, anything lower is Error(not_psd).
[[nodiscard]] CMatrix psd_sqrt(const CMatrix& h);
/// Inverse principal square root of a Hermitian PD matrix.
[[nodiscard]] CMatrix pd_inverse_sqrt(const CMatrix& h, const Tolerances& tol = {});

/// A boolean decision together with the signed quantity it was derived from.
struct Certified {
    bool holds = false;
    double margin = 0.0;
};

/// Lower-triangular factor of h = L·L*. When ok is false, lower holds the
/// partial factor and failed_at the offending pivot index.
struct Cholesky {
    bool ok = false;
    CMatrix lower;
    double min_pivot_ratio = 0.0;  ///< smallest pivot divided by trace/n
    std::size_t failed_at = 0;
};

/// Complex Cholesky; a pivot is accepted when it exceeds pd_floor·(trace/n).
[[nodiscard]] Cholesky cholesky(const CMatrix& h, const Tolerances& tol = {});
/// Solves L·z = b for lower-triangular L.
[[nodiscard]] CMatrix forward_substitute(const CMatrix& lower, const CMatrix& b);

/// Positive definiteness by Cholesky; margin is the smallest pivot ratio.
/// Throws Error(not_hermitian) for non-Hermitian input.
[[nodiscard]] Certified is_positive_definite(const CMatrix& h, const Tolerances& tol = {});

}  // namespace conric
