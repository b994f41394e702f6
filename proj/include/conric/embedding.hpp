#pragma once

// Real block representations of complex matrices.
//
//   heart(A)   = [[A₁, −A₂], [A₂, A₁]]     for A = A₁ + jA₂
//   lozenge(A) = [[A₂,  A₁], [A₁, −A₂]]  = E_n · heart(A)
//
// heart is a real algebra homomorphism (products, inverses, adjoints map to
// transposes) and preserves norms, spectra and definiteness.

#include <cstddef>

#include "conric/matrix.hpp"

namespace conric {

/// Relative tolerance used when deciding whether a real matrix has the
/// [[X₁, −X₂], [X₂, X₁]] block pattern.
inline constexpr double kHeartTolerance = 1e-10;

/// A 2n×2m real matrix stored in CMatrix form with every imaginary part zero.
class EmbeddedReal {
public:
    /// Imaginary parts up to 1e-14 relative are dropped; anything larger is
    /// rejected with Error(invalid_argument).
    EmbeddedReal(CMatrix inner, std::size_t n, std::size_t m);

    [[nodiscard]] const CMatrix& matrix() const noexcept { return inner_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t m() const noexcept { return m_; }

    /// max(‖X₁₁ − X₂₂‖, ‖X₁₂ + X₂₁‖) relative to the largest entry of X.
    [[nodiscard]] double heart_defect() const noexcept;
    [[nodiscard]] bool is_heart_structured(double rel_tol = kHeartTolerance) const noexcept {
        return heart_defect() <= rel_tol;
    }

private:
    CMatrix inner_;
    std::size_t n_;
    std::size_t m_;
};

[[nodiscard]] EmbeddedReal heart(const CMatrix& a);
[[nodiscard]] EmbeddedReal lozenge(const CMatrix& a);
/// E_n = [[0, I], [I, 0]].
[[nodiscard]] EmbeddedReal e_matrix(std::size_t n);
/// P_n = (√2/2)·[[jI, I], [I, jI]].
[[nodiscard]] CMatrix p_matrix(std::size_t n);

/// Block-pattern defect of an even-sized square matrix, as in
/// EmbeddedReal::heart_defect; imaginary parts count as defect.
[[nodiscard]] double heart_defect(const CMatrix& w);

/// Recovers X from W = heart(X) as (1/2)·[jI; I]* W [jI; I].
/// Throws Error(not_heart_structured) instead of projecting.
[[nodiscard]] CMatrix unheart(const EmbeddedReal& w);

/// A*A = conj(AA*) to 1e-10·max(1, ‖A‖²); margin is that bound minus the defect.
[[nodiscard]] Certified is_con_normal(const CMatrix& a);

enum class Ordering { below, at, above };

[[nodiscard]] constexpr const char* to_string(Ordering o) noexcept {
    switch (o) {
        case Ordering::below: return "below";
        case Ordering::at: return "at";
        case Ordering::above: return "above";
    }
    return "unknown";
}

struct CoSpectralClass {
    Ordering ordering = Ordering::at;
    double rho = 0.0;  ///< ρ(AĀ)
};

/// Compares the con-spectral radius with one through ρ(AĀ), using a ±1e-8
/// band for the "at" class.
[[nodiscard]] CoSpectralClass co_spectral_radius_vs_one(const CMatrix& a,
                                                        const Tolerances& tol = {});

}  // namespace conric
