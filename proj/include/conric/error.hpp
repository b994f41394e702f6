#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conric {

enum class ErrorCode {
    dimension_mismatch,
    not_square,
    non_finite,
    singular,
    not_hermitian,
    not_psd,
    not_positive_definite,
    not_heart_structured,
    q_not_pd,
    no_solution_evidence,
    max_iterations,
    internal_inconsistency,
    singular_a,
    not_a_solution,
    not_con_normal,
    norm_exceeds_half,
    inner_not_pd,
    ladder_breakdown,
    invalid_argument,
    input_error,
};

[[nodiscard]] constexpr const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::dimension_mismatch: return "dimension-mismatch";
        case ErrorCode::not_square: return "not-square";
        case ErrorCode::non_finite: return "non-finite";
        case ErrorCode::singular: return "singular";
        case ErrorCode::not_hermitian: return "not-hermitian";
        case ErrorCode::not_psd: return "not-psd";
        case ErrorCode::not_positive_definite: return "not-positive-definite";
        case ErrorCode::not_heart_structured: return "not-heart-structured";
        case ErrorCode::q_not_pd: return "q-not-pd";
        case ErrorCode::no_solution_evidence: return "no-solution-evidence";
        case ErrorCode::max_iterations: return "max-iterations";
        case ErrorCode::internal_inconsistency: return "internal-inconsistency";
        case ErrorCode::singular_a: return "singular-a";
        case ErrorCode::not_a_solution: return "not-a-solution";
        case ErrorCode::not_con_normal: return "not-con-normal";
        case ErrorCode::norm_exceeds_half: return "norm-exceeds-half";
        case ErrorCode::inner_not_pd: return "inner-matrix-not-pd";
        case ErrorCode::ladder_breakdown: return "ladder-breakdown";
        case ErrorCode::invalid_argument: return "invalid-argument";
        case ErrorCode::input_error: return "input-error";
    }
    return "unknown";
}

/// Exception type for every failure raised by the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the fixed-point iterations. Carries the partial convergence
/// history so callers can still report it.
class IterationError : public Error {
public:
    IterationError(ErrorCode code, const std::string& message, std::size_t iterations,
                   std::vector<double> trace)
        : Error(code, message), iterations_(iterations), trace_(std::move(trace)) {}

    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }
    [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::size_t iterations_;
    std::vector<double> trace_;
};

}  // namespace conric
