#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace casimir {

/// Convergence targets shared by all quadrature and summation routines.
/// A result converges once its error estimate drops below
/// max(rel * |value|, abs).
struct Tolerance {
    double rel = 1e-9;
    double abs = 0.0;
    std::int64_t max_evals = 2'000'000;
};

inline void validate(const Tolerance& tol) {
    if (!(tol.rel >= 1e-14))
        throw std::invalid_argument("Tolerance.rel must be >= 1e-14");
    if (!(tol.abs >= 0.0))
        throw std::invalid_argument("Tolerance.abs must be >= 0");
    if (tol.max_evals < 64)
        throw std::invalid_argument("Tolerance.max_evals must be >= 64");
}

inline double target_of(const Tolerance& tol, double value) {
    return std::fmax(tol.rel * std::fabs(value), tol.abs);
}

/// Value with an honest error estimate and work counter. `converged`
/// is only set when error_estimate <= max(rel*|value|, abs).
struct NumericResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = false;
};

}  // namespace casimir
