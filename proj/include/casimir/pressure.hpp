#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "casimir/cavity.hpp"
#include "casimir/numeric.hpp"

namespace casimir {

/// Thermal equilibrium state; omega_T = 2 pi k_B T / hbar.
struct ThermalState {
    double temperature_T = 0.0;  // kelvin, >= 0
};

void validate(const ThermalState& state);
double thermal_frequency(const ThermalState& state, const Constants& pc = codata());

/// coth(pi omega / omega_T); identically 1 at T = 0.
double thermal_weight(double omega, const ThermalState& state,
                      const Constants& pc = codata());

enum class EvaluatorId {
    matsubara,
    exp_series,
    zero_temperature,
    real_axis,
    closed_form,
};

const char* to_string(EvaluatorId id);

struct PressureDiagnostics {
    std::optional<double> te_m0_Pa;
    std::optional<double> poisson_residual_Pa;
    std::optional<double> propagating_Pa;  // real-axis sector split
    std::optional<double> evanescent_Pa;
};

/// One evaluator's answer. Pressure is per unit area, positive = attractive.
/// Breakdown entries carry the primed weight already applied (the index-0
/// entry holds half the raw term), so they sum to `pressure` exactly; an
/// estimated series tail, when added, appears as a final synthetic entry.
struct PressureReport {
    EvaluatorId evaluator = EvaluatorId::closed_form;
    double pressure = 0.0;  // N/m^2
    NumericResult result;
    std::vector<std::pair<std::int64_t, double>> breakdown;
    PressureDiagnostics diagnostics;
};

/// Lifshitz representation: primed Matsubara sum over xi_m = m omega_T.
/// Requires T > 0.
PressureReport pressure_matsubara(const CavityConfig& cavity, const ThermalState& state,
                                  const Tolerance& tol, const Constants& pc = codata());

/// Exponential-series representation: primed sum over cosine transforms of
/// phi at x_n = 2 pi n/omega_T. Requires T > 0. The n = 0 entry is the
/// vacuum contribution (equals the zero-temperature pressure).
PressureReport pressure_exp_series(const CavityConfig& cavity, const ThermalState& state,
                                   const Tolerance& tol, const Constants& pc = codata());

/// Vacuum-only pressure P = (hbar/(2 pi^2)) sum_p int dxi int k phi dk.
PressureReport pressure_zero_temperature(const CavityConfig& cavity, const Tolerance& tol,
                                         const Constants& pc = codata());

/// hbar c pi^2/(240 L^4): the ideal-mirror vacuum value per unit area.
double pressure_perfect_closed_form(double L, const Constants& pc = codata());

/// Damped real-frequency evaluation at Omega = omega + i eta (diagnostic).
/// Reports the propagating/evanescent split in the diagnostics.
PressureReport pressure_real_axis(const CavityConfig& cavity, const ThermalState& state,
                                  double eta, const Tolerance& tol,
                                  const Constants& pc = codata());

/// Two-point Richardson extrapolation 2 P(eta/2) - P(eta) toward eta -> 0.
PressureReport pressure_real_axis_richardson(const CavityConfig& cavity,
                                             const ThermalState& state, double eta,
                                             const Tolerance& tol,
                                             const Constants& pc = codata());

/// The contested term: primed-halved TE m = 0 Matsubara contribution,
/// (hbar omega_T/2 pi) (1/2 pi) int k phi(TE, k, 0) dk. Requires T > 0.
double te_m0_term(const CavityConfig& cavity, const ThermalState& state,
                  const Tolerance& tol = {}, const Constants& pc = codata());

/// Measured difference pressure_exp_series - pressure_matsubara with a
/// combined error estimate. A measurement, not an assertion: no claim is
/// made about its true value for dissipative mirrors.
NumericResult poisson_residual(const CavityConfig& cavity, const ThermalState& state,
                               const Tolerance& tol, const Constants& pc = codata());

}  // namespace casimir
