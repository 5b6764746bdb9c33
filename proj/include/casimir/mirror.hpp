#pragma once

#include <complex>
#include <variant>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"

namespace casimir {

enum class Polarization { TE, TM };

struct PerfectMirror {};

/// Semi-infinite bulk medium seen through the Fresnel amplitudes.
struct BulkMirror {
    DielectricModel dielectric;
};

/// Causal low-pass amplitude r(omega) = -r0/(1 - i omega/omega_c)^2,
/// i.e. r(i xi) = -r0/(1 + xi/omega_c)^2. Usable on both axes; the
/// canonical test mirror for the real-axis cross-check.
struct PrescribedMirror {
    double r0;       // (0, 1]
    double omega_c;  // rad/s
};

using MirrorSpec = std::variant<PerfectMirror, BulkMirror, PrescribedMirror>;

void validate(const MirrorSpec& mirror);

/// True when the mirror supports evaluation at real/complex omega
/// (perfect mirrors violate high-frequency transparency; tabulated data
/// lacks a real-axis continuation here).
bool supports_real_axis(const MirrorSpec& mirror);

/// K(k, i xi) = sqrt(k^2 + eps(i xi) xi^2/c^2), the in-medium longitudinal
/// wavevector on the imaginary axis (real, >= vacuum kappa).
double medium_wavevector_imaginary(const DielectricModel& model, double k,
                                   double xi, const Constants& pc = codata());

/// Reflection amplitude on the imaginary axis; real, in [-1, 0] for bulk and
/// perfect mirrors. The xi = 0 values are the analytic limits (Drude TE -> 0,
/// plasma TE finite, TM -> -1 for both); (k, xi) = (0, 0) is a domain error.
double reflection_imaginary(const MirrorSpec& mirror, Polarization p, double k,
                            double xi, const Constants& pc = codata());

/// Reflection amplitude at real omega > 0 (boundary value from above).
std::complex<double> reflection_real(const MirrorSpec& mirror, Polarization p,
                                     double k, double omega,
                                     const Constants& pc = codata());

/// Reflection amplitude at complex Omega with Im Omega >= 0; the workhorse
/// behind reflection_real and the damped real-axis force evaluator.
std::complex<double> reflection_complex(const MirrorSpec& mirror, Polarization p,
                                        double k, std::complex<double> omega,
                                        const Constants& pc = codata());

}  // namespace casimir
