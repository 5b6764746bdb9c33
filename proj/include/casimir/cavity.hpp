#pragma once

#include <complex>

#include "casimir/mirror.hpp"

namespace casimir {

/// Two mirrors facing each other across vacuum; the only geometric input.
struct CavityConfig {
    MirrorSpec mirror1;
    MirrorSpec mirror2;
    double separation_L;  // meters, > 0
};

void validate(const CavityConfig& cavity);

/// One transverse mode: polarization and |k| (azimuthal symmetry).
struct TransverseMode {
    Polarization p;
    double k;  // rad/m, >= 0
};

/// kappa(k, i xi) = sqrt(k^2 + xi^2/c^2), the vacuum longitudinal
/// wavevector on the imaginary axis.
double kappa_imaginary(double k, double xi, const Constants& pc = codata());

/// k_z at real omega: real sqrt(omega^2/c^2 - k^2) for propagating modes,
/// i*sqrt(k^2 - omega^2/c^2) in the evanescent sector.
std::complex<double> kz_real(double k, double omega, const Constants& pc = codata());

/// kappa at complex Omega (Im Omega >= 0), branch with Re kappa > 0.
std::complex<double> kappa_complex(double k, std::complex<double> omega,
                                   const Constants& pc = codata());

/// Open-loop function rho = r1 r2 e^{-2 kappa L} on the imaginary axis.
double open_loop(const CavityConfig& cavity, const TransverseMode& mode,
                 double xi, const Constants& pc = codata());

/// Closed-loop function f = rho/(1 - rho).
double closed_loop(const CavityConfig& cavity, const TransverseMode& mode,
                   double xi, const Constants& pc = codata());

/// Airy function g = (1 - |rho|^2)/|1 - rho|^2 at real omega (requires
/// real-axis-capable mirrors).
double airy(const CavityConfig& cavity, const TransverseMode& mode, double omega,
            const Constants& pc = codata());

/// phi = kappa * f on the imaginary axis, with the hard-coded xi = 0
/// reflection limits. Dimension of kappa (rad/m).
double phi(const CavityConfig& cavity, const TransverseMode& mode, double xi,
           const Constants& pc = codata());

/// Loop functions continued to complex Omega (Im Omega >= 0); used by the
/// damped real-axis evaluator.
std::complex<double> open_loop_complex(const CavityConfig& cavity,
                                       const TransverseMode& mode,
                                       std::complex<double> omega,
                                       const Constants& pc = codata());
std::complex<double> closed_loop_complex(const CavityConfig& cavity,
                                         const TransverseMode& mode,
                                         std::complex<double> omega,
                                         const Constants& pc = codata());
std::complex<double> phi_complex(const CavityConfig& cavity,
                                 const TransverseMode& mode,
                                 std::complex<double> omega,
                                 const Constants& pc = codata());

}  // namespace casimir
