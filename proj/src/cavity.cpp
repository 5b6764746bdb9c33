#include "casimir/cavity.hpp"

#include <cmath>

#include "casimir/errors.hpp"

namespace casimir {

void validate(const CavityConfig& cavity) {
    validate(cavity.mirror1);
    validate(cavity.mirror2);
    if (!(cavity.separation_L > 0.0))
        throw std::invalid_argument("cavity: separation_L must be > 0");
}

double kappa_imaginary(double k, double xi, const Constants& pc) {
    if (!(k >= 0.0) || !(xi >= 0.0))
        throw std::domain_error("kappa_imaginary: k and xi must be >= 0");
    return std::hypot(k, xi / pc.c_light);
}

std::complex<double> kz_real(double k, double omega, const Constants& pc) {
    if (!(k >= 0.0) || !(omega >= 0.0))
        throw std::domain_error("kz_real: k and omega must be >= 0");
    const double w = omega / pc.c_light;
    if (w >= k) return {std::sqrt((w - k) * (w + k)), 0.0};
    return {0.0, std::sqrt((k - w) * (k + w))};
}

std::complex<double> kappa_complex(double k, std::complex<double> omega,
                                   const Constants& pc) {
    const std::complex<double> w = omega / pc.c_light;
    std::complex<double> s = std::sqrt(std::complex<double>(k * k) - w * w);
    return (s.real() < 0.0) ? -s : s;
}

namespace {

// 1 - R e^{-x} without cancellation: (1 - R) - R expm1(-x).
double one_minus_loop(double r1r2, double two_kappa_L) {
    return (1.0 - r1r2) - r1r2 * std::expm1(-two_kappa_L);
}

}  // namespace

double open_loop(const CavityConfig& cavity, const TransverseMode& mode, double xi,
                 const Constants& pc) {
    const double r1 = reflection_imaginary(cavity.mirror1, mode.p, mode.k, xi, pc);
    const double r2 = reflection_imaginary(cavity.mirror2, mode.p, mode.k, xi, pc);
    const double kappa = kappa_imaginary(mode.k, xi, pc);
    return r1 * r2 * std::exp(-2.0 * kappa * cavity.separation_L);
}

double closed_loop(const CavityConfig& cavity, const TransverseMode& mode, double xi,
                   const Constants& pc) {
    const double r1 = reflection_imaginary(cavity.mirror1, mode.p, mode.k, xi, pc);
    const double r2 = reflection_imaginary(cavity.mirror2, mode.p, mode.k, xi, pc);
    const double kappa = kappa_imaginary(mode.k, xi, pc);
    const double x = 2.0 * kappa * cavity.separation_L;
    const double rho = r1 * r2 * std::exp(-x);
    return rho / one_minus_loop(r1 * r2, x);
}

double phi(const CavityConfig& cavity, const TransverseMode& mode, double xi,
           const Constants& pc) {
    return kappa_imaginary(mode.k, xi, pc) * closed_loop(cavity, mode, xi, pc);
}

double airy(const CavityConfig& cavity, const TransverseMode& mode, double omega,
            const Constants& pc) {
    if (!supports_real_axis(cavity.mirror1) || !supports_real_axis(cavity.mirror2))
        throw UnsupportedModelError("airy: mirror lacks real-axis evaluation");
    const std::complex<double> r1 =
        reflection_real(cavity.mirror1, mode.p, mode.k, omega, pc);
    const std::complex<double> r2 =
        reflection_real(cavity.mirror2, mode.p, mode.k, omega, pc);
    const std::complex<double> kz = kz_real(mode.k, omega, pc);
    const std::complex<double> rho =
        r1 * r2 * std::exp(std::complex<double>(0.0, 2.0 * cavity.separation_L) * kz);
    const double num = 1.0 - std::norm(rho);
    const double den = std::norm(1.0 - rho);
    return num / den;
}

std::complex<double> open_loop_complex(const CavityConfig& cavity,
                                       const TransverseMode& mode,
                                       std::complex<double> omega,
                                       const Constants& pc) {
    const std::complex<double> r1 =
        reflection_complex(cavity.mirror1, mode.p, mode.k, omega, pc);
    const std::complex<double> r2 =
        reflection_complex(cavity.mirror2, mode.p, mode.k, omega, pc);
    const std::complex<double> kappa = kappa_complex(mode.k, omega, pc);
    return r1 * r2 * std::exp(-2.0 * cavity.separation_L * kappa);
}

std::complex<double> closed_loop_complex(const CavityConfig& cavity,
                                         const TransverseMode& mode,
                                         std::complex<double> omega,
                                         const Constants& pc) {
    const std::complex<double> rho = open_loop_complex(cavity, mode, omega, pc);
    return rho / (1.0 - rho);
}

std::complex<double> phi_complex(const CavityConfig& cavity, const TransverseMode& mode,
                                 std::complex<double> omega, const Constants& pc) {
    return kappa_complex(mode.k, omega, pc) *
           closed_loop_complex(cavity, mode, omega, pc);
}

}  // namespace casimir
