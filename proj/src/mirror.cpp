#include "casimir/mirror.hpp"

#include <cmath>

#include "casimir/errors.hpp"

namespace casimir {

void validate(const MirrorSpec& mirror) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, BulkMirror>) {
                validate(m.dielectric);
            } else if constexpr (std::is_same_v<M, PrescribedMirror>) {
                if (!(m.r0 > 0.0 && m.r0 <= 1.0))
                    throw std::invalid_argument("prescribed: r0 must lie in (0, 1]");
                if (!(m.omega_c > 0.0))
                    throw std::invalid_argument("prescribed: omega_c must be > 0");
            }
        },
        mirror);
}

bool supports_real_axis(const MirrorSpec& mirror) {
    if (std::holds_alternative<PerfectMirror>(mirror)) return false;
    if (const auto* b = std::get_if<BulkMirror>(&mirror))
        return !std::holds_alternative<TabulatedModel>(b->dielectric);
    return true;
}

double medium_wavevector_imaginary(const DielectricModel& model, double k,
                                   double xi, const Constants& pc) {
    if (!(k >= 0.0)) throw std::domain_error("medium_wavevector_imaginary: k < 0");
    const double eps = epsilon_imaginary(model, xi);
    const double q = xi / pc.c_light;
    return std::sqrt(k * k + eps * q * q);
}

namespace {

// Analytic xi = 0 limits of the bulk Fresnel amplitudes. ep*xi^2 -> 0 for
// Drude while eps itself diverges, which is the whole TE m=0 story.
double bulk_reflection_static(const DielectricModel& model, Polarization p,
                              double k, const Constants& pc) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, VacuumModel>) {
                return 0.0;
            } else if constexpr (std::is_same_v<M, PlasmaModel>) {
                if (p == Polarization::TM) return -1.0;
                const double K0 = std::hypot(k, m.omega_p / pc.c_light);
                return (k - K0) / (k + K0);
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                return (p == Polarization::TM) ? -1.0 : 0.0;
            } else {
                // eps(i0) is finite for tabulated data: K -> k.
                if (p == Polarization::TE) return 0.0;
                const double eps0 = epsilon_imaginary(DielectricModel{m}, 0.0);
                return (1.0 - eps0) / (1.0 + eps0);
            }
        },
        model);
}

}  // namespace

double reflection_imaginary(const MirrorSpec& mirror, Polarization p, double k,
                            double xi, const Constants& pc) {
    if (!(k >= 0.0) || !(xi >= 0.0))
        throw std::domain_error("reflection_imaginary: k and xi must be >= 0");
    if (k == 0.0 && xi == 0.0)
        throw std::domain_error("reflection_imaginary: (k, xi) = (0, 0) excluded");

    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PerfectMirror>) {
                return -1.0;
            } else if constexpr (std::is_same_v<M, PrescribedMirror>) {
                const double d = 1.0 + xi / m.omega_c;
                return -m.r0 / (d * d);
            } else {
                if (xi == 0.0) return bulk_reflection_static(m.dielectric, p, k, pc);
                const double kappa = std::hypot(k, xi / pc.c_light);
                const double eps = epsilon_imaginary(m.dielectric, xi);
                const double q = xi / pc.c_light;
                const double K = std::sqrt(k * k + eps * q * q);
                if (p == Polarization::TE) return (kappa - K) / (kappa + K);
                return (K - eps * kappa) / (K + eps * kappa);
            }
        },
        mirror);
}

std::complex<double> reflection_complex(const MirrorSpec& mirror, Polarization p,
                                        double k, std::complex<double> omega,
                                        const Constants& pc) {
    if (!(k >= 0.0)) throw std::domain_error("reflection_complex: k < 0");

    return std::visit(
        [&](const auto& m) -> std::complex<double> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PerfectMirror>) {
                throw UnsupportedModelError(
                    "perfect mirror has no real-axis amplitude (not transparent "
                    "at high frequency)");
            } else if constexpr (std::is_same_v<M, PrescribedMirror>) {
                const std::complex<double> d =
                    1.0 - std::complex<double>(0.0, 1.0) * omega / m.omega_c;
                return -m.r0 / (d * d);
            } else {
                const std::complex<double> eps = epsilon_complex(m.dielectric, omega);
                const std::complex<double> w = omega / pc.c_light;
                auto root = [](std::complex<double> z) {
                    std::complex<double> s = std::sqrt(z);
                    return (s.real() < 0.0) ? -s : s;
                };
                const std::complex<double> kappa = root(k * k - w * w);
                const std::complex<double> K = root(k * k - eps * w * w);
                if (p == Polarization::TE) return (kappa - K) / (kappa + K);
                return (K - eps * kappa) / (K + eps * kappa);
            }
        },
        mirror);
}

std::complex<double> reflection_real(const MirrorSpec& mirror, Polarization p,
                                     double k, double omega, const Constants& pc) {
    if (!(omega > 0.0)) throw std::domain_error("reflection_real: omega must be > 0");
    if (!supports_real_axis(mirror))
        throw UnsupportedModelError("mirror model lacks real-axis evaluation");
    return reflection_complex(mirror, p, k, {omega, 0.0}, pc);
}

}  // namespace casimir
