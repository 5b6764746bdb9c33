#include "casimir/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

void validate(const DielectricModel& model) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, PlasmaModel>) {
                if (!(m.omega_p > 0.0))
                    throw std::invalid_argument("plasma: omega_p must be > 0");
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                if (!(m.omega_p > 0.0))
                    throw std::invalid_argument("drude: omega_p must be > 0");
                if (!(m.gamma_d > 0.0))
                    throw std::invalid_argument(
                        "drude: gamma_d must be > 0 (use plasma for gamma_d = 0)");
            } else if constexpr (std::is_same_v<M, TabulatedModel>) {
                if (m.omega.size() != m.eps_imag.size())
                    throw std::invalid_argument("tabulated: ragged sample arrays");
                if (m.omega.size() < 4)
                    throw InsufficientDataError("tabulated: fewer than 4 samples");
                for (std::size_t i = 0; i < m.omega.size(); ++i) {
                    if (!(m.omega[i] > 0.0))
                        throw ValidityError("tabulated: omega must be > 0");
                    if (i > 0 && !(m.omega[i] > m.omega[i - 1]))
                        throw FormatError("tabulated: omega not strictly increasing");
                    if (!(m.eps_imag[i] >= 0.0))
                        throw ValidityError("tabulated: negative Im eps");
                }
            }
        },
        model);
}

namespace {

// Linear interpolation of Im eps in log omega; zero outside the support.
double interp_eps_imag(const TabulatedModel& m, double w) {
    if (w <= m.omega.front() || w >= m.omega.back()) {
        if (w == m.omega.front()) return m.eps_imag.front();
        if (w == m.omega.back()) return m.eps_imag.back();
        return 0.0;
    }
    const auto it = std::upper_bound(m.omega.begin(), m.omega.end(), w);
    const std::size_t i = static_cast<std::size_t>(it - m.omega.begin());
    const double lw = std::log(w);
    const double l0 = std::log(m.omega[i - 1]);
    const double l1 = std::log(m.omega[i]);
    const double t = (lw - l0) / (l1 - l0);
    return m.eps_imag[i - 1] + t * (m.eps_imag[i] - m.eps_imag[i - 1]);
}

// Dispersion transform eps(i xi) = 1 + (2/pi) int w eps''(w)/(w^2+xi^2) dw,
// run through the semi-infinite engine with the sample knots as break hints.
double tabulated_epsilon_imaginary(const TabulatedModel& m, double xi) {
    const double w0 = m.omega.front();
    const double w1 = m.omega.back();
    auto f = [&m, xi](double w) {
        if (w < m.omega.front() || w > m.omega.back()) return 0.0;
        return w * interp_eps_imag(m, w) / (w * w + xi * xi);
    };
    const double scale = (xi > w0) ? xi : std::sqrt(w0 * w1);
    Tolerance tol{1e-11, 0.0, 400'000};
    std::vector<double> breaks(m.omega.begin(), m.omega.end());
    const auto r = quad::integrate_half_line(f, tol, scale, breaks);
    return 1.0 + (2.0 / M_PI) * r.value;
}

}  // namespace

double epsilon_imaginary(const DielectricModel& model, double xi) {
    return std::visit(
        [xi](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, VacuumModel>) {
                if (!(xi >= 0.0)) throw std::domain_error("epsilon_imaginary: xi < 0");
                return 1.0;
            } else if constexpr (std::is_same_v<M, PlasmaModel>) {
                if (!(xi > 0.0))
                    throw std::domain_error("epsilon_imaginary: plasma needs xi > 0");
                const double q = m.omega_p / xi;
                return 1.0 + q * q;
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                if (!(xi > 0.0))
                    throw std::domain_error("epsilon_imaginary: drude needs xi > 0");
                return 1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma_d));
            } else {
                if (!(xi >= 0.0)) throw std::domain_error("epsilon_imaginary: xi < 0");
                return tabulated_epsilon_imaginary(m, xi);
            }
        },
        model);
}

std::complex<double> epsilon_complex(const DielectricModel& model,
                                     std::complex<double> omega) {
    return std::visit(
        [omega](const auto& m) -> std::complex<double> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, VacuumModel>) {
                return {1.0, 0.0};
            } else if constexpr (std::is_same_v<M, PlasmaModel>) {
                return 1.0 - m.omega_p * m.omega_p / (omega * omega);
            } else if constexpr (std::is_same_v<M, DrudeModel>) {
                return 1.0 - m.omega_p * m.omega_p /
                                 (omega * (omega + std::complex<double>(0.0, m.gamma_d)));
            } else {
                throw UnsupportedModelError(
                    "tabulated dielectric has no real/complex-axis evaluation");
            }
        },
        model);
}

std::complex<double> epsilon_real(const DielectricModel& model, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("epsilon_real: omega must be > 0");
    return epsilon_complex(model, {omega, 0.0});
}

DielectricModel ingest_tabulated(std::istream& raw) {
    TabulatedModel m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(raw, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& ch : line)
            if (ch == ',' || ch == '\t') ch = ' ';
        std::istringstream ss(line);
        double w, e;
        if (!(ss >> w)) continue;  // blank / comment-only line
        if (!(ss >> e))
            throw FormatError("tabulated line " + std::to_string(lineno) +
                              ": expected two columns");
        double extra;
        if (ss >> extra)
            throw FormatError("tabulated line " + std::to_string(lineno) +
                              ": more than two columns");
        if (!(w > 0.0))
            throw ValidityError("tabulated line " + std::to_string(lineno) +
                                ": omega must be > 0");
        if (!(e >= 0.0))
            throw ValidityError("tabulated line " + std::to_string(lineno) +
                                ": negative Im eps");
        if (!m.omega.empty() && !(w > m.omega.back()))
            throw FormatError("tabulated line " + std::to_string(lineno) +
                              ": omega not strictly increasing");
        m.omega.push_back(w);
        m.eps_imag.push_back(e);
    }
    if (m.omega.size() < 4)
        throw InsufficientDataError("tabulated data: fewer than 4 rows");
    return m;
}

}  // namespace casimir
