#pragma once

#include <complex>
#include <iosfwd>
#include <variant>
#include <vector>

#include "casimir/numeric.hpp"

namespace casimir {

struct VacuumModel {};

/// Lossless plasma: eps(omega) = 1 - omega_p^2/omega^2.
struct PlasmaModel {
    double omega_p;  // rad/s
};

/// Drude metal: eps(omega) = 1 - omega_p^2/(omega (omega + i gamma_d)).
/// gamma_d must be strictly positive; the gamma_d -> 0 limit is PlasmaModel.
struct DrudeModel {
    double omega_p;  // rad/s
    double gamma_d;  // rad/s
};

/// Measured Im eps on a strictly increasing omega grid; eps(i xi) follows
/// from the dispersion transform. Interpolation is linear in log omega and
/// Im eps is taken as zero outside the sampled range.
struct TabulatedModel {
    std::vector<double> omega;     // rad/s, strictly increasing
    std::vector<double> eps_imag;  // dimensionless, >= 0
};

using DielectricModel =
    std::variant<VacuumModel, PlasmaModel, DrudeModel, TabulatedModel>;

void validate(const DielectricModel& model);

/// eps(i xi) on the imaginary frequency axis; real and >= 1.
/// Drude/Plasma require xi > 0 (their xi = 0 limits live in the reflection
/// amplitudes); Vacuum/Tabulated accept xi >= 0.
double epsilon_imaginary(const DielectricModel& model, double xi);

/// eps(omega + i0) on the real frequency axis (Vacuum/Plasma/Drude only).
std::complex<double> epsilon_real(const DielectricModel& model, double omega);

/// eps at a complex frequency in the closed upper half plane (analytic
/// continuation of the Vacuum/Plasma/Drude forms).
std::complex<double> epsilon_complex(const DielectricModel& model,
                                     std::complex<double> omega);

/// Parse a tabulated-data stream: '#' comments, rows "omega eps_imag" with
/// space/tab/comma separators. Throws FormatError, ValidityError or
/// InsufficientDataError.
DielectricModel ingest_tabulated(std::istream& raw);

}  // namespace casimir
