#pragma once

#include <stdexcept>

namespace casimir {

/// Physical constants in SI units. Defaults are the 2018 CODATA values;
/// they are only ever overridden through explicit configuration.
struct Constants {
    double hbar = 1.054571817e-34;  // J s
    double c_light = 299792458.0;   // m/s
    double k_B = 1.380649e-23;      // J/K
};

inline const Constants& codata() {
    static const Constants k{};
    return k;
}

inline void validate(const Constants& pc) {
    if (!(pc.hbar > 0.0 && pc.c_light > 0.0 && pc.k_B > 0.0))
        throw std::invalid_argument("constants must all be positive");
}

}  // namespace casimir
