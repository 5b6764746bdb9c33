#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// A mirror/dielectric model cannot be evaluated on the requested axis
/// (e.g. perfect mirrors on the real axis, tabulated data at real omega).
struct UnsupportedModelError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed input stream (wrong column count, non-monotone grid, ...).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a physical validity constraint.
struct ValidityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Too few samples to define a usable model.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace casimir
