#pragma once

#include <stdexcept>

namespace qkdbound {

// Input violates a documented precondition.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Observed statistics cannot be produced by any quantum state with the
// declared trusted devices.
struct InconsistentStatistics : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical routine failed to reach its accuracy target.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size outside the supported regime.
struct UnsupportedDimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qkdbound
