#pragma once

#include <stdexcept>
#include <string>

namespace gme {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A precondition on an input was not met (non-unit vector, bad dimension, ...).
struct InvalidInput : Error {
    using Error::Error;
};

// The lowest eigenvalue is (numerically) degenerate and the caller asked for
// a unique ground state.
struct DegenerateGroundState : Error {
    using Error::Error;
};

// Threshold bisection was started on a bracket without a violation crossing.
struct BracketError : Error {
    using Error::Error;
};

// A grid search would exceed the enumeration cap.
struct EvaluationCapExceeded : Error {
    using Error::Error;
};

} // namespace gme
