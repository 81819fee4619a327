#pragma once

#include <stdexcept>
#include <string>

namespace fentropy {

// Base class of every exception thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A structural invariant of an input is violated (hermiticity, unit trace,
// positivity, simplex membership, malformed file contents).
struct ValidationError : Error {
    using Error::Error;
};

// An iterative routine failed to converge, or two redundant computations of
// the same quantity disagree beyond tolerance.
struct NumericalError : Error {
    using Error::Error;
};

// An argument lies outside the domain of the function being evaluated.
struct DomainError : Error {
    using Error::Error;
};

// A scalar parameter is outside its supported range.
struct ParameterError : Error {
    using Error::Error;
};

// Operands have incompatible or unsupported dimensions.
struct DimensionError : Error {
    using Error::Error;
};

// A structured operation was invoked on inputs that do not satisfy its
// stated precondition (sign pattern, ordering).
struct ConditionError : Error {
    using Error::Error;
};

}  // namespace fentropy
