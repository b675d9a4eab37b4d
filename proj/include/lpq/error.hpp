#pragma once

#include <stdexcept>
#include <string>

namespace lpq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input or a violated precondition (bad spec, q >= r, dimension mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An integral required by a definition does not converge (e.g. an infinite moment).
class DivergenceError : public Error {
public:
    using Error::Error;
};

/// The numerics failed without evidence of divergence: budget exhausted, NaN, singular matrix.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace lpq
