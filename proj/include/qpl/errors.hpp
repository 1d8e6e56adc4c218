#pragma once

#include <stdexcept>
#include <string>

namespace qpl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside the domain where the formula is defined (e.g. q ∉ (0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An enumeration or exact-arithmetic limit would be exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Minima/maxima fail strict interlacing.
class InterlacingError : public Error {
public:
    using Error::Error;
};

/// Evaluation point too close to a pole of an R-function.
class PoleError : public Error {
public:
    using Error::Error;
};

/// A moment would overflow double precision.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Linear system is singular or numerically rank deficient.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Root finding could not bracket or converge.
class NoRootError : public Error {
public:
    using Error::Error;
};

/// ODE integration error estimate above tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Finite-difference step sizes are degenerate.
class StepError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An output file could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qpl
