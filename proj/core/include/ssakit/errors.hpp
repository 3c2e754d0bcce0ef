#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: window length, index range, dimension mismatch.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input data violates a TimeSeries invariant (non-finite value, too short).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number of the failure.
class FormatError : public ValidationError {
public:
    FormatError(std::size_t line, const std::string& what);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Iterative solver gave up; reports how many triples did converge.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(std::size_t converged, std::size_t requested, const std::string& what);

    std::size_t converged() const noexcept { return converged_; }
    std::size_t requested() const noexcept { return requested_; }

private:
    std::size_t converged_;
    std::size_t requested_;
};

/// Operation is not defined for the current state of an object.
class StateError : public Error {
public:
    using Error::Error;
};

/// The chosen eigenvector subspace (nearly) contains the last unit vector,
/// so the forecasting recurrence does not exist.
class VerticalityError : public NumericalError {
public:
    VerticalityError(double nu2, const std::string& what);

    double nu2() const noexcept { return nu2_; }

private:
    double nu2_;
};

class BootstrapError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ssa
