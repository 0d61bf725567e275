#pragma once

#include <stdexcept>
#include <string>

namespace ffinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation on an argument (non-unit direction, r = 0, empty grid, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Linear solve failed or did not reach the requested residual.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : Error(what), residual_(residual), iterations_(iterations) {}

    [[nodiscard]] double residual() const { return residual_; }
    [[nodiscard]] int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

/// Fixed-point iteration hit its iteration cap.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Incident/target direction set violates the design hypotheses.
class InadmissibleDirectionsError : public Error {
public:
    using Error::Error;
};

/// A target coincides with the incident direction. The forward far field of a
/// real contrast vanishes only if the scattered field vanishes outside the
/// inclusion, so such targets are refused.
class ForwardDirectionError : public InadmissibleDirectionsError {
public:
    using InadmissibleDirectionsError::InadmissibleDirectionsError;
};

}  // namespace ffinv
