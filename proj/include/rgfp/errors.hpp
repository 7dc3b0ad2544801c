#pragma once

#include <stdexcept>
#include <string>

namespace rgfp {

// Invalid parameters or configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Any failure of a numerical procedure. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, double best, double error)
        : NumericalError(what), best_estimate(best), error_estimate(error) {}
    double best_estimate;
    double error_estimate;
};

class FitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Truncated scale sum whose boundary terms are not negligible.
class WindowError : public NumericalError {
public:
    WindowError(const std::string& what, double mass)
        : NumericalError(what), boundary_mass(mass) {}
    double boundary_mass;
};

}  // namespace rgfp
