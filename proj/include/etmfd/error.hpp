#pragma once

#include <stdexcept>
#include <string>

namespace etmfd {

/// Invalid input: bad dimensions, out-of-regime media, malformed configs.
/// The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure while computing: singular matrices, blow-up, non-convergence.
/// The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cold-plasma medium outside the underdamped branch (omega_i^2 >= 4 omega_p^2).
class RegimeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Raised by the time stepper when the fields stop being finite.
class InstabilityError : public NumericalError {
public:
    InstabilityError(const std::string& what, long step, double time)
        : NumericalError(what), step_(step), time_(time) {}
    long step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    long step_;
    double time_;
};

}  // namespace etmfd
