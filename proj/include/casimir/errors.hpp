#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

// Adaptive integration or Matsubara summation ran out of budget before
// reaching the requested tolerance. Carries the partial result so callers
// can decide whether it is still usable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial, double err)
        : std::runtime_error(what), partial_value(partial), error_estimate(err) {}
    double partial_value;
    double error_estimate;
};

// A cavity denominator collapsed to zero at working precision. Signals an
// unphysical parameter combination rather than a tolerance problem.
class NumericalDegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad run configuration or material file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The spring cannot stabilize the slab against the cavity force: the centre
// position is not a stable equilibrium of the combined system.
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace casimir
