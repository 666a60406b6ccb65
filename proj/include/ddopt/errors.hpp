#pragma once

#include <stdexcept>
#include <string>

namespace ddopt {

/// Malformed or non-finite input data.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

/// A structural assumption of the method is violated (e.g. rank deficiency).
struct AssumptionViolation : std::runtime_error {
    explicit AssumptionViolation(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative routine exhausted its budget before reaching tolerance.
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& msg, double best_residual)
        : std::runtime_error(msg), best_residual(best_residual) {}
    double best_residual;
};

struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

/// The premise of a bound or certificate does not hold for the given instance.
struct BoundInapplicable : std::runtime_error {
    explicit BoundInapplicable(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ddopt
