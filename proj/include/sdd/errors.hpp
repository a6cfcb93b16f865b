#pragma once

#include <stdexcept>
#include <string>

namespace sdd {

/// Requested evaluation time lies outside the stored history window.
/// Raised instead of extrapolating.
struct OutOfWindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The integrated state became non-finite. Carries the first offending time.
struct DivergenceError : std::runtime_error {
    double t_fail;
    DivergenceError(const std::string& msg, double t)
        : std::runtime_error(msg), t_fail(t) {}
};

/// An iterative scheme (Picard) exceeded its iteration cap.
struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested quantity is not defined for this configuration
/// (e.g. a uniform reaction bound for an unbounded birth function).
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sdd
