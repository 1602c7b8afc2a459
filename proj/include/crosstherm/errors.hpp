// errors.hpp
//
// Exception types shared across the library.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace crosstherm {

/// Bad user input (config files, out-of-range arguments).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Config file could not be parsed or is incomplete.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A mesh policy produced more voxels than the configured budget.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach the requested tolerance.
struct SolverError : std::runtime_error {
    SolverError(const std::string& msg, std::vector<double> residuals = {})
        : std::runtime_error(msg), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

}  // namespace crosstherm
