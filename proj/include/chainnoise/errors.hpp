#pragma once

#include <stdexcept>
#include <string>

namespace chainnoise {

// Bad input: malformed config files, schema violations, unusable data files.
// The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Computation failed: inconsistent calibration inputs, non-convergence,
// out-of-domain values produced at run time. The CLI maps this to exit code 2.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace chainnoise
