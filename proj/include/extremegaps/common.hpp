#pragma once

#include <stdexcept>
#include <string>

namespace extremegaps {

// invalid arguments / config values
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// numeric failures: solver non-convergence, drift, unitarity violations
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

}  // namespace extremegaps
