#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace heatlab {

// Error taxonomy used across the library. Configuration and parameter
// problems map to CLI exit code 2, numeric failures to exit code 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace heatlab
