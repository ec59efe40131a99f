#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qvhedge {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Invalid user input: parameters, configs, payload documents.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or failed to converge.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Transform argument at which u+(s) == u-(s); immunization weights are undefined.
class DegenerateTransformError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

std::string to_string(Complex z);

}  // namespace qvhedge
