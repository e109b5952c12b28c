#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace atomphase {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Thrown when an iterative numerical scheme fails to reach its target
/// accuracy (quadrature refinement, step-size collapse, fixed-point stall).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed or semantically invalid configuration input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on file I/O failures; carries the offending path in the message.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace atomphase
