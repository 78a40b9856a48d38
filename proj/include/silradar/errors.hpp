#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace silradar {

/// Base of every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite, negative or otherwise out-of-domain argument.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Arguments that are individually valid but cannot be combined
/// (sample rate below Nyquist, deviation not representable, ...).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// A zero-magnitude sample reached a phase or frequency demodulator.
class DemodulationError : public Error {
 public:
  DemodulationError(const std::string& what, std::size_t index)
      : Error(what + " at sample " + std::to_string(index)), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// A radiation pattern cut without a usable main lobe.
class DegeneratePatternError : public Error {
 public:
  using Error::Error;
};

/// Vital-rate estimation failed (no peak, masked band, ...).
class EstimationError : public Error {
 public:
  using Error::Error;
};

}  // namespace silradar
