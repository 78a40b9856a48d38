#pragma once

#include <numbers>

#include "silradar/signal.hpp"

namespace silradar::silo {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Steady-state self-injection-locked oscillator. The wavelength is always
/// derived from the carrier frequency.
struct SiloConfig {
  double carrier_freq_hz = 2.4e9;
  double locking_range_rad_s = 2.0 * std::numbers::pi * 10.0;
  double nominal_range_m = 0.75;

  void validate() const;
  double wavelength_m() const;

  bool operator==(const SiloConfig&) const = default;
};

/// lambda = c / f0.
double wavelength(double carrier_freq_hz);

/// Locked-oscillator frequency pulling caused by the round trip to a target
/// at range R + x(t):
///
///   dw[n] = -w_LR * sin(4 pi (R + x[n]) / lambda)      [rad/s]
///
/// Same sample rate, start time and length as the displacement series.
TimeSeries instantaneous_freq_deviation(const TimeSeries& displacement_m, const SiloConfig& cfg);

/// Unit-modulus FM record s[n] = exp(j theta[n]), theta the trapezoidal
/// running integral of the deviation with theta[0] = 0.
ComplexBaseband synthesize_silo_output(const TimeSeries& deviation_rad_s, double fs);

}  // namespace silradar::silo
