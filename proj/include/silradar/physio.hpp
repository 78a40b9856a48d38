#pragma once

#include "silradar/signal.hpp"

namespace silradar::physio {

/// Two-tone chest-wall motion model: one respiration sinusoid plus one
/// heartbeat sinusoid. Amplitudes are peak displacements in metres.
struct VitalSignProfile {
  double respiration_rate_hz = 0.46;
  double respiration_amp_m = 5.0e-3;
  double respiration_phase_rad = 0.0;
  double heartbeat_rate_hz = 1.56;
  double heartbeat_amp_m = 0.3e-3;
  double heartbeat_phase_rad = 0.0;

  /// Throws ParameterError on negative or non-finite fields.
  void validate() const;
  double max_rate_hz() const noexcept;

  bool operator==(const VitalSignProfile&) const = default;
};

/// x[n] = a_r sin(2 pi f_r t_n + phi_r) + a_h sin(2 pi f_h t_n + phi_h),
/// t_n = n / fs, n = 0 .. round(duration_s * fs) - 1.
TimeSeries synthesize_chest_motion(const VitalSignProfile& profile, double duration_s, double fs);

}  // namespace silradar::physio
