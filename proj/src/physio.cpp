#include "silradar/physio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "silradar/errors.hpp"

namespace silradar::physio {

namespace {

void require_non_negative(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ParameterError(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
  }
}

}  // namespace

void VitalSignProfile::validate() const {
  require_non_negative(respiration_rate_hz, "respiration_rate_hz");
  require_non_negative(respiration_amp_m, "respiration_amp_m");
  require_non_negative(heartbeat_rate_hz, "heartbeat_rate_hz");
  require_non_negative(heartbeat_amp_m, "heartbeat_amp_m");
  if (!std::isfinite(respiration_phase_rad) || !std::isfinite(heartbeat_phase_rad)) {
    throw ParameterError("vital-sign phases must be finite");
  }
}

double VitalSignProfile::max_rate_hz() const noexcept {
  return std::max(respiration_rate_hz, heartbeat_rate_hz);
}

TimeSeries synthesize_chest_motion(const VitalSignProfile& profile, double duration_s, double fs) {
  profile.validate();
  if (!std::isfinite(duration_s) || duration_s <= 0.0) {
    throw ParameterError("duration must be finite and positive");
  }
  if (!std::isfinite(fs) || fs <= 0.0) {
    throw ParameterError("sample rate must be finite and positive");
  }
  if (fs <= 2.0 * profile.max_rate_hz()) {
    throw ConfigurationError("sample rate " + std::to_string(fs) +
                             " Hz is below Nyquist for a vital rate of " +
                             std::to_string(profile.max_rate_hz()) + " Hz");
  }

  // A record of duration T at rate fs holds round(T * fs) samples.
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(duration_s * fs)));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> x(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double t = static_cast<double>(n) / fs;
    x[n] = profile.respiration_amp_m *
               std::sin(two_pi * profile.respiration_rate_hz * t + profile.respiration_phase_rad) +
           profile.heartbeat_amp_m *
               std::sin(two_pi * profile.heartbeat_rate_hz * t + profile.heartbeat_phase_rad);
  }
  return TimeSeries(fs, std::move(x));
}

}  // namespace silradar::physio
