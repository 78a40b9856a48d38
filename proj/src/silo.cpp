#include "silradar/silo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "silradar/errors.hpp"

namespace silradar::silo {

void SiloConfig::validate() const {
  if (!std::isfinite(carrier_freq_hz) || carrier_freq_hz <= 0.0) {
    throw ParameterError("carrier frequency must be finite and positive");
  }
  if (!std::isfinite(locking_range_rad_s) || locking_range_rad_s <= 0.0) {
    throw ParameterError("locking range must be finite and positive");
  }
  if (!std::isfinite(nominal_range_m) || nominal_range_m <= 0.0) {
    throw ParameterError("nominal range must be finite and positive");
  }
}

double SiloConfig::wavelength_m() const { return wavelength(carrier_freq_hz); }

double wavelength(double carrier_freq_hz) {
  if (!std::isfinite(carrier_freq_hz) || carrier_freq_hz <= 0.0) {
    throw ParameterError("carrier frequency must be finite and positive, got " +
                         std::to_string(carrier_freq_hz));
  }
  return kSpeedOfLight / carrier_freq_hz;
}

TimeSeries instantaneous_freq_deviation(const TimeSeries& displacement_m, const SiloConfig& cfg) {
  cfg.validate();
  const double k = 4.0 * std::numbers::pi / cfg.wavelength_m();
  const auto x = displacement_m.samples();
  std::vector<double> dev(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (!std::isfinite(x[n])) {
      throw ParameterError("non-finite displacement at sample " + std::to_string(n));
    }
    dev[n] = -cfg.locking_range_rad_s * std::sin(k * (cfg.nominal_range_m + x[n]));
  }
  return TimeSeries(displacement_m.sample_rate_hz(), std::move(dev), displacement_m.t0_s());
}

ComplexBaseband synthesize_silo_output(const TimeSeries& deviation_rad_s, double fs) {
  if (!std::isfinite(fs) || fs <= 0.0) {
    throw ParameterError("sample rate must be finite and positive");
  }
  if (fs != deviation_rad_s.sample_rate_hz()) {
    throw ConfigurationError("deviation series is sampled at " +
                             std::to_string(deviation_rad_s.sample_rate_hz()) +
                             " Hz, synthesis requested at " + std::to_string(fs) + " Hz");
  }
  const auto dev = deviation_rad_s.samples();
  double peak = 0.0;
  for (double d : dev) {
    if (!std::isfinite(d)) throw ParameterError("non-finite frequency deviation");
    peak = std::max(peak, std::abs(d));
  }
  // A per-sample phase step of pi or more aliases.
  if (fs <= peak / std::numbers::pi) {
    throw ConfigurationError("peak deviation " + std::to_string(peak) +
                             " rad/s is not representable at " + std::to_string(fs) + " Hz");
  }

  const double half_dt = 0.5 / fs;
  std::vector<double> i(dev.size());
  std::vector<double> q(dev.size());
  double theta = 0.0;
  for (std::size_t n = 0; n < dev.size(); ++n) {
    if (n > 0) theta += half_dt * (dev[n - 1] + dev[n]);
    i[n] = std::cos(theta);
    q[n] = std::sin(theta);
  }
  return ComplexBaseband(fs, std::move(i), std::move(q));
}

}  // namespace silradar::silo
