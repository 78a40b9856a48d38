#include "silradar/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "silradar/errors.hpp"

namespace silradar::channel {

namespace {

/// Standard normal pairs from mt19937_64 via Box-Muller. Written out
/// instead of std::normal_distribution so the stream is identical across
/// standard library implementations.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // (0, 1] and [0, 1) from the top 53 bits.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

void ChannelConfig::validate() const {
  if (!std::isfinite(range_m) || range_m <= 0.0) throw ParameterError("range must be positive");
  if (!std::isfinite(wall_loss_db) || wall_loss_db < 0.0) {
    throw ParameterError("wall loss must be >= 0 dB");
  }
  if (!std::isfinite(body_reflectivity_db) || body_reflectivity_db < 0.0) {
    throw ParameterError("body reflectivity loss must be >= 0 dB");
  }
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_floor_dbm)) {
    throw ParameterError("transmit power and noise floor must be finite");
  }
}

double round_trip_loss_db(double range_m, double lambda) {
  if (!std::isfinite(range_m) || range_m <= 0.0) throw ParameterError("range must be positive");
  if (!std::isfinite(lambda) || lambda <= 0.0) throw ParameterError("wavelength must be positive");
  return 40.0 * std::log10(4.0 * std::numbers::pi * 2.0 * range_m / lambda);
}

LinkBudget link_budget(const ChannelConfig& cfg, double antenna_gain_dbi, double lambda) {
  cfg.validate();
  if (!std::isfinite(antenna_gain_dbi)) throw ParameterError("antenna gain must be finite");
  LinkBudget out;
  out.round_trip_loss_db = round_trip_loss_db(cfg.range_m, lambda);
  out.received_power_dbm = cfg.tx_power_dbm + 2.0 * antenna_gain_dbi - out.round_trip_loss_db -
                           2.0 * cfg.wall_loss_db - cfg.body_reflectivity_db;
  out.snr_db = out.received_power_dbm - cfg.noise_floor_dbm;
  return out;
}

ComplexBaseband add_noise(const ComplexBaseband& signal, double snr_db, std::uint64_t seed) {
  if (signal.size() == 0) throw ParameterError("cannot add noise to an empty record");
  if (std::isnan(snr_db)) throw ParameterError("SNR must not be NaN");
  const double power = signal.mean_power();
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw ParameterError("signal has zero or non-finite power; SNR is undefined");
  }
  if (snr_db == std::numeric_limits<double>::infinity()) return signal;

  const double sigma = std::sqrt(0.5 * power / std::pow(10.0, snr_db / 10.0));
  GaussianSource gauss(seed);
  const auto i_in = signal.i_samples();
  const auto q_in = signal.q_samples();
  std::vector<double> i(i_in.size());
  std::vector<double> q(q_in.size());
  for (std::size_t n = 0; n < i.size(); ++n) {
    i[n] = i_in[n] + sigma * gauss.next();
    q[n] = q_in[n] + sigma * gauss.next();
  }
  return ComplexBaseband(signal.sample_rate_hz(), std::move(i), std::move(q));
}

}  // namespace silradar::channel
