#pragma once

#include <cstdint>
#include <string_view>

#include "silradar/signal.hpp"

namespace silradar::channel {

/// Through-wall link between the radar and the chest.
struct ChannelConfig {
  double range_m = 0.75;
  double wall_loss_db = 5.0;           // one way
  double body_reflectivity_db = 10.0;  // reflection loss at the chest
  double tx_power_dbm = 0.0;
  double noise_floor_dbm = -106.7;     // integrated over the baseband sample rate
  std::uint64_t rng_seed = 1;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;
};

struct LinkBudget {
  double round_trip_loss_db = 0.0;
  double received_power_dbm = 0.0;
  double snr_db = 0.0;
};

/// Two-way free-space loss for a target at `range_m`:
/// 40 log10(4 pi (2 R) / lambda). Doubling R costs 12 dB.
double round_trip_loss_db(double range_m, double lambda);

/// P_rx = P_tx + 2 G - L_rt - 2 L_wall - L_body, SNR = P_rx - noise floor.
LinkBudget link_budget(const ChannelConfig& cfg, double antenna_gain_dbi, double lambda);

/// Name of the noise generator, recorded next to every noisy output.
inline constexpr std::string_view kNoiseGenerator = "mt19937_64/box-muller";

/// Adds circularly-symmetric white Gaussian noise whose power is the
/// record's mean signal power divided by 10^(snr_db/10). An snr_db of
/// +infinity returns the input untouched.
ComplexBaseband add_noise(const ComplexBaseband& signal, double snr_db, std::uint64_t seed);

}  // namespace silradar::channel
