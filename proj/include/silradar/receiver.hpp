#pragma once

#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "silradar/signal.hpp"

namespace silradar::receiver {

enum class Discriminator { phase_difference };

/// Which view of the IQ record the pipeline analyses.
enum class Demodulator {
  phase,      ///< unwrapped IQ phase (rad)
  frequency,  ///< discriminator output (rad/s)
};

struct ReceiverConfig {
  double lna_gain_db = 19.0;
  Discriminator discriminator = Discriminator::phase_difference;
  Demodulator demodulator = Demodulator::phase;
  double unwrap_threshold_rad = std::numbers::pi;
  /// One-sided cutoff of the IQ baseband filter ahead of demodulation;
  /// 0 disables it.
  double channel_bandwidth_hz = 20.0;

  void validate() const;
  bool operator==(const ReceiverConfig&) const = default;
};

/// Scales I and Q by 10^(gain_db / 20).
ComplexBaseband lna_amplify(const ComplexBaseband& signal, double gain_db);

/// Zero-phase 4th-order Butterworth low-pass applied to both rails.
ComplexBaseband channel_filter(const ComplexBaseband& signal, double bandwidth_hz);

/// dw[n] = arg(s[n] conj(s[n-1])) * fs for n >= 1; dw[0] repeats dw[1].
TimeSeries discriminate(const ComplexBaseband& signal);

/// Removes 2 pi jumps: wherever consecutive samples differ by more than
/// `threshold`, the difference is replaced by its nearest 2 pi-congruent value.
std::vector<double> unwrap(std::span<const double> phase, double threshold = std::numbers::pi);

/// Principal-value IQ phase followed by unwrap().
TimeSeries extract_phase(const ComplexBaseband& signal, const ReceiverConfig& cfg);

Demodulator parse_demodulator(std::string_view name);
std::string_view to_string(Demodulator d);
Discriminator parse_discriminator(std::string_view name);
std::string_view to_string(Discriminator d);

}  // namespace silradar::receiver
