#include "silradar/receiver.hpp"

#include <cmath>
#include <string>

#include "silradar/errors.hpp"
#include "silradar/filter.hpp"

namespace silradar::receiver {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void require_nonzero(const ComplexBaseband& s, std::size_t n, const char* stage) {
  if (s.i_samples()[n] == 0.0 && s.q_samples()[n] == 0.0) {
    throw DemodulationError(std::string(stage) + ": zero-magnitude sample", n);
  }
}

}  // namespace

void ReceiverConfig::validate() const {
  if (!std::isfinite(lna_gain_db)) throw ParameterError("LNA gain must be finite");
  if (!std::isfinite(unwrap_threshold_rad) || unwrap_threshold_rad <= 0.0 ||
      unwrap_threshold_rad > two_pi) {
    throw ParameterError("unwrap threshold must lie in (0, 2 pi]");
  }
  if (!std::isfinite(channel_bandwidth_hz) || channel_bandwidth_hz < 0.0) {
    throw ParameterError("channel bandwidth must be >= 0");
  }
}

ComplexBaseband lna_amplify(const ComplexBaseband& signal, double gain_db) {
  if (!std::isfinite(gain_db)) throw ParameterError("LNA gain must be finite");
  const double g = std::pow(10.0, gain_db / 20.0);
  std::vector<double> i(signal.i_samples().begin(), signal.i_samples().end());
  std::vector<double> q(signal.q_samples().begin(), signal.q_samples().end());
  for (std::size_t n = 0; n < i.size(); ++n) {
    if (!std::isfinite(i[n]) || !std::isfinite(q[n])) {
      throw ParameterError("non-finite sample at index " + std::to_string(n));
    }
    i[n] *= g;
    q[n] *= g;
  }
  return ComplexBaseband(signal.sample_rate_hz(), std::move(i), std::move(q));
}

ComplexBaseband channel_filter(const ComplexBaseband& signal, double bandwidth_hz) {
  const double fs = signal.sample_rate_hz();
  const auto sections = dsp::butterworth_lowpass(4, bandwidth_hz, fs);
  const auto pad = static_cast<std::size_t>(std::ceil(3.0 * fs / bandwidth_hz));
  return ComplexBaseband(fs, dsp::filtfilt(sections, signal.i_samples(), pad),
                         dsp::filtfilt(sections, signal.q_samples(), pad));
}

TimeSeries discriminate(const ComplexBaseband& signal) {
  const std::size_t n = signal.size();
  if (n < 2) throw ParameterError("discriminator needs at least 2 samples");
  const double fs = signal.sample_rate_hz();
  std::vector<double> out(n);
  require_nonzero(signal, 0, "discriminator");
  for (std::size_t k = 1; k < n; ++k) {
    require_nonzero(signal, k, "discriminator");
    const std::complex<double> d = signal[k] * std::conj(signal[k - 1]);
    out[k] = std::atan2(d.imag(), d.real()) * fs;
  }
  out[0] = out[1];
  return TimeSeries(fs, std::move(out));
}

std::vector<double> unwrap(std::span<const double> phase, double threshold) {
  std::vector<double> out(phase.begin(), phase.end());
  double correction = 0.0;
  for (std::size_t n = 1; n < out.size(); ++n) {
    const double d = phase[n] - phase[n - 1];
    if (std::abs(d) > threshold) correction -= two_pi * std::round(d / two_pi);
    out[n] = phase[n] + correction;
  }
  return out;
}

TimeSeries extract_phase(const ComplexBaseband& signal, const ReceiverConfig& cfg) {
  cfg.validate();
  const std::size_t n = signal.size();
  if (n == 0) throw ParameterError("phase extraction needs at least one sample");
  std::vector<double> raw(n);
  for (std::size_t k = 0; k < n; ++k) {
    require_nonzero(signal, k, "phase extraction");
    raw[k] = std::atan2(signal.q_samples()[k], signal.i_samples()[k]);
  }
  return TimeSeries(signal.sample_rate_hz(), unwrap(raw, cfg.unwrap_threshold_rad));
}

Demodulator parse_demodulator(std::string_view name) {
  if (name == "phase") return Demodulator::phase;
  if (name == "frequency") return Demodulator::frequency;
  throw ParameterError("unknown demodulator '" + std::string(name) + "' (expected phase|frequency)");
}

std::string_view to_string(Demodulator d) {
  return d == Demodulator::phase ? "phase" : "frequency";
}

Discriminator parse_discriminator(std::string_view name) {
  if (name == "phase_difference") return Discriminator::phase_difference;
  throw ParameterError("unknown discriminator '" + std::string(name) +
                       "' (expected phase_difference)");
}

std::string_view to_string(Discriminator) { return "phase_difference"; }

}  // namespace silradar::receiver
