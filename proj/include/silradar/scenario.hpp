#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silradar/antenna.hpp"
#include "silradar/channel.hpp"
#include "silradar/dsp.hpp"
#include "silradar/errors.hpp"
#include "silradar/physio.hpp"
#include "silradar/receiver.hpp"
#include "silradar/silo.hpp"

namespace silradar {

struct DspConfig {
  dsp::Window window = dsp::Window::hann;
  int zero_pad_factor = 4;
  dsp::Detrend detrend = dsp::Detrend::linear;
  /// Band-pass from the respiration low edge to the heartbeat high edge
  /// before the spectrum.
  bool bandpass_enabled = false;
  dsp::PeakSearch peaks;

  bool operator==(const DspConfig&) const = default;
};

struct RunControls {
  double duration_s = 60.0;
  double sample_rate_hz = 1000.0;
  std::string output_dir = "out";

  bool operator==(const RunControls&) const = default;
};

/// Everything one simulated measurement needs. `channel.rng_seed` is the
/// run seed (`run.seed` in the scenario file) and `channel.range_m` always
/// equals `silo.nominal_range_m`.
struct Scenario {
  physio::VitalSignProfile vitals;
  silo::SiloConfig silo;
  antenna::AntennaSystemSpec antenna;
  std::optional<double> antenna_gain_override_dbi;
  channel::ChannelConfig channel;
  bool noise_enabled = true;
  receiver::ReceiverConfig receiver;
  DspConfig dsp;
  RunControls run;

  /// Re-checks every module invariant and the cross-field rules.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

class ScenarioError : public Error {
 public:
  enum class Kind { syntax, unknown_key, duplicate_key, invalid_value, cross_field };

  ScenarioError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const noexcept { return kind_; }
  /// 1-based; 0 when the error concerns the document as a whole.
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

std::string_view to_string(ScenarioError::Kind kind);

/// Line-based `section.key = value` document, `#` starts a comment.
/// Missing keys keep their defaults; an empty document is the default run.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario_file(const std::string& path);

/// Every key in canonical order; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// All recognised keys, in canonical order.
std::vector<std::string_view> scenario_keys();

}  // namespace silradar
