#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "silradar/antenna.hpp"
#include "silradar/channel.hpp"
#include "silradar/dsp.hpp"
#include "silradar/scenario.hpp"
#include "silradar/signal.hpp"

namespace silradar {

/// Pipeline stages in execution order.
enum class Stage {
  chest_motion,
  frequency_deviation,
  fm_synthesis,
  antenna_gain,
  channel,
  lna,
  channel_filter,
  demodulation,
  conditioning,
  spectrum,
  peak_estimation,
};

std::string_view stage_name(Stage stage);
std::string_view stage_module(Stage stage);

/// A module error tagged with the stage that raised it.
class PipelineError : public Error {
 public:
  enum class Cause { parameter, configuration, demodulation, degenerate_pattern, estimation, other };

  PipelineError(Stage stage, Cause cause, const std::string& message);

  Stage stage() const noexcept { return stage_; }
  Cause cause() const noexcept { return cause_; }

 private:
  Stage stage_;
  Cause cause_;
};

/// Everything the chain produced, in memory.
struct Simulation {
  TimeSeries chest_motion_m;
  TimeSeries deviation_rad_s;
  ComplexBaseband received;  ///< after LNA and channel filter
  TimeSeries phase_rad;      ///< unwrapped IQ phase
  TimeSeries analysed;       ///< series fed to the spectrum (detrended)
  dsp::Spectrum spectrum;
  antenna::GainBreakdown gain;
  bool gain_overridden = false;
  double antenna_gain_dbi = 0.0;
  channel::LinkBudget link;
  std::optional<dsp::VitalEstimate> estimate;
};

/// Runs the chain physio -> deviation -> FM -> link/noise -> LNA ->
/// channel filter -> demodulation -> conditioning -> spectrum -> peaks.
/// Peak estimation failures are thrown unless `allow_estimation_failure`,
/// in which case `estimate` stays empty.
Simulation simulate(const Scenario& scenario, bool allow_estimation_failure = false);

struct ManifestEntry {
  std::string file;
  std::string sha256;
};

struct RunReport {
  double true_respiration_hz = 0.0;
  double true_heartbeat_hz = 0.0;
  double estimated_respiration_hz = 0.0;
  double estimated_heartbeat_hz = 0.0;
  double respiration_abs_error_hz = 0.0;
  double heartbeat_abs_error_hz = 0.0;
  double respiration_peak_db = 0.0;
  double heartbeat_peak_db = 0.0;
  antenna::GainBreakdown gain;
  bool gain_overridden = false;
  double antenna_gain_dbi = 0.0;
  channel::LinkBudget link;
  double spectrum_resolution_hz = 0.0;
  std::vector<ManifestEntry> manifest;
  std::string scenario_sha256;

  /// `key: value` lines, numbers printed with round-trip precision.
  std::string render(const Scenario& scenario) const;
};

/// simulate() plus baseband_iq.csv, phase.csv, spectrum.csv and report.txt
/// under `out_dir`. The CSVs are written before peak estimation so a
/// failed estimate still leaves them for inspection.
RunReport run_pipeline(const Scenario& scenario, const std::filesystem::path& out_dir);

struct AntennaReport {
  antenna::GainBreakdown gain;
  double bare_array_gain_dbi = 0.0;
  std::optional<antenna::Beamwidths> e_plane;
  std::optional<antenna::Beamwidths> h_plane;
  std::array<double, 6> prs_heights_m{};
  std::string pattern_sha256;

  std::string render() const;
};

/// Full-sphere pattern.csv plus gain breakdown, beamwidths and cavity
/// resonance heights for orders 0..5.
AntennaReport analyze_antenna(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Pattern CSV body (header `theta_deg,phi_deg,directive_gain_dbi`).
std::string pattern_csv(const antenna::RadiationPattern& pattern);
std::string spectrum_csv(const dsp::Spectrum& spectrum);

}  // namespace silradar
