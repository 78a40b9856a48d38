#include "silradar/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "silradar/io.hpp"
#include "silradar/physio.hpp"
#include "silradar/receiver.hpp"
#include "silradar/silo.hpp"

namespace silradar {

namespace {

using Cause = PipelineError::Cause;

template <typename F>
auto at_stage(Stage stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const ParameterError& e) {
    throw PipelineError(stage, Cause::parameter, e.what());
  } catch (const ConfigurationError& e) {
    throw PipelineError(stage, Cause::configuration, e.what());
  } catch (const DemodulationError& e) {
    throw PipelineError(stage, Cause::demodulation, e.what());
  } catch (const DegeneratePatternError& e) {
    throw PipelineError(stage, Cause::degenerate_pattern, e.what());
  } catch (const EstimationError& e) {
    throw PipelineError(stage, Cause::estimation, e.what());
  } catch (const Error& e) {
    throw PipelineError(stage, Cause::other, e.what());
  }
}

std::string round_trip(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put(std::string& out, std::string_view key, std::string_view value) {
  out += key;
  out += ": ";
  out += value;
  out += '\n';
}

void put(std::string& out, std::string_view key, double value) { put(out, key, round_trip(value)); }

std::string baseband_csv(const ComplexBaseband& s) {
  io::CsvWriter csv("time_s,i,q");
  const double fs = s.sample_rate_hz();
  for (std::size_t n = 0; n < s.size(); ++n) {
    csv.row({static_cast<double>(n) / fs, s.i_samples()[n], s.q_samples()[n]});
  }
  return csv.text();
}

std::string phase_csv(const TimeSeries& phase) {
  io::CsvWriter csv("time_s,phase_rad");
  for (std::size_t n = 0; n < phase.size(); ++n) csv.row({phase.time_at(n), phase[n]});
  return csv.text();
}

}  // namespace

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::chest_motion: return "chest_motion";
    case Stage::frequency_deviation: return "frequency_deviation";
    case Stage::fm_synthesis: return "fm_synthesis";
    case Stage::antenna_gain: return "antenna_gain";
    case Stage::channel: return "channel";
    case Stage::lna: return "lna";
    case Stage::channel_filter: return "channel_filter";
    case Stage::demodulation: return "demodulation";
    case Stage::conditioning: return "conditioning";
    case Stage::spectrum: return "spectrum";
    case Stage::peak_estimation: return "peak_estimation";
  }
  return "unknown";
}

std::string_view stage_module(Stage stage) {
  switch (stage) {
    case Stage::chest_motion: return "physio";
    case Stage::frequency_deviation:
    case Stage::fm_synthesis: return "silo";
    case Stage::antenna_gain: return "antenna";
    case Stage::channel: return "channel";
    case Stage::lna:
    case Stage::channel_filter:
    case Stage::demodulation: return "receiver";
    case Stage::conditioning:
    case Stage::spectrum:
    case Stage::peak_estimation: return "dsp";
  }
  return "unknown";
}

PipelineError::PipelineError(Stage stage, Cause cause, const std::string& message)
    : Error("stage " + std::to_string(static_cast<int>(stage)) + " (" +
            std::string(stage_module(stage)) + "/" + std::string(stage_name(stage)) +
            "): " + message),
      stage_(stage),
      cause_(cause) {}

Simulation simulate(const Scenario& sc, bool allow_estimation_failure) {
  sc.validate();
  const double fs = sc.run.sample_rate_hz;
  const double lambda = sc.silo.wavelength_m();

  auto chest = at_stage(Stage::chest_motion, [&] {
    return physio::synthesize_chest_motion(sc.vitals, sc.run.duration_s, fs);
  });
  auto deviation = at_stage(Stage::frequency_deviation,
                            [&] { return silo::instantaneous_freq_deviation(chest, sc.silo); });
  auto oscillator = at_stage(Stage::fm_synthesis,
                             [&] { return silo::synthesize_silo_output(deviation, fs); });

  antenna::GainBreakdown gain;
  double gain_dbi = 0.0;
  at_stage(Stage::antenna_gain, [&] {
    gain = antenna::analyze(sc.antenna, lambda).gain;
    gain_dbi = sc.antenna_gain_override_dbi.value_or(gain.total_gain_dbi);
  });

  channel::LinkBudget link;
  auto noisy = at_stage(Stage::channel, [&] {
    link = channel::link_budget(sc.channel, gain_dbi, lambda);
    const double snr = sc.noise_enabled ? link.snr_db : std::numeric_limits<double>::infinity();
    return channel::add_noise(oscillator, snr, sc.channel.rng_seed);
  });

  auto amplified =
      at_stage(Stage::lna, [&] { return receiver::lna_amplify(noisy, sc.receiver.lna_gain_db); });
  auto received = at_stage(Stage::channel_filter, [&] {
    return sc.receiver.channel_bandwidth_hz > 0.0
               ? receiver::channel_filter(amplified, sc.receiver.channel_bandwidth_hz)
               : amplified;
  });

  auto phase = at_stage(Stage::demodulation,
                        [&] { return receiver::extract_phase(received, sc.receiver); });
  auto analysed = at_stage(Stage::conditioning, [&] {
    TimeSeries series = sc.receiver.demodulator == receiver::Demodulator::phase
                            ? phase
                            : receiver::discriminate(received);
    series = dsp::detrend(series, sc.dsp.detrend);
    if (sc.dsp.bandpass_enabled) {
      series = dsp::bandpass(series, sc.dsp.peaks.respiration.lo_hz, sc.dsp.peaks.heartbeat.hi_hz);
    }
    return series;
  });
  auto spectrum = at_stage(Stage::spectrum, [&] {
    return dsp::compute_spectrum(analysed, sc.dsp.window, sc.dsp.zero_pad_factor);
  });

  std::optional<dsp::VitalEstimate> estimate;
  try {
    estimate = at_stage(Stage::peak_estimation,
                        [&] { return dsp::find_vital_peaks(spectrum, sc.dsp.peaks); });
  } catch (const PipelineError& e) {
    if (!allow_estimation_failure || e.cause() != Cause::estimation) throw;
  }

  return Simulation{std::move(chest),    std::move(deviation), std::move(received),
                    std::move(phase),    std::move(analysed),  std::move(spectrum),
                    gain,                sc.antenna_gain_override_dbi.has_value(),
                    gain_dbi,            link,                 estimate};
}

std::string spectrum_csv(const dsp::Spectrum& spectrum) {
  io::CsvWriter csv("freq_hz,mag_db");
  for (std::size_t k = 0; k < spectrum.freq_bins_hz.size(); ++k) {
    csv.row({spectrum.freq_bins_hz[k], spectrum.mag_db[k]});
  }
  return csv.text();
}

std::string pattern_csv(const antenna::RadiationPattern& pattern) {
  constexpr double deg = 180.0 / std::numbers::pi;
  constexpr double floor_dbi = -200.0;
  io::CsvWriter csv("theta_deg,phi_deg,directive_gain_dbi");
  for (std::size_t i = 0; i < pattern.theta_grid_rad.size(); ++i) {
    for (std::size_t j = 0; j < pattern.phi_grid_rad.size(); ++j) {
      const double d = pattern.at(i, j);
      const double dbi = d > 0.0 ? std::max(floor_dbi, 10.0 * std::log10(d)) : floor_dbi;
      csv.row({pattern.theta_grid_rad[i] * deg, pattern.phi_grid_rad[j] * deg, dbi});
    }
  }
  return csv.text();
}

std::string RunReport::render(const Scenario& scenario) const {
  std::string out;
  put(out, "format", "silradar-run-report/1");
  put(out, "scenario_sha256", scenario_sha256);
  put(out, "rng", channel::kNoiseGenerator);
  put(out, "seed", std::to_string(scenario.channel.rng_seed));
  put(out, "true_respiration_hz", true_respiration_hz);
  put(out, "estimated_respiration_hz", estimated_respiration_hz);
  put(out, "respiration_abs_error_hz", respiration_abs_error_hz);
  put(out, "respiration_peak_db", respiration_peak_db);
  put(out, "true_heartbeat_hz", true_heartbeat_hz);
  put(out, "estimated_heartbeat_hz", estimated_heartbeat_hz);
  put(out, "heartbeat_abs_error_hz", heartbeat_abs_error_hz);
  put(out, "heartbeat_peak_db", heartbeat_peak_db);
  put(out, "spectrum_resolution_hz", spectrum_resolution_hz);
  put(out, "directivity_dbi", gain.directivity_dbi);
  put(out, "efficiency_db", gain.efficiency_db);
  put(out, "fss_delta_db", gain.fss_delta_db);
  put(out, "model_gain_dbi", gain.total_gain_dbi);
  put(out, "antenna_gain_source", gain_overridden ? "override" : "model");
  put(out, "antenna_gain_dbi", antenna_gain_dbi);
  put(out, "round_trip_loss_db", link.round_trip_loss_db);
  put(out, "received_power_dbm", link.received_power_dbm);
  put(out, "link_snr_db", link.snr_db);
  put(out, "noise", scenario.noise_enabled ? "enabled" : "disabled");
  for (const auto& entry : manifest) put(out, "file." + entry.file, "sha256:" + entry.sha256);

  // Resolved scenario, defaults included.
  const std::string resolved = serialize_scenario(scenario);
  std::size_t pos = 0;
  while (pos < resolved.size()) {
    const auto nl = resolved.find('\n', pos);
    const std::string_view line(resolved.data() + pos, nl - pos);
    pos = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find(" = ");
    put(out, "scenario." + std::string(line.substr(0, eq)), line.substr(eq + 3));
  }
  return out;
}

RunReport run_pipeline(const Scenario& scenario, const std::filesystem::path& out_dir) {
  Simulation sim = simulate(scenario, /*allow_estimation_failure=*/true);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir.string() + "': " + ec.message());

  RunReport report;
  report.manifest.push_back(
      {"baseband_iq.csv", io::write_file(out_dir / "baseband_iq.csv", baseband_csv(sim.received))});
  report.manifest.push_back(
      {"phase.csv", io::write_file(out_dir / "phase.csv", phase_csv(sim.phase_rad))});
  report.manifest.push_back(
      {"spectrum.csv", io::write_file(out_dir / "spectrum.csv", spectrum_csv(sim.spectrum))});

  if (!sim.estimate) {
    // Re-raise the estimation error with its stage tag.
    at_stage(Stage::peak_estimation,
             [&] { return dsp::find_vital_peaks(sim.spectrum, scenario.dsp.peaks); });
  }
  const auto& est = *sim.estimate;
  report.true_respiration_hz = scenario.vitals.respiration_rate_hz;
  report.true_heartbeat_hz = scenario.vitals.heartbeat_rate_hz;
  report.estimated_respiration_hz = est.respiration_hz;
  report.estimated_heartbeat_hz = est.heartbeat_hz;
  report.respiration_abs_error_hz = std::abs(est.respiration_hz - report.true_respiration_hz);
  report.heartbeat_abs_error_hz = std::abs(est.heartbeat_hz - report.true_heartbeat_hz);
  report.respiration_peak_db = est.respiration_peak_db;
  report.heartbeat_peak_db = est.heartbeat_peak_db;
  report.gain = sim.gain;
  report.gain_overridden = sim.gain_overridden;
  report.antenna_gain_dbi = sim.antenna_gain_dbi;
  report.link = sim.link;
  report.spectrum_resolution_hz = sim.spectrum.resolution_hz;
  report.scenario_sha256 = io::sha256_hex(serialize_scenario(scenario));

  io::write_file(out_dir / "report.txt", report.render(scenario));
  return report;
}

std::string AntennaReport::render() const {
  std::string out;
  put(out, "format", "silradar-antenna-report/1");
  put(out, "directivity_dbi", gain.directivity_dbi);
  put(out, "efficiency_db", gain.efficiency_db);
  put(out, "fss_delta_db", gain.fss_delta_db);
  put(out, "total_gain_dbi", gain.total_gain_dbi);
  put(out, "bare_array_gain_dbi", bare_array_gain_dbi);
  auto widths = [&](std::string_view plane, const std::optional<antenna::Beamwidths>& bw) {
    const std::string prefix(plane);
    if (!bw) {
      put(out, prefix + "_hpbw_deg", "degenerate");
      return;
    }
    put(out, prefix + "_hpbw_deg", bw->half_power_deg);
    put(out, prefix + "_first_null_width_deg",
        bw->first_null_deg ? round_trip(*bw->first_null_deg) : std::string("absent"));
  };
  widths("e_plane", e_plane);
  widths("h_plane", h_plane);
  for (std::size_t n = 0; n < prs_heights_m.size(); ++n) {
    put(out, "prs_height_order_" + std::to_string(n) + "_m", prs_heights_m[n]);
  }
  put(out, "file.pattern.csv", "sha256:" + pattern_sha256);
  return out;
}

AntennaReport analyze_antenna(const Scenario& scenario, const std::filesystem::path& out_dir) {
  scenario.validate();
  const double lambda = scenario.silo.wavelength_m();
  AntennaReport report;
  const auto analysis =
      at_stage(Stage::antenna_gain, [&] { return antenna::analyze(scenario.antenna, lambda); });
  report.gain = analysis.gain;
  report.bare_array_gain_dbi = analysis.gain.directivity_dbi + analysis.gain.efficiency_db;
  for (auto [plane, slot] : {std::pair{antenna::CutPlane::e_plane, &report.e_plane},
                             std::pair{antenna::CutPlane::h_plane, &report.h_plane}}) {
    try {
      *slot = antenna::beamwidths(analysis.pattern, plane);
    } catch (const DegeneratePatternError&) {
      slot->reset();
    }
  }
  for (std::size_t n = 0; n < report.prs_heights_m.size(); ++n) {
    report.prs_heights_m[n] =
        antenna::prs_resonance_height(scenario.antenna.fss, lambda, static_cast<int>(n));
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir.string() + "': " + ec.message());
  report.pattern_sha256 = io::write_file(out_dir / "pattern.csv", pattern_csv(analysis.pattern));
  return report;
}

}  // namespace silradar
