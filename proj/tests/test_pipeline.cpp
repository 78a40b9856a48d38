#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "silradar/io.hpp"
#include "silradar/pipeline.hpp"

using namespace silradar;
namespace fs = std::filesystem;

namespace {

fs::path scratch_root() { return fs::temp_directory_path() / ("silradar_test_" + std::to_string(::getpid())); }

fs::path scratch(const std::string& name) {
  const fs::path dir = scratch_root() / name;
  fs::remove_all(dir);
  return dir;
}

struct ScratchCleanup {
  ~ScratchCleanup() {
    std::error_code ec;
    fs::remove_all(scratch_root(), ec);
  }
} cleanup;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> report_fields(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto sep = line.find(": ");
    REQUIRE(sep != std::string::npos);
    out[line.substr(0, sep)] = line.substr(sep + 2);
  }
  return out;
}

dsp::Spectrum spectrum_from_csv(const std::string& text, double peak_amplitude) {
  dsp::Spectrum s;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "freq_hz,mag_db");
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    s.freq_bins_hz.push_back(std::stod(line.substr(0, comma)));
    s.mag_db.push_back(std::stod(line.substr(comma + 1)));
  }
  s.resolution_hz = s.freq_bins_hz[1] - s.freq_bins_hz[0];
  s.peak_amplitude = peak_amplitude;
  return s;
}

Scenario short_run() {
  Scenario s;
  s.run.duration_s = 20.0;
  s.run.sample_rate_hz = 200.0;
  return s;
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(SILRADAR_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("default scenario recovers both rates") {
  const auto sim = simulate(Scenario{});
  REQUIRE(sim.estimate.has_value());
  CHECK(std::abs(sim.estimate->respiration_hz - 0.46) <= 0.02);
  CHECK(std::abs(sim.estimate->heartbeat_hz - 1.56) <= 0.02);
  CHECK(sim.chest_motion_m.size() == 60000);
  CHECK(sim.received.size() == 60000);
  CHECK_FALSE(sim.gain_overridden);
  CHECK(std::abs(sim.antenna_gain_dbi - 15.2) <= 0.5);
}

TEST_CASE("same seed, same bytes; different seed, different noise") {
  const auto s = short_run();
  const auto det_a = scratch("det_a");
  const auto a = run_pipeline(s, det_a);
  const auto b = run_pipeline(s, scratch("det_b"));
  REQUIRE(a.manifest.size() == 3);
  for (std::size_t k = 0; k < a.manifest.size(); ++k) {
    CHECK(a.manifest[k].file == b.manifest[k].file);
    CHECK(a.manifest[k].sha256 == b.manifest[k].sha256);
    CHECK(io::sha256_hex(slurp(det_a / a.manifest[k].file)) ==
          a.manifest[k].sha256);
  }
  CHECK(slurp(det_a / "report.txt").empty() == false);

  auto other = s;
  other.channel.rng_seed = 2;
  const auto c = run_pipeline(other, scratch("det_c"));
  CHECK(c.manifest[0].sha256 != a.manifest[0].sha256);
}

TEST_CASE("report values can be recomputed from the files") {
  const auto s = short_run();
  const auto dir = scratch("recompute");
  const auto report = run_pipeline(s, dir);
  const auto fields = report_fields(slurp(dir / "report.txt"));

  const double est_r = std::stod(fields.at("estimated_respiration_hz"));
  const double est_h = std::stod(fields.at("estimated_heartbeat_hz"));
  CHECK(std::stod(fields.at("respiration_abs_error_hz")) ==
        std::abs(est_r - std::stod(fields.at("true_respiration_hz"))));
  CHECK(std::stod(fields.at("heartbeat_abs_error_hz")) ==
        std::abs(est_h - std::stod(fields.at("true_heartbeat_hz"))));
  CHECK(std::stod(fields.at("true_respiration_hz")) == s.vitals.respiration_rate_hz);

  // Peak picking on the 6-digit CSV reproduces the report within CSV precision.
  const auto csv = spectrum_from_csv(slurp(dir / "spectrum.csv"), 1.0);
  const auto again = dsp::find_vital_peaks(csv, s.dsp.peaks);
  CHECK(again.respiration_hz == doctest::Approx(est_r).epsilon(1e-4));
  CHECK(again.heartbeat_hz == doctest::Approx(est_h).epsilon(1e-4));

  // Link figures follow from the printed gain.
  const double snr = std::stod(fields.at("link_snr_db"));
  CHECK(snr == doctest::Approx(std::stod(fields.at("received_power_dbm")) - s.channel.noise_floor_dbm));
  CHECK(fields.at("rng") == channel::kNoiseGenerator);
  CHECK(fields.at("seed") == "1");
  CHECK(fields.at("scenario.run.duration_s") == "20");
  CHECK(fields.at("file.spectrum.csv") == "sha256:" + io::sha256_hex(slurp(dir / "spectrum.csv")));
  for (auto key : scenario_keys()) CHECK(fields.count("scenario." + std::string(key)) == 1);
}

TEST_CASE("csv layout") {
  const auto s = short_run();
  const auto dir = scratch("layout");
  run_pipeline(s, dir);
  const std::string iq = slurp(dir / "baseband_iq.csv");
  CHECK(iq.starts_with("time_s,i,q\n0,"));
  CHECK(iq.find('\r') == std::string::npos);
  CHECK(std::count(iq.begin(), iq.end(), '\n') == 4001);
  CHECK(slurp(dir / "phase.csv").starts_with("time_s,phase_rad\n"));
  CHECK(slurp(dir / "spectrum.csv").starts_with("freq_hz,mag_db\n0,"));
}

TEST_CASE("motionless target surfaces as an estimation error") {
  auto s = short_run();
  s.vitals.respiration_amp_m = 0.0;
  s.vitals.heartbeat_amp_m = 0.0;
  s.noise_enabled = false;
  const auto still = scratch("still");
  try {
    run_pipeline(s, still);
    FAIL("expected an estimation failure");
  } catch (const PipelineError& e) {
    CHECK(e.cause() == PipelineError::Cause::estimation);
    CHECK(e.stage() == Stage::peak_estimation);
    CHECK(std::string(e.what()).find("dsp") != std::string::npos);
    CHECK(std::string(e.what()).find("no peak above floor") != std::string::npos);
  }
  // The CSVs are still written for inspection.
  CHECK(fs::exists(still / "spectrum.csv"));

  const auto sim = simulate(s, true);
  CHECK_FALSE(sim.estimate.has_value());
}

TEST_CASE("antenna gain override and SNR") {
  auto s = short_run();
  s.antenna_gain_override_dbi = 12.0;
  const auto low = simulate(s);
  s.antenna_gain_override_dbi = 15.2;
  const auto high = simulate(s);
  CHECK(low.gain_overridden);
  CHECK(high.link.snr_db - low.link.snr_db == doctest::Approx(6.4).epsilon(1e-9));
}

TEST_CASE("module errors carry the stage") {
  auto s = short_run();
  s.vitals.heartbeat_amp_m = 0.0;
  s.dsp.peaks.heartbeat = {1.0, 2.5};
  s.vitals.respiration_rate_hz = 0.5;
  s.dsp.peaks.harmonic_tol_hz = 1.0;
  try {
    simulate(s);
    FAIL("expected a masked heartbeat");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == Stage::peak_estimation);
    CHECK(std::string(e.what()).find("heartbeat masked by respiration harmonics") != std::string::npos);
  }
  CHECK(stage_module(Stage::fm_synthesis) == "silo");
  CHECK(stage_module(Stage::demodulation) == "receiver");
  CHECK(stage_name(Stage::channel) == "channel");
}

TEST_CASE("antenna analysis") {
  Scenario s;
  const auto dir = scratch("antenna");
  const auto base = analyze_antenna(s, dir);
  CHECK(std::abs(base.gain.total_gain_dbi - 15.2) <= 0.5);
  CHECK(base.gain.efficiency_db == doctest::Approx(-0.8619).epsilon(1e-4));
  CHECK(io::sha256_hex(slurp(dir / "pattern.csv")) == base.pattern_sha256);
  CHECK(slurp(dir / "pattern.csv").starts_with("theta_deg,phi_deg,directive_gain_dbi\n0.5,0.5,"));
  REQUIRE(base.e_plane.has_value());
  REQUIRE(base.h_plane.has_value());
  CHECK(base.prs_heights_m[3] == doctest::Approx(0.2498).epsilon(1e-3));
  const auto fields = report_fields(base.render());
  CHECK(fields.count("e_plane_hpbw_deg") == 1);
  CHECK(fields.count("prs_height_order_5_m") == 1);

  s.antenna.efficiency = 0.70;
  const auto measured = analyze_antenna(s, scratch("antenna_070"));
  CHECK(measured.gain.total_gain_dbi - base.gain.total_gain_dbi ==
        doctest::Approx(10 * std::log10(0.70 / 0.82)).epsilon(1e-9));
  CHECK(std::abs(measured.gain.total_gain_dbi - base.gain.total_gain_dbi + 0.69) <= 0.01);

  s = {};
  s.antenna.fss.reflection_mag = 0.0;
  const auto bare = analyze_antenna(s, scratch("antenna_bare"));
  CHECK(bare.gain.total_gain_dbi == bare.bare_array_gain_dbi);

  s = {};
  s.antenna.element = antenna::ElementKind::isotropic;
  s.antenna.array_rows = s.antenna.array_cols = 1;
  const auto iso = analyze_antenna(s, scratch("antenna_iso"));
  CHECK_FALSE(iso.e_plane.has_value());
  CHECK(report_fields(iso.render()).at("e_plane_hpbw_deg") == "degenerate");
}

TEST_CASE("command-line exit codes") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "ok.txt") << "run.duration_s = 20\nrun.sample_rate_hz = 200\n";
    std::ofstream(dir / "bad.txt") << "silo.nominal_range_m = 0.75\nchannel.range_m = 1.0\n";
    std::ofstream(dir / "still.txt") << "run.duration_s = 20\nrun.sample_rate_hz = 200\n"
                                        "vitals.respiration_amp_m = 0\nvitals.heartbeat_amp_m = 0\n"
                                        "channel.noise_enabled = false\n";
  }
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_cli("validate --scenario " + (dir / "ok.txt").string()) == 0);
  CHECK(run_cli("run --scenario " + (dir / "ok.txt").string() + out) == 0);
  CHECK(fs::exists(dir / "out" / "report.txt"));
  CHECK(run_cli("run --scenario " + (dir / "ok.txt").string() + out + " --seed 9 --duration 16") == 0);
  CHECK(report_fields(slurp(dir / "out" / "report.txt")).at("seed") == "9");
  CHECK(run_cli("validate --scenario " + (dir / "bad.txt").string()) == 2);
  CHECK(run_cli("run --scenario " + (dir / "missing.txt").string()) == 2);
  CHECK(run_cli("run --duration 0.01" + out) == 2);
  CHECK(run_cli("run --scenario " + (dir / "still.txt").string() + out) == 4);
  CHECK(run_cli("run --scenario " + (dir / "ok.txt").string() + " --out /dev/null/sub") == 3);
  CHECK(run_cli("antenna" + out) == 0);
  CHECK(fs::exists(dir / "out" / "pattern.csv"));
  CHECK(run_cli("frobnicate") == 2);
}
