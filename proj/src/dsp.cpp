#include "silradar/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <numbers>
#include <string>

#include "silradar/errors.hpp"
#include "silradar/filter.hpp"

namespace silradar::dsp {

namespace {

constexpr double kDbFloor = -400.0;

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

// |DFT| of `in` (length m, real) for bins 0 .. m/2.
std::vector<double> real_dft_magnitude(const std::vector<double>& in) {
  const std::size_t m = in.size();
  const std::size_t bins = m / 2 + 1;
  std::unique_ptr<double, FftwFree> buf(static_cast<double*>(fftw_malloc(sizeof(double) * m)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins)));
  if (!buf || !out) throw std::bad_alloc();
  // FFTW_ESTIMATE never times candidate plans, so the chosen algorithm and
  // therefore the rounding are reproducible run to run.
  PlanPtr plan(fftw_plan_dft_r2c_1d(static_cast<int>(m), buf.get(), out.get(), FFTW_ESTIMATE));
  if (!plan) throw Error("FFTW could not create a plan of size " + std::to_string(m));
  std::copy(in.begin(), in.end(), buf.get());
  fftw_execute(plan.get());

  std::vector<double> mag(bins);
  for (std::size_t k = 0; k < bins; ++k) mag[k] = std::hypot(out.get()[k][0], out.get()[k][1]);
  return mag;
}

struct BandPeak {
  double freq_hz;
  double db;
};

BandPeak refine(const Spectrum& s, std::size_t k) {
  const double b = s.mag_db[k];
  if (k == 0 || k + 1 >= s.mag_db.size()) return {s.freq_bins_hz[k], b};
  const double a = s.mag_db[k - 1];
  const double c = s.mag_db[k + 1];
  const double curvature = a - 2.0 * b + c;
  if (!(curvature < 0.0)) return {s.freq_bins_hz[k], b};
  const double delta = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
  return {s.freq_bins_hz[k] + delta * s.resolution_hz, b - 0.25 * (a - c) * delta};
}

void check_band(const Band& band, const Spectrum& s, const char* name) {
  if (!std::isfinite(band.lo_hz) || !std::isfinite(band.hi_hz) || band.lo_hz < 0.0 ||
      band.lo_hz >= band.hi_hz) {
    throw ParameterError(std::string(name) + " band must satisfy 0 <= lo < hi");
  }
  if (band.hi_hz > s.freq_bins_hz.back()) {
    throw ParameterError(std::string(name) + " band extends past the spectrum's Nyquist limit");
  }
}

}  // namespace

Spectrum compute_spectrum(const TimeSeries& x, Window window, int zero_pad_factor) {
  const std::size_t n = x.size();
  if (n < 16) throw ParameterError("spectrum needs at least 16 samples, got " + std::to_string(n));
  if (zero_pad_factor < 1) throw ParameterError("zero-pad factor must be >= 1");
  const auto samples = x.samples();
  double mean = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) throw ParameterError("spectrum input contains non-finite samples");
    mean += v;
  }
  mean /= static_cast<double>(n);

  const std::size_t m = n * static_cast<std::size_t>(zero_pad_factor);
  std::vector<double> buf(m, 0.0);
  double window_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = window == Window::hann
                         ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                                static_cast<double>(n - 1))
                         : 1.0;
    window_sum += w;
    buf[i] = (samples[i] - mean) * w;
  }

  Spectrum s;
  s.magnitude = real_dft_magnitude(buf);
  s.resolution_hz = x.sample_rate_hz() / static_cast<double>(m);
  s.freq_bins_hz.resize(s.magnitude.size());
  for (std::size_t k = 0; k < s.freq_bins_hz.size(); ++k) {
    s.freq_bins_hz[k] = static_cast<double>(k) * s.resolution_hz;
  }

  const double peak = *std::max_element(s.magnitude.begin(), s.magnitude.end());
  s.peak_amplitude = 2.0 * peak / window_sum;
  s.mag_db.resize(s.magnitude.size());
  for (std::size_t k = 0; k < s.mag_db.size(); ++k) {
    // An all-zero record (exactly constant input) is reported flat at 0 dB.
    s.mag_db[k] = peak > 0.0 ? std::max(kDbFloor, 20.0 * std::log10(s.magnitude[k] / peak)) : 0.0;
  }
  return s;
}

VitalEstimate find_vital_peaks(const Spectrum& s, const PeakSearch& search) {
  if (s.mag_db.size() < 3 || s.freq_bins_hz.size() != s.mag_db.size()) {
    throw ParameterError("spectrum is too short or inconsistent");
  }
  check_band(search.respiration, s, "respiration");
  check_band(search.heartbeat, s, "heartbeat");
  const bool disjoint = search.respiration.hi_hz < search.heartbeat.lo_hz ||
                        search.heartbeat.hi_hz < search.respiration.lo_hz;
  if (!disjoint) throw ParameterError("respiration and heartbeat bands overlap");
  if (!std::isfinite(search.harmonic_tol_hz) || search.harmonic_tol_hz < 0.0) {
    throw ParameterError("harmonic tolerance must be >= 0");
  }

  const double top_db = *std::max_element(s.mag_db.begin(), s.mag_db.end());
  auto amplitude_of = [&](double db) {
    return s.peak_amplitude * std::pow(10.0, (db - top_db) / 20.0);
  };

  auto search_band = [&](const Band& band, auto&& excluded) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < s.freq_bins_hz.size(); ++k) {
      const double f = s.freq_bins_hz[k];
      if (f < band.lo_hz || f > band.hi_hz || excluded(f)) continue;
      if (!best || s.mag_db[k] > s.mag_db[*best]) best = k;
    }
    return best;
  };
  auto clamp_to = [](double f, const Band& band) { return std::clamp(f, band.lo_hz, band.hi_hz); };

  const auto resp_bin = search_band(search.respiration, [](double) { return false; });
  if (!resp_bin) throw EstimationError("no spectral bins inside the respiration band");
  const BandPeak resp = refine(s, *resp_bin);
  if (amplitude_of(resp.db) < search.min_peak_amplitude) {
    throw EstimationError("no peak above floor in the respiration band");
  }
  const double f_resp = clamp_to(resp.freq_hz, search.respiration);

  const auto heart_bin = search_band(search.heartbeat, [&](double f) {
    for (int h = 2; h <= 4; ++h) {
      if (std::abs(f - h * f_resp) <= search.harmonic_tol_hz) return true;
    }
    return false;
  });
  if (!heart_bin) throw EstimationError("heartbeat masked by respiration harmonics");
  const BandPeak heart = refine(s, *heart_bin);
  if (amplitude_of(heart.db) < search.min_peak_amplitude) {
    throw EstimationError("no peak above floor in the heartbeat band");
  }

  VitalEstimate out;
  out.respiration_hz = f_resp;
  out.respiration_peak_db = resp.db - top_db;
  out.heartbeat_hz = clamp_to(heart.freq_hz, search.heartbeat);
  out.heartbeat_peak_db = heart.db - top_db;
  return out;
}

TimeSeries bandpass(const TimeSeries& x, double f_lo, double f_hi) {
  const double fs = x.sample_rate_hz();
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || f_lo < 0.0 || f_lo >= f_hi ||
      f_hi >= 0.5 * fs) {
    throw ParameterError("band-pass edges must satisfy 0 <= f_lo < f_hi < fs/2");
  }
  std::vector<Biquad> sections = butterworth_lowpass(4, f_hi, fs);
  double slowest = f_hi;
  if (f_lo > 0.0) {
    auto hp = butterworth_highpass(4, f_lo, fs);
    sections.insert(sections.begin(), hp.begin(), hp.end());
    slowest = f_lo;
  }
  const auto pad = static_cast<std::size_t>(std::ceil(3.0 * fs / slowest));
  return TimeSeries(fs, filtfilt(sections, x.samples(), pad), x.t0_s());
}

TimeSeries detrend(const TimeSeries& x, Detrend kind) {
  if (kind == Detrend::none) return x;
  const auto v = x.samples();
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double s : v) mean += s;
  mean /= static_cast<double>(n);

  double slope = 0.0;
  const double centre = 0.5 * static_cast<double>(n - 1);
  if (kind == Detrend::linear && n > 1) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) - centre;
      num += t * (v[i] - mean);
      den += t * t;
    }
    slope = num / den;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = v[i] - mean - slope * (static_cast<double>(i) - centre);
  }
  return TimeSeries(x.sample_rate_hz(), std::move(out), x.t0_s());
}

Window parse_window(std::string_view name) {
  if (name == "hann") return Window::hann;
  if (name == "rectangular") return Window::rectangular;
  throw ParameterError("unknown window '" + std::string(name) + "' (expected hann|rectangular)");
}

std::string_view to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

Detrend parse_detrend(std::string_view name) {
  if (name == "none") return Detrend::none;
  if (name == "mean") return Detrend::mean;
  if (name == "linear") return Detrend::linear;
  throw ParameterError("unknown detrend '" + std::string(name) + "' (expected none|mean|linear)");
}

std::string_view to_string(Detrend d) {
  switch (d) {
    case Detrend::none: return "none";
    case Detrend::mean: return "mean";
    case Detrend::linear: return "linear";
  }
  return "none";
}

}  // namespace silradar::dsp
