#pragma once

#include <string_view>
#include <vector>

#include "silradar/signal.hpp"

namespace silradar::dsp {

enum class Window { rectangular, hann };
enum class Detrend { none, mean, linear };

/// One-sided magnitude spectrum normalised to a 0 dB peak.
struct Spectrum {
  std::vector<double> freq_bins_hz;
  std::vector<double> mag_db;
  double resolution_hz = 0.0;
  /// Un-normalised |X_k|, same bins as mag_db.
  std::vector<double> magnitude;
  /// Sinusoid amplitude equivalent of the 0 dB bin (2 max|X| / sum(w)),
  /// in units of the analysed series.
  double peak_amplitude = 0.0;
};

/// Removes the mean, applies the window, zero-pads to N * zero_pad_factor
/// points and keeps bins 0 .. fs/2.
Spectrum compute_spectrum(const TimeSeries& x, Window window, int zero_pad_factor);

struct Band {
  double lo_hz;
  double hi_hz;

  bool operator==(const Band&) const = default;
};

struct PeakSearch {
  Band respiration{0.1, 0.7};
  Band heartbeat{0.8, 3.0};
  double harmonic_tol_hz = 0.05;
  /// Band peaks below this amplitude (series units) are not peaks.
  double min_peak_amplitude = 1e-6;

  bool operator==(const PeakSearch&) const = default;
};

struct VitalEstimate {
  double respiration_hz = 0.0;
  double heartbeat_hz = 0.0;
  double respiration_peak_db = 0.0;
  double heartbeat_peak_db = 0.0;
};

/// Band-limited argmax with 3-point parabolic refinement on the dB curve.
/// Heartbeat bins within harmonic_tol_hz of 2x, 3x and 4x the respiration
/// estimate are skipped.
VitalEstimate find_vital_peaks(const Spectrum& s, const PeakSearch& search);

/// Zero-phase band-pass: 4th-order Butterworth high-pass at f_lo (omitted
/// when f_lo == 0) and 4th-order Butterworth low-pass at f_hi, run forward
/// and backward.
TimeSeries bandpass(const TimeSeries& x, double f_lo, double f_hi);

TimeSeries detrend(const TimeSeries& x, Detrend kind);

Window parse_window(std::string_view name);
std::string_view to_string(Window w);
Detrend parse_detrend(std::string_view name);
std::string_view to_string(Detrend d);

}  // namespace silradar::dsp
