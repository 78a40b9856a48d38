#include "silradar/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "silradar/errors.hpp"

namespace silradar::dsp {

namespace {

void check_design(int order, double cutoff_hz, double fs) {
  if (order < 2 || order % 2 != 0) throw ParameterError("Butterworth order must be even and >= 2");
  if (!std::isfinite(fs) || fs <= 0.0) throw ParameterError("sample rate must be positive");
  if (!std::isfinite(cutoff_hz) || cutoff_hz <= 0.0 || cutoff_hz >= 0.5 * fs) {
    throw ParameterError("cutoff must lie strictly between 0 and fs/2");
  }
}

// Pole-pair quality factors of an order-n Butterworth prototype.
std::vector<double> butterworth_q(int order) {
  std::vector<double> q;
  for (int k = 0; k < order / 2; ++k) {
    q.push_back(1.0 / (2.0 * std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order))));
  }
  return q;
}

double dc_gain(const Biquad& s) { return (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2); }

void run_pass(std::span<const Biquad> sections, std::vector<double>& y) {
  for (const auto& s : sections) {
    // Transposed direct form II, initialised at the steady state of y[0].
    const double x0 = y.front();
    const double y0 = dc_gain(s) * x0;
    double z1 = y0 - s.b0 * x0;
    double z2 = s.b2 * x0 - s.a2 * y0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs) {
  check_design(order, cutoff_hz, fs);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / fs;
  const double c = std::cos(w0);
  std::vector<Biquad> out;
  for (double q : butterworth_q(order)) {
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    out.push_back({0.5 * (1.0 - c) / a0, (1.0 - c) / a0, 0.5 * (1.0 - c) / a0, -2.0 * c / a0,
                   (1.0 - alpha) / a0});
  }
  return out;
}

std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs) {
  check_design(order, cutoff_hz, fs);
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / fs;
  const double c = std::cos(w0);
  std::vector<Biquad> out;
  for (double q : butterworth_q(order)) {
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    out.push_back({0.5 * (1.0 + c) / a0, -(1.0 + c) / a0, 0.5 * (1.0 + c) / a0, -2.0 * c / a0,
                   (1.0 - alpha) / a0});
  }
  return out;
}

std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x,
                             std::size_t pad) {
  if (x.empty()) return {};
  const std::size_t n = x.size();
  pad = std::min(pad, n - 1);

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

  run_pass(sections, ext);
  std::reverse(ext.begin(), ext.end());
  run_pass(sections, ext);
  std::reverse(ext.begin(), ext.end());

  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace silradar::dsp
