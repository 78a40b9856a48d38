#pragma once

#include <span>
#include <vector>

namespace silradar::dsp {

/// Second-order section, a0 normalised to 1.
struct Biquad {
  double b0, b1, b2, a1, a2;
};

/// Butterworth designs as cascades of bilinear-transform biquads (prewarped
/// at the cutoff). `order` must be even and >= 2.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double fs);
std::vector<Biquad> butterworth_highpass(int order, double cutoff_hz, double fs);

/// Zero-phase forward-backward filtering. The record is extended by odd
/// reflection over `pad` samples (clamped to size - 1) and each pass starts
/// from the steady state of its first input sample.
std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x,
                             std::size_t pad);

}  // namespace silradar::dsp
