#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace silradar {

/// Uniformly sampled real signal. The duration is exactly
/// (size() - 1) / sample_rate_hz(); nothing is ever resampled implicitly.
class TimeSeries {
 public:
  TimeSeries(double sample_rate_hz, std::vector<double> samples, double t0_s = 0.0);

  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double t0_s() const noexcept { return t0_s_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept;
  double time_at(std::size_t n) const noexcept;

  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t n) const noexcept { return samples_[n]; }

 private:
  double sample_rate_hz_;
  std::vector<double> samples_;
  double t0_s_;
};

/// Complex baseband record stored as separate I and Q rails.
class ComplexBaseband {
 public:
  ComplexBaseband(double sample_rate_hz, std::vector<double> i_samples,
                  std::vector<double> q_samples);
  ComplexBaseband(double sample_rate_hz, std::span<const std::complex<double>> samples);

  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return i_.size(); }

  std::span<const double> i_samples() const noexcept { return i_; }
  std::span<const double> q_samples() const noexcept { return q_; }
  std::complex<double> operator[](std::size_t n) const noexcept { return {i_[n], q_[n]}; }

  /// Mean of |s[n]|^2 over the record.
  double mean_power() const noexcept;

 private:
  double sample_rate_hz_;
  std::vector<double> i_;
  std::vector<double> q_;
};

}  // namespace silradar
