#include "silradar/signal.hpp"

#include <cmath>
#include <string>

#include "silradar/errors.hpp"

namespace silradar {

namespace {

void check_rate(double fs) {
  if (!std::isfinite(fs) || fs <= 0.0) {
    throw ParameterError("sample rate must be finite and positive, got " + std::to_string(fs));
  }
}

}  // namespace

TimeSeries::TimeSeries(double sample_rate_hz, std::vector<double> samples, double t0_s)
    : sample_rate_hz_(sample_rate_hz), samples_(std::move(samples)), t0_s_(t0_s) {
  check_rate(sample_rate_hz_);
  if (samples_.empty()) {
    throw ParameterError("time series needs at least one sample");
  }
  if (!std::isfinite(t0_s_)) {
    throw ParameterError("time series start time must be finite");
  }
}

double TimeSeries::duration_s() const noexcept {
  return static_cast<double>(samples_.size() - 1) / sample_rate_hz_;
}

double TimeSeries::time_at(std::size_t n) const noexcept {
  return t0_s_ + static_cast<double>(n) / sample_rate_hz_;
}

ComplexBaseband::ComplexBaseband(double sample_rate_hz, std::vector<double> i_samples,
                                 std::vector<double> q_samples)
    : sample_rate_hz_(sample_rate_hz), i_(std::move(i_samples)), q_(std::move(q_samples)) {
  check_rate(sample_rate_hz_);
  if (i_.size() != q_.size()) {
    throw ParameterError("I and Q rails differ in length (" + std::to_string(i_.size()) +
                         " vs " + std::to_string(q_.size()) + ")");
  }
}

ComplexBaseband::ComplexBaseband(double sample_rate_hz,
                                 std::span<const std::complex<double>> samples)
    : sample_rate_hz_(sample_rate_hz) {
  check_rate(sample_rate_hz_);
  i_.reserve(samples.size());
  q_.reserve(samples.size());
  for (const auto& s : samples) {
    i_.push_back(s.real());
    q_.push_back(s.imag());
  }
}

double ComplexBaseband::mean_power() const noexcept {
  if (i_.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t n = 0; n < i_.size(); ++n) {
    acc += i_[n] * i_[n] + q_[n] * q_[n];
  }
  return acc / static_cast<double>(i_.size());
}

}  // namespace silradar
