#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "silradar/errors.hpp"
#include "silradar/receiver.hpp"
#include "silradar/silo.hpp"

using namespace silradar;
using silo::SiloConfig;

namespace {

constexpr double pi = std::numbers::pi;

double rel_rms(const TimeSeries& got, const TimeSeries& want, std::size_t skip = 1) {
  double err = 0.0, ref = 0.0;
  for (std::size_t n = skip; n < want.size(); ++n) {
    err += (got[n] - want[n]) * (got[n] - want[n]);
    ref += want[n] * want[n];
  }
  return std::sqrt(err / ref);
}

}  // namespace

TEST_CASE("wavelength") {
  CHECK(silo::wavelength(2.4e9) == doctest::Approx(0.124913524).epsilon(1e-9));
  CHECK(silo::wavelength(299'792'458.0) == 1.0);
  CHECK(silo::wavelength(4.8e9) == silo::wavelength(2.4e9) / 2.0);
  CHECK_THROWS_AS(silo::wavelength(0.0), ParameterError);
  CHECK_THROWS_AS(silo::wavelength(-1.0), ParameterError);
  SiloConfig cfg;
  CHECK(cfg.wavelength_m() == silo::wavelength(cfg.carrier_freq_hz));
}

TEST_CASE("config validation") {
  SiloConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.locking_range_rad_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = {};
  cfg.nominal_range_m = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("deviation at special ranges") {
  SiloConfig cfg;
  const double lambda = cfg.wavelength_m();
  const TimeSeries still(100.0, std::vector<double>(64, 0.0));

  cfg.nominal_range_m = lambda / 2.0;
  const auto null_dev = silo::instantaneous_freq_deviation(still, cfg);
  for (double v : null_dev.samples()) CHECK(std::abs(v) <= 1e-12 * cfg.locking_range_rad_s);

  cfg.nominal_range_m = lambda / 8.0;
  const auto edge_dev = silo::instantaneous_freq_deviation(still, cfg);
  for (double v : edge_dev.samples()) {
    CHECK(v == doctest::Approx(-cfg.locking_range_rad_s).epsilon(1e-15));
  }
}

TEST_CASE("deviation matches a brute-force evaluation at 75 cm") {
  SiloConfig cfg;
  const double lambda = 299'792'458.0 / 2.4e9;
  const double fs = 50.0;
  std::vector<double> x(3000);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = 5e-3 * std::sin(2 * pi * 0.46 * n / fs);
  const TimeSeries chest(fs, x, 2.0);
  const auto dev = silo::instantaneous_freq_deviation(chest, cfg);
  REQUIRE(dev.size() == chest.size());
  CHECK(dev.sample_rate_hz() == fs);
  CHECK(dev.t0_s() == 2.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double want = -cfg.locking_range_rad_s * std::sin(4 * pi * (0.75 + x[n]) / lambda);
    REQUIRE(std::abs(dev[n] - want) <= 1e-13 * cfg.locking_range_rad_s);
  }

  // Strongest non-DC line of the deviation sits at the respiration rate
  // (brute-force DFT over a whole number of respiration periods is not
  // needed; the 0.46 Hz line dominates 0.92 Hz for this small phase swing).
  auto dft_mag = [&](double f) {
    double re = 0, im = 0;
    for (std::size_t n = 0; n < dev.size(); ++n) {
      re += dev[n] * std::cos(2 * pi * f * n / fs);
      im -= dev[n] * std::sin(2 * pi * f * n / fs);
    }
    return std::hypot(re, im);
  };
  double best_f = 0, best = -1;
  for (double f = 0.1; f <= 3.0; f += 0.01) {
    const double m = dft_mag(f);
    if (m > best) best = m, best_f = f;
  }
  CHECK(best_f == doctest::Approx(0.46).epsilon(0.03));
}

TEST_CASE("locking-range bound and odd symmetry") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> range(0.05, 5.0), disp(-0.02, 0.02), lock(1.0, 1e6);
  for (int trial = 0; trial < 500; ++trial) {
    SiloConfig cfg;
    cfg.nominal_range_m = range(rng);
    cfg.locking_range_rad_s = lock(rng);
    std::vector<double> x(16);
    for (auto& v : x) v = disp(rng);
    const auto dev = silo::instantaneous_freq_deviation(TimeSeries(10.0, x), cfg);
    for (double v : dev.samples()) REQUIRE(std::abs(v) <= cfg.locking_range_rad_s);
  }

  // Reflecting the round-trip phase about a null point negates the deviation.
  SiloConfig cfg;
  const double lambda = cfg.wavelength_m();
  const double null_point = 6.0 * lambda / 2.0;
  cfg.nominal_range_m = null_point;
  std::uniform_real_distribution<double> off(-lambda / 4, lambda / 4);
  for (int trial = 0; trial < 200; ++trial) {
    const double d = off(rng);
    const auto plus = silo::instantaneous_freq_deviation(TimeSeries(1.0, {d}), cfg);
    const auto minus = silo::instantaneous_freq_deviation(TimeSeries(1.0, {-d}), cfg);
    REQUIRE(plus[0] == doctest::Approx(-minus[0]).epsilon(1e-9));
  }
}

TEST_CASE("range periodicity of half a wavelength") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> range(0.1, 3.0), disp(-5e-3, 5e-3);
  for (int trial = 0; trial < 100; ++trial) {
    SiloConfig a;
    a.nominal_range_m = range(rng);
    SiloConfig b = a;
    b.nominal_range_m = a.nominal_range_m + a.wavelength_m() / 2.0;
    std::vector<double> x(32);
    for (auto& v : x) v = disp(rng);
    const TimeSeries chest(100.0, x);
    const auto da = silo::instantaneous_freq_deviation(chest, a);
    const auto db = silo::instantaneous_freq_deviation(chest, b);
    for (std::size_t n = 0; n < x.size(); ++n) {
      REQUIRE(std::abs(da[n] - db[n]) <= 1e-12 * a.locking_range_rad_s);
    }
  }
}

TEST_CASE("FM synthesis") {
  SUBCASE("zero deviation is a constant 1 + 0j") {
    const auto s = silo::synthesize_silo_output(TimeSeries(100.0, std::vector<double>(50, 0.0)), 100.0);
    for (std::size_t n = 0; n < s.size(); ++n) {
      CHECK(s[n].real() == 1.0);
      CHECK(s[n].imag() == 0.0);
    }
  }
  SUBCASE("unit modulus for a random deviation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    std::vector<double> d(5000);
    for (auto& v : d) v = u(rng);
    const auto s = silo::synthesize_silo_output(TimeSeries(1000.0, d), 1000.0);
    for (std::size_t n = 0; n < s.size(); ++n) REQUIRE(std::abs(std::abs(s[n]) - 1.0) <= 1e-12);
  }
  SUBCASE("trapezoidal phase") {
    const std::vector<double> d{10.0, 30.0, -20.0, 5.0};
    const double fs = 100.0;
    const auto s = silo::synthesize_silo_output(TimeSeries(fs, d), fs);
    double theta = 0.0;
    CHECK(std::arg(s[0]) == 0.0);
    for (std::size_t n = 1; n < d.size(); ++n) {
      theta += 0.5 * (d[n] + d[n - 1]) / fs;
      CHECK(std::arg(s[n]) == doctest::Approx(theta).epsilon(1e-14));
    }
  }
  SUBCASE("constant 10 Hz tone is recovered by the discriminator") {
    const double fs = 1000.0;
    const auto s = silo::synthesize_silo_output(TimeSeries(fs, std::vector<double>(2000, 2 * pi * 10.0)), fs);
    const auto f = receiver::discriminate(s);
    for (double v : f.samples()) REQUIRE(v / (2 * pi) == doctest::Approx(10.0).epsilon(1e-6));
  }
  SUBCASE("sample-rate mismatch and deviation beyond Nyquist") {
    CHECK_THROWS_AS(silo::synthesize_silo_output(TimeSeries(100.0, {0.0, 1.0}), 200.0), ConfigurationError);
    CHECK_THROWS_AS(silo::synthesize_silo_output(TimeSeries(100.0, {0.0, 2 * pi * 60.0}), 100.0),
                    ConfigurationError);
  }
}

TEST_CASE("FM round trip under the 50x oversampling rule") {
  const double fs = 1000.0;
  const double peak = 2 * pi * fs / 50.0;  // fs = 50 * peak / 2pi
  // The backward difference lags by half a sample, so the relative error
  // grows as pi * f_mod / fs; modulation stays at vital-sign rates here.
  const std::size_t n_samples = 4000;

  auto check = [&](std::vector<double> d) {
    const TimeSeries dev(fs, std::move(d));
    const auto back = receiver::discriminate(silo::synthesize_silo_output(dev, fs));
    CHECK(rel_rms(back, dev) < 0.01);
  };
  std::vector<double> sine(n_samples), constant(n_samples, peak), chirp(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double t = n / fs;
    sine[n] = peak * std::sin(2 * pi * 3.0 * t);
    // 0.5 Hz sweeping to 3 Hz over the record.
    chirp[n] = peak * std::sin(2 * pi * (0.5 * t + 0.3125 * t * t));
  }
  check(sine);
  check(constant);
  check(chirp);
}
