#pragma once
// Independent reference computations shared by the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "silradar/antenna.hpp"

namespace oracle {

using silradar::antenna::ArraySpec;
using silradar::antenna::RadiationPattern;

inline constexpr double pi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [a, b] by Newton iteration on P_n.
struct Rule {
  std::vector<double> x, w;
};

inline Rule gauss_legendre(int n, double a, double b) {
  Rule r;
  for (int i = 1; i <= n; ++i) {
    double z = std::cos(pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x.push_back(0.5 * (b - a) * z + 0.5 * (b + a));
    r.w.push_back((b - a) / ((1.0 - z * z) * dp * dp));
  }
  return r;
}

// (1/4pi) * integral of D over the sphere. Theta uses Gauss-Legendre split
// at the horizon (the patch pattern is cut off there), phi the periodic
// trapezoid rule.
inline double sphere_mean(const RadiationPattern& p) {
  double total = 0.0;
  const int n_phi = 720;
  for (auto [a, b] : {std::pair{0.0, pi / 2}, std::pair{pi / 2, pi}}) {
    const Rule r = gauss_legendre(96, a, b);
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      double ring = 0.0;
      for (int j = 0; j < n_phi; ++j) ring += p.directivity_at(r.x[i], 2 * pi * j / n_phi);
      total += r.w[i] * std::sin(r.x[i]) * ring * (2 * pi / n_phi);
    }
  }
  return total / (4 * pi);
}

inline std::complex<double> phasor_sum(const ArraySpec& a, double theta, double phi, double lambda) {
  std::complex<double> sum = 0.0;
  for (const auto& e : a.elements) {
    const double path = e.x_m * std::sin(theta) * std::cos(phi) + e.y_m * std::sin(theta) * std::sin(phi);
    const double arg = 2 * pi * path / lambda;
    sum += e.weight * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return sum;
}

}  // namespace oracle
