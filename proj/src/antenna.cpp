#include "silradar/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "silradar/errors.hpp"

namespace silradar::antenna {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParameterError(std::string(name) + " must be finite and positive");
  }
}

double sinc(double u) { return std::abs(u) < 1e-12 ? 1.0 : std::sin(u) / u; }

}  // namespace

void PatchSpec::validate() const {
  require_positive(width_m, "patch width");
  require_positive(length_m, "patch length");
  require_positive(feed_width_m, "feed width");
  require_positive(feed_length_m, "feed length");
  require_positive(via_diameter_m, "via diameter");
  if (!std::isfinite(substrate_eps_r) || substrate_eps_r < 1.0) {
    throw ParameterError("substrate relative permittivity must be >= 1");
  }
}

void ArraySpec::validate() const {
  if (elements.empty()) throw ParameterError("array has no elements");
  bool any_nonzero = false;
  for (const auto& e : elements) {
    if (!std::isfinite(e.x_m) || !std::isfinite(e.y_m)) {
      throw ParameterError("array element position must be finite");
    }
    if (!std::isfinite(e.weight.real()) || !std::isfinite(e.weight.imag())) {
      throw ParameterError("array excitation must be finite");
    }
    any_nonzero = any_nonzero || std::abs(e.weight) > 0.0;
  }
  if (!any_nonzero) throw ParameterError("array needs at least one nonzero excitation");
}

std::complex<double> ArraySpec::weight_sum() const noexcept {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& e : elements) sum += e.weight;
  return sum;
}

ArraySpec ArraySpec::uniform_grid(int rows, int cols, double spacing_m) {
  if (rows < 1 || cols < 1) throw ParameterError("array needs at least one row and column");
  if (!std::isfinite(spacing_m) || spacing_m < 0.0) {
    throw ParameterError("element spacing must be finite and >= 0");
  }
  ArraySpec spec;
  const double x0 = 0.5 * (cols - 1) * spacing_m;
  const double y0 = 0.5 * (rows - 1) * spacing_m;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      spec.elements.push_back({c * spacing_m - x0, r * spacing_m - y0, {1.0, 0.0}});
    }
  }
  return spec;
}

void FssSpec::validate() const {
  require_positive(unit_cell_size_m, "FSS unit cell size");
  require_positive(panel_width_m, "FSS panel width");
  require_positive(panel_height_m, "FSS panel height");
  require_positive(air_gap_m, "FSS air gap");
  require_positive(layer_gap_m, "FSS layer gap");
  if (grid_cols < 1 || grid_rows < 1 || layers < 1) {
    throw ParameterError("FSS cell counts and layer count must be >= 1");
  }
  if (!std::isfinite(reflection_mag) || reflection_mag < 0.0 || reflection_mag >= 1.0) {
    throw ParameterError("FSS reflection magnitude must lie in [0, 1), got " +
                         std::to_string(reflection_mag));
  }
  if (!std::isfinite(reflection_phase_rad) || !std::isfinite(ground_phase_rad)) {
    throw ParameterError("FSS reflection phases must be finite");
  }
  if (unit_cell_size_m * grid_cols > panel_width_m * (1.0 + 1e-12) ||
      unit_cell_size_m * grid_rows > panel_height_m * (1.0 + 1e-12)) {
    throw ParameterError("FSS unit cells do not fit on the panel");
  }
  for (double w : cross_geometry_m) {
    if (!std::isfinite(w) || w < 0.0) throw ParameterError("cross geometry must be finite and >= 0");
  }
}

double RadiationPattern::peak_directivity() const {
  if (directive_gain.empty()) throw ParameterError("empty radiation pattern");
  return *std::max_element(directive_gain.begin(), directive_gain.end());
}

std::complex<double> element_pattern(const PatchSpec& patch, double theta, double phi,
                                     double lambda) {
  if (theta > 0.5 * pi) return {0.0, 0.0};
  const double k = 2.0 * pi / lambda;
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  // Two radiating slots of width W separated by L, magnetic currents along y.
  const double slot = sinc(0.5 * k * patch.width_m * st * sp);
  const double pair = std::cos(0.5 * k * patch.length_m * st * cp);
  const double polarization = std::sqrt(cp * cp + ct * ct * sp * sp);
  return {polarization * slot * pair, 0.0};
}

std::complex<double> array_factor(const ArraySpec& array, double theta, double phi,
                                  double lambda) {
  if (array.elements.empty()) throw ParameterError("array has no elements");
  if (!std::isfinite(lambda) || lambda <= 0.0) throw ParameterError("wavelength must be positive");
  const double k = 2.0 * pi / lambda;
  const double u = std::sin(theta) * std::cos(phi);
  const double v = std::sin(theta) * std::sin(phi);
  std::complex<double> af{0.0, 0.0};
  for (const auto& e : array.elements) {
    af += e.weight * std::polar(1.0, k * (e.x_m * u + e.y_m * v));
  }
  return af;
}

std::size_t theta_cells(double resolution_deg) {
  if (!std::isfinite(resolution_deg) || resolution_deg <= 0.0 || resolution_deg > 90.0) {
    throw ParameterError("grid resolution must lie in (0, 90] degrees");
  }
  const double cells = 180.0 / resolution_deg;
  const auto n = static_cast<std::size_t>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells) {
    throw ParameterError("grid resolution must divide 180 degrees evenly");
  }
  return n;
}

RadiationPattern total_pattern(ElementKind kind, const PatchSpec& patch, const ArraySpec& array,
                               double lambda, double resolution_deg) {
  array.validate();
  if (kind == ElementKind::patch) patch.validate();
  if (!std::isfinite(lambda) || lambda <= 0.0) throw ParameterError("wavelength must be positive");
  const std::size_t n_theta = theta_cells(resolution_deg);
  const std::size_t n_phi = 2 * n_theta;
  const double step = pi / static_cast<double>(n_theta);

  auto intensity = [kind, patch, array, lambda](double theta, double phi) {
    std::complex<double> field = array_factor(array, theta, phi, lambda);
    if (kind == ElementKind::patch) field *= element_pattern(patch, theta, phi, lambda);
    return std::norm(field);
  };

  RadiationPattern pattern;
  pattern.resolution_rad = step;
  pattern.theta_grid_rad.resize(n_theta);
  pattern.phi_grid_rad.resize(n_phi);
  for (std::size_t i = 0; i < n_theta; ++i) pattern.theta_grid_rad[i] = (i + 0.5) * step;
  for (std::size_t j = 0; j < n_phi; ++j) pattern.phi_grid_rad[j] = (j + 0.5) * step;

  pattern.directive_gain.resize(n_theta * n_phi);
  double radiated = 0.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = pattern.theta_grid_rad[i];
    double ring = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double u = intensity(theta, pattern.phi_grid_rad[j]);
      pattern.directive_gain[i * n_phi + j] = u;
      ring += u;
    }
    radiated += ring * std::sin(theta);
  }
  radiated *= step * step;
  if (!(radiated > 0.0)) throw ParameterError("pattern radiates no power");

  const double scale = 4.0 * pi / radiated;
  for (double& d : pattern.directive_gain) d *= scale;
  pattern.directivity_at = [intensity, scale](double theta, double phi) {
    return scale * intensity(theta, phi);
  };
  return pattern;
}

double fss_gain_enhancement(const FssSpec& fss) {
  const double g = fss.reflection_mag;
  if (!std::isfinite(g) || g < 0.0 || g >= 1.0) {
    throw ParameterError("reflection magnitude must lie in [0, 1), got " + std::to_string(g));
  }
  return 10.0 * std::log10((1.0 + g) / (1.0 - g));
}

double prs_resonance_height(const FssSpec& fss, double lambda, int order) {
  if (!std::isfinite(lambda) || lambda <= 0.0) throw ParameterError("wavelength must be positive");
  if (order < 0) throw ParameterError("resonance order must be >= 0");
  return (fss.reflection_phase_rad + fss.ground_phase_rad) * lambda / (4.0 * pi) +
         order * lambda / 2.0;
}

double system_gain(const RadiationPattern& pattern, double efficiency, double fss_delta_db) {
  if (!std::isfinite(efficiency) || efficiency <= 0.0 || efficiency > 1.0) {
    throw ParameterError("efficiency must lie in (0, 1], got " + std::to_string(efficiency));
  }
  return 10.0 * std::log10(pattern.peak_directivity()) + 10.0 * std::log10(efficiency) +
         fss_delta_db;
}

Beamwidths beamwidths(const RadiationPattern& pattern, CutPlane cut, double step_deg) {
  if (!pattern.directivity_at) throw ParameterError("pattern has no evaluator");
  if (!std::isfinite(step_deg) || step_deg <= 0.0 || step_deg > 10.0) {
    throw ParameterError("cut step must lie in (0, 10] degrees");
  }
  const double phi_cut = cut == CutPlane::e_plane ? 0.0 : 0.5 * pi;
  const auto m = static_cast<std::size_t>(std::llround(360.0 / step_deg));
  const double step = 2.0 * pi / static_cast<double>(m);

  // Signed angle a in [-pi, pi): a >= 0 lies in the phi_cut half-plane,
  // a < 0 in the opposite one.
  std::vector<double> cut_gain(m);
  for (std::size_t s = 0; s < m; ++s) {
    const double a = -pi + static_cast<double>(s) * step;
    cut_gain[s] = a >= 0.0 ? pattern.directivity_at(a, phi_cut)
                           : pattern.directivity_at(-a, phi_cut + pi);
  }
  const auto peak_it = std::max_element(cut_gain.begin(), cut_gain.end());
  const auto peak = static_cast<std::size_t>(peak_it - cut_gain.begin());
  const double peak_value = *peak_it;
  const double half = 0.5 * peak_value;
  const double null_level = 0.01 * peak_value;

  auto at = [&](std::ptrdiff_t offset) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    return cut_gain[static_cast<std::size_t>(((static_cast<std::ptrdiff_t>(peak) + offset) % mm + mm) % mm)];
  };

  struct Side {
    double half_power;
    std::optional<double> null;
  };
  auto walk = [&](int dir) {
    Side side{};
    bool crossed = false;
    const auto limit = static_cast<std::ptrdiff_t>(m / 2);
    for (std::ptrdiff_t s = 1; s <= limit; ++s) {
      const double prev = at(dir * (s - 1));
      const double cur = at(dir * s);
      if (cur < half) {
        side.half_power = (static_cast<double>(s - 1) + (prev - half) / (prev - cur)) * step;
        crossed = true;
        break;
      }
    }
    if (!crossed || !(peak_value > 0.0)) {
      throw DegeneratePatternError("no -3 dB crossing on the cut");
    }
    for (std::ptrdiff_t s = 1; s <= limit; ++s) {
      if (at(dir * s) >= at(dir * (s - 1))) {
        const double floor_value = at(dir * (s - 1));
        if (floor_value <= null_level) side.null = static_cast<double>(s - 1) * step;
        break;
      }
    }
    return side;
  };

  const Side right = walk(+1);
  const Side left = walk(-1);
  constexpr double deg = 180.0 / pi;
  Beamwidths out;
  out.half_power_deg = (right.half_power + left.half_power) * deg;
  if (right.null && left.null) out.first_null_deg = (*right.null + *left.null) * deg;
  return out;
}

void AntennaSystemSpec::validate() const {
  if (element == ElementKind::patch) patch.validate();
  fss.validate();
  if (array_rows < 1 || array_cols < 1) throw ParameterError("array needs at least one element");
  if (!std::isfinite(element_spacing_m) || element_spacing_m <= 0.0) {
    throw ParameterError("element spacing must be positive");
  }
  if (!std::isfinite(efficiency) || efficiency <= 0.0 || efficiency > 1.0) {
    throw ParameterError("efficiency must lie in (0, 1]");
  }
  theta_cells(grid_resolution_deg);
}

AntennaAnalysis analyze(const AntennaSystemSpec& spec, double lambda) {
  spec.validate();
  AntennaAnalysis out{total_pattern(spec.element, spec.patch, spec.array(), lambda,
                                    spec.grid_resolution_deg),
                      {}};
  out.gain.directivity_dbi = 10.0 * std::log10(out.pattern.peak_directivity());
  out.gain.efficiency_db = 10.0 * std::log10(spec.efficiency);
  out.gain.fss_delta_db = fss_gain_enhancement(spec.fss);
  out.gain.total_gain_dbi = system_gain(out.pattern, spec.efficiency, out.gain.fss_delta_db);
  return out;
}

}  // namespace silradar::antenna
