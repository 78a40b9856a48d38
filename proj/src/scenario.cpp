#include "silradar/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace silradar {

namespace {

using Kind = ScenarioError::Kind;

/// Value parse failure; the parser attaches the position.
struct BadValue {
  std::string message;
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw BadValue{"expected a decimal number"};
  }
  if (!std::isfinite(v)) throw BadValue{"number must be finite"};
  return v;
}

template <typename Int>
Int parse_integer(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  Int v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw BadValue{"expected an integer"};
  }
  return v;
}

bool parse_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw BadValue{"expected true or false"};
}

struct Field {
  std::string_view key;
  std::function<void(Scenario&, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

template <typename Access>
Field real(std::string_view key, Access access) {
  return {key, [access](Scenario& s, std::string_view v) { access(s) = parse_double(v); },
          [access](const Scenario& s) { return format_double(access(s)); }};
}

template <typename Access>
Field integer(std::string_view key, Access access) {
  using Int = std::remove_cvref_t<decltype(access(std::declval<Scenario&>()))>;
  return {key, [access](Scenario& s, std::string_view v) { access(s) = parse_integer<Int>(v); },
          [access](const Scenario& s) { return std::to_string(access(s)); }};
}

template <typename Access>
Field boolean(std::string_view key, Access access) {
  return {key, [access](Scenario& s, std::string_view v) { access(s) = parse_bool(v); },
          [access](const Scenario& s) {
            return std::string(access(s) ? "true" : "false");
          }};
}

// Enumerations reuse the modules' own parse/to_string pairs.
template <typename Access, typename Parse, typename Print>
Field enumeration(std::string_view key, Access access, Parse parse, Print print) {
  return {key,
          [access, parse](Scenario& s, std::string_view v) {
            try {
              access(s) = parse(v);
            } catch (const ParameterError& e) {
              throw BadValue{e.what()};
            }
          },
          [access, print](const Scenario& s) {
            return std::string(print(access(s)));
          }};
}

antenna::ElementKind parse_element(std::string_view v) {
  if (v == "patch") return antenna::ElementKind::patch;
  if (v == "isotropic") return antenna::ElementKind::isotropic;
  throw ParameterError("unknown element model '" + std::string(v) + "' (expected patch|isotropic)");
}

std::string_view print_element(antenna::ElementKind k) {
  return k == antenna::ElementKind::patch ? "patch" : "isotropic";
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // vitals
    f.push_back(real("vitals.respiration_rate_hz", [](auto& s) -> auto& { return s.vitals.respiration_rate_hz; }));
    f.push_back(real("vitals.respiration_amp_m", [](auto& s) -> auto& { return s.vitals.respiration_amp_m; }));
    f.push_back(real("vitals.respiration_phase_rad", [](auto& s) -> auto& { return s.vitals.respiration_phase_rad; }));
    f.push_back(real("vitals.heartbeat_rate_hz", [](auto& s) -> auto& { return s.vitals.heartbeat_rate_hz; }));
    f.push_back(real("vitals.heartbeat_amp_m", [](auto& s) -> auto& { return s.vitals.heartbeat_amp_m; }));
    f.push_back(real("vitals.heartbeat_phase_rad", [](auto& s) -> auto& { return s.vitals.heartbeat_phase_rad; }));
    // silo
    f.push_back(real("silo.carrier_freq_hz", [](auto& s) -> auto& { return s.silo.carrier_freq_hz; }));
    f.push_back(real("silo.locking_range_rad_s", [](auto& s) -> auto& { return s.silo.locking_range_rad_s; }));
    f.push_back(real("silo.nominal_range_m", [](auto& s) -> auto& { return s.silo.nominal_range_m; }));
    // antenna
    f.push_back(enumeration("antenna.element_model", [](auto& s) -> auto& { return s.antenna.element; }, parse_element, print_element));
    f.push_back(real("antenna.patch_width_m", [](auto& s) -> auto& { return s.antenna.patch.width_m; }));
    f.push_back(real("antenna.patch_length_m", [](auto& s) -> auto& { return s.antenna.patch.length_m; }));
    f.push_back(real("antenna.substrate_eps_r", [](auto& s) -> auto& { return s.antenna.patch.substrate_eps_r; }));
    f.push_back(real("antenna.feed_width_m", [](auto& s) -> auto& { return s.antenna.patch.feed_width_m; }));
    f.push_back(real("antenna.feed_length_m", [](auto& s) -> auto& { return s.antenna.patch.feed_length_m; }));
    f.push_back(real("antenna.via_diameter_m", [](auto& s) -> auto& { return s.antenna.patch.via_diameter_m; }));
    f.push_back(integer("antenna.array_rows", [](auto& s) -> auto& { return s.antenna.array_rows; }));
    f.push_back(integer("antenna.array_cols", [](auto& s) -> auto& { return s.antenna.array_cols; }));
    f.push_back(real("antenna.element_spacing_m", [](auto& s) -> auto& { return s.antenna.element_spacing_m; }));
    f.push_back(real("antenna.efficiency", [](auto& s) -> auto& { return s.antenna.efficiency; }));
    f.push_back(real("antenna.grid_resolution_deg", [](auto& s) -> auto& { return s.antenna.grid_resolution_deg; }));
    f.push_back({"antenna.gain_override_dbi",
                 [](Scenario& s, std::string_view v) {
                   if (v == "none") {
                     s.antenna_gain_override_dbi.reset();
                   } else {
                     s.antenna_gain_override_dbi = parse_double(v);
                   }
                 },
                 [](const Scenario& s) {
                   return s.antenna_gain_override_dbi ? format_double(*s.antenna_gain_override_dbi)
                                                      : std::string("none");
                 }});
    // fss
    f.push_back(real("fss.unit_cell_size_m", [](auto& s) -> auto& { return s.antenna.fss.unit_cell_size_m; }));
    f.push_back(integer("fss.grid_cols", [](auto& s) -> auto& { return s.antenna.fss.grid_cols; }));
    f.push_back(integer("fss.grid_rows", [](auto& s) -> auto& { return s.antenna.fss.grid_rows; }));
    f.push_back(integer("fss.layers", [](auto& s) -> auto& { return s.antenna.fss.layers; }));
    f.push_back(real("fss.panel_width_m", [](auto& s) -> auto& { return s.antenna.fss.panel_width_m; }));
    f.push_back(real("fss.panel_height_m", [](auto& s) -> auto& { return s.antenna.fss.panel_height_m; }));
    f.push_back(real("fss.reflection_mag", [](auto& s) -> auto& { return s.antenna.fss.reflection_mag; }));
    f.push_back(real("fss.reflection_phase_rad", [](auto& s) -> auto& { return s.antenna.fss.reflection_phase_rad; }));
    f.push_back(real("fss.ground_phase_rad", [](auto& s) -> auto& { return s.antenna.fss.ground_phase_rad; }));
    f.push_back(real("fss.air_gap_m", [](auto& s) -> auto& { return s.antenna.fss.air_gap_m; }));
    f.push_back(real("fss.layer_gap_m", [](auto& s) -> auto& { return s.antenna.fss.layer_gap_m; }));
    f.push_back(real("fss.cross_w1_m", [](auto& s) -> auto& { return s.antenna.fss.cross_geometry_m[0]; }));
    f.push_back(real("fss.cross_w2_m", [](auto& s) -> auto& { return s.antenna.fss.cross_geometry_m[1]; }));
    f.push_back(real("fss.cross_w3_m", [](auto& s) -> auto& { return s.antenna.fss.cross_geometry_m[2]; }));
    f.push_back(real("fss.cross_w4_m", [](auto& s) -> auto& { return s.antenna.fss.cross_geometry_m[3]; }));
    // channel
    f.push_back(real("channel.range_m", [](auto& s) -> auto& { return s.channel.range_m; }));
    f.push_back(real("channel.wall_loss_db", [](auto& s) -> auto& { return s.channel.wall_loss_db; }));
    f.push_back(real("channel.body_reflectivity_db", [](auto& s) -> auto& { return s.channel.body_reflectivity_db; }));
    f.push_back(real("channel.tx_power_dbm", [](auto& s) -> auto& { return s.channel.tx_power_dbm; }));
    f.push_back(real("channel.noise_floor_dbm", [](auto& s) -> auto& { return s.channel.noise_floor_dbm; }));
    f.push_back(boolean("channel.noise_enabled", [](auto& s) -> auto& { return s.noise_enabled; }));
    // receiver
    f.push_back(real("receiver.lna_gain_db", [](auto& s) -> auto& { return s.receiver.lna_gain_db; }));
    f.push_back(enumeration("receiver.discriminator", [](auto& s) -> auto& { return s.receiver.discriminator; },
                            receiver::parse_discriminator, [](receiver::Discriminator d) { return receiver::to_string(d); }));
    f.push_back(enumeration("receiver.demodulator", [](auto& s) -> auto& { return s.receiver.demodulator; },
                            receiver::parse_demodulator, [](receiver::Demodulator d) { return receiver::to_string(d); }));
    f.push_back(real("receiver.unwrap_threshold_rad", [](auto& s) -> auto& { return s.receiver.unwrap_threshold_rad; }));
    f.push_back(real("receiver.channel_bandwidth_hz", [](auto& s) -> auto& { return s.receiver.channel_bandwidth_hz; }));
    // dsp
    f.push_back(enumeration("dsp.window", [](auto& s) -> auto& { return s.dsp.window; },
                            dsp::parse_window, [](dsp::Window w) { return dsp::to_string(w); }));
    f.push_back(integer("dsp.zero_pad_factor", [](auto& s) -> auto& { return s.dsp.zero_pad_factor; }));
    f.push_back(enumeration("dsp.detrend", [](auto& s) -> auto& { return s.dsp.detrend; },
                            dsp::parse_detrend, [](dsp::Detrend d) { return dsp::to_string(d); }));
    f.push_back(boolean("dsp.bandpass_enabled", [](auto& s) -> auto& { return s.dsp.bandpass_enabled; }));
    f.push_back(real("dsp.resp_band_lo_hz", [](auto& s) -> auto& { return s.dsp.peaks.respiration.lo_hz; }));
    f.push_back(real("dsp.resp_band_hi_hz", [](auto& s) -> auto& { return s.dsp.peaks.respiration.hi_hz; }));
    f.push_back(real("dsp.heart_band_lo_hz", [](auto& s) -> auto& { return s.dsp.peaks.heartbeat.lo_hz; }));
    f.push_back(real("dsp.heart_band_hi_hz", [](auto& s) -> auto& { return s.dsp.peaks.heartbeat.hi_hz; }));
    f.push_back(real("dsp.harmonic_tol_hz", [](auto& s) -> auto& { return s.dsp.peaks.harmonic_tol_hz; }));
    f.push_back(real("dsp.min_peak_amplitude", [](auto& s) -> auto& { return s.dsp.peaks.min_peak_amplitude; }));
    // run
    f.push_back(real("run.duration_s", [](auto& s) -> auto& { return s.run.duration_s; }));
    f.push_back(real("run.sample_rate_hz", [](auto& s) -> auto& { return s.run.sample_rate_hz; }));
    f.push_back({"run.output_dir",
                 [](Scenario& s, std::string_view v) { s.run.output_dir = std::string(v); },
                 [](const Scenario& s) { return s.run.output_dir; }});
    f.push_back(integer("run.seed", [](auto& s) -> auto& { return s.channel.rng_seed; }));
    return f;
  }();
  return table;
}

bool valid_key_syntax(std::string_view key) {
  const auto dot = key.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == key.size()) return false;
  if (key.find('.', dot + 1) != std::string_view::npos) return false;
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string_view trim(std::string_view s, std::size_t& offset) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  offset += b;
  return s.substr(b, e - b);
}

void cross_field_error(const std::string& message) {
  throw ScenarioError(Kind::cross_field, 0, 0, message);
}

}  // namespace

ScenarioError::ScenarioError(Kind kind, std::size_t line, std::size_t column,
                             const std::string& message)
    : Error("scenario:" + std::to_string(line) + ":" + std::to_string(column) + ": " +
            std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::string_view to_string(ScenarioError::Kind kind) {
  switch (kind) {
    case Kind::syntax: return "syntax_error";
    case Kind::unknown_key: return "unknown_key";
    case Kind::duplicate_key: return "duplicate_key";
    case Kind::invalid_value: return "invalid_value";
    case Kind::cross_field: return "cross_field_violation";
  }
  return "error";
}

void Scenario::validate() const {
  try {
    vitals.validate();
    silo.validate();
    antenna.validate();
    channel.validate();
    receiver.validate();
    // Throws on a grid step that does not divide 180 degrees.
    antenna::total_pattern(antenna::ElementKind::isotropic, antenna.patch,
                           antenna::ArraySpec::uniform_grid(1, 1, 0.0), 1.0,
                           std::max(antenna.grid_resolution_deg, 45.0) == 45.0
                               ? antenna.grid_resolution_deg
                               : antenna.grid_resolution_deg);
  } catch (const ParameterError& e) {
    throw ScenarioError(Kind::invalid_value, 0, 0, e.what());
  }
  if (antenna_gain_override_dbi && !std::isfinite(*antenna_gain_override_dbi)) {
    throw ScenarioError(Kind::invalid_value, 0, 0, "antenna gain override must be finite");
  }
  if (dsp.zero_pad_factor < 1) {
    throw ScenarioError(Kind::invalid_value, 0, 0, "zero-pad factor must be >= 1");
  }
  if (!std::isfinite(run.duration_s) || run.duration_s <= 0.0) {
    throw ScenarioError(Kind::invalid_value, 0, 0, "run duration must be positive");
  }
  if (!std::isfinite(run.sample_rate_hz) || run.sample_rate_hz <= 0.0) {
    throw ScenarioError(Kind::invalid_value, 0, 0, "sample rate must be positive");
  }
  if (run.output_dir.empty()) {
    throw ScenarioError(Kind::invalid_value, 0, 0, "output directory must not be empty");
  }

  const double fs = run.sample_rate_hz;
  if (silo.nominal_range_m != channel.range_m) {
    cross_field_error("silo.nominal_range_m and channel.range_m describe the same distance");
  }
  if (fs <= 2.0 * vitals.max_rate_hz()) {
    cross_field_error("run.sample_rate_hz must exceed twice the highest vital rate");
  }
  if (fs <= silo.locking_range_rad_s / std::numbers::pi) {
    cross_field_error("run.sample_rate_hz cannot represent the locking-range deviation");
  }
  if (receiver.channel_bandwidth_hz > 0.0) {
    if (receiver.channel_bandwidth_hz >= 0.5 * fs) {
      cross_field_error("receiver.channel_bandwidth_hz must stay below fs/2");
    }
    if (receiver.channel_bandwidth_hz <= silo.locking_range_rad_s / (2.0 * std::numbers::pi)) {
      cross_field_error("receiver.channel_bandwidth_hz must exceed the locking range in Hz");
    }
  }
  if (std::llround(run.duration_s * fs) < 16) {
    cross_field_error("run.duration_s * run.sample_rate_hz must give at least 16 samples");
  }
  const auto& p = dsp.peaks;
  for (const dsp::Band* b : {&p.respiration, &p.heartbeat}) {
    if (b->lo_hz < 0.0 || b->lo_hz >= b->hi_hz) {
      cross_field_error("dsp bands must satisfy 0 <= lo < hi");
    }
    if (b->hi_hz >= 0.5 * fs) cross_field_error("dsp bands must stay below fs/2");
  }
  if (!(p.respiration.hi_hz < p.heartbeat.lo_hz || p.heartbeat.hi_hz < p.respiration.lo_hz)) {
    cross_field_error("respiration and heartbeat bands overlap");
  }
  if (p.harmonic_tol_hz < 0.0 || p.min_peak_amplitude < 0.0) {
    cross_field_error("dsp.harmonic_tol_hz and dsp.min_peak_amplitude must be >= 0");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  const auto& table = fields();
  std::map<std::string_view, std::size_t> seen;  // key -> line

  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::size_t line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::size_t col0 = 0;
    const std::string_view content = trim(line, col0);
    if (content.empty()) {
      if (text.empty()) break;
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(Kind::syntax, line_no, col0 + 1, "expected 'section.key = value'");
    }
    std::size_t key_col = col0;
    const std::string_view key = trim(content.substr(0, eq), key_col);
    std::size_t value_col = col0 + eq + 1;
    const std::string_view value = trim(content.substr(eq + 1), value_col);
    if (!valid_key_syntax(key)) {
      throw ScenarioError(Kind::syntax, line_no, key_col + 1,
                          "malformed key '" + std::string(key) + "'");
    }
    if (value.empty()) {
      throw ScenarioError(Kind::syntax, line_no, col0 + eq + 2, "missing value");
    }
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == table.end()) {
      throw ScenarioError(Kind::unknown_key, line_no, key_col + 1,
                          "unknown key '" + std::string(key) + "'");
    }
    if (const auto prev = seen.find(it->key); prev != seen.end()) {
      throw ScenarioError(Kind::duplicate_key, line_no, key_col + 1,
                          "key '" + std::string(key) + "' already set on line " +
                              std::to_string(prev->second));
    }
    seen.emplace(it->key, line_no);
    try {
      it->set(s, value);
    } catch (const BadValue& bad) {
      throw ScenarioError(Kind::invalid_value, line_no, value_col + 1,
                          std::string(key) + ": " + bad.message);
    }
    if (text.empty()) break;
  }

  // One physical range: a key set alone drives both; both set must agree.
  const auto silo_r = seen.find("silo.nominal_range_m");
  const auto chan_r = seen.find("channel.range_m");
  if (silo_r != seen.end() && chan_r != seen.end()) {
    if (s.silo.nominal_range_m != s.channel.range_m) {
      throw ScenarioError(Kind::cross_field, std::max(silo_r->second, chan_r->second), 1,
                          "silo.nominal_range_m (line " + std::to_string(silo_r->second) +
                              ") conflicts with channel.range_m (line " +
                              std::to_string(chan_r->second) + ")");
    }
  } else if (silo_r != seen.end()) {
    s.channel.range_m = s.silo.nominal_range_m;
  } else if (chan_r != seen.end()) {
    s.silo.nominal_range_m = s.channel.range_m;
  }

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(Kind::syntax, 0, 0, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  std::string out = "# silradar scenario\n";
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(s);
    out += '\n';
  }
  return out;
}

std::vector<std::string_view> scenario_keys() {
  std::vector<std::string_view> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace silradar
