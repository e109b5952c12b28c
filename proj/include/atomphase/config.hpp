#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "atomphase/berry_phase.hpp"
#include "atomphase/common.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/surface_response.hpp"

namespace atomphase {

enum class Spacing { linear, log };

struct AxisSpec {
  std::string param;  ///< one of omega0, time, zA, gamma
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const double f = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
      v[static_cast<std::size_t>(i)] =
          spacing == Spacing::linear
              ? min + f * (max - min)
              : min * std::pow(max / min, f);
    }
    return v;
  }
};

/// Fully resolved sweep configuration. Produced by parse_config /
/// apply_preset; every field has a documented default.
struct SweepSpec {
  LorentzMedium medium{0.5, 1e-3};
  double omega0 = 1.0;
  double z_atom = 0.05;
  double dz_over_d_sq = 0.0;
  double omega0_over_gamma0 = 50.0;
  bool total_rate = false;

  double rabi = 1.0;        ///< fixed Rabi frequency (Gamma0 units)
  bool rabi_tracked = true; ///< Omega = rabi_scale * varpi at each point
  double rabi_scale = 2.0;
  double detuning = 0.0;
  double pump_phase = 0.0;

  Complex c1_0{1.0 / std::numbers::sqrt2, 0.0};
  Complex c2_0{1.0 / std::numbers::sqrt2, 0.0};

  bool free_space = false;
  bool include_shift = true;
  SolverKind solver = SolverKind::closed;
  double fixed_time = 10.0;

  std::vector<AxisSpec> axes;
  std::string format = "csv";
  int workers = 1;
  std::string preset;  ///< name of the preset this spec started from, if any

  void validate() const {
    medium.validate();
    if (!(omega0 > 0.0)) throw ConfigError("atom.omega0 must be > 0");
    if (!(z_atom > 0.0)) throw ConfigError("atom.zA must be > 0");
    if (!(dz_over_d_sq >= 0.0 && dz_over_d_sq <= 1.0))
      throw ConfigError("atom.dz_over_d_sq must lie in [0, 1]");
    if (!(omega0_over_gamma0 > 0.0))
      throw ConfigError("atom.omega0_over_gamma0 must be > 0");
    if (!(rabi >= 0.0)) throw ConfigError("drive.rabi must be >= 0");
    if (!(rabi_scale >= 0.0)) throw ConfigError("drive.rabi_scale must be >= 0");
    if (std::norm(c1_0) + std::norm(c2_0) > 1.0 + 1e-12)
      throw ConfigError("init: |c1|^2 + |c2|^2 must not exceed 1");
    if (!(fixed_time >= 0.0)) throw ConfigError("time must be >= 0");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (free_space && rabi_tracked)
      throw ConfigError(
          "drive.rabi_mode = tracked is undefined in free space; use fixed");
    if (axes.size() > 2) throw ConfigError("at most two sweep axes");
    for (const AxisSpec& ax : axes) {
      if (ax.count < 2)
        throw ConfigError("axis " + ax.param + ": count must be >= 2");
      if (!(ax.min < ax.max))
        throw ConfigError("axis " + ax.param + ": min must be < max");
      if (ax.spacing == Spacing::log && !(ax.min > 0.0))
        throw ConfigError("axis " + ax.param + ": log spacing requires min > 0");
      static constexpr std::array<std::string_view, 4> kParams = {
          "omega0", "time", "zA", "gamma"};
      if (std::find(kParams.begin(), kParams.end(), ax.param) == kParams.end())
        throw ConfigError("axis parameter must be omega0, time, zA or gamma");
      if (ax.param == "omega0" || ax.param == "gamma" || ax.param == "zA") {
        if (!(ax.min > 0.0))
          throw ConfigError("axis " + ax.param + ": values must be > 0");
      } else if (!(ax.min >= 0.0)) {
        throw ConfigError("axis time: values must be >= 0");
      }
    }
    if (axes.size() == 2 && axes[0].param == axes[1].param)
      throw ConfigError("sweep axes must differ");
    if (format != "csv" && format != "jsonl")
      throw ConfigError("output.format must be csv or jsonl");
  }

  AtomSurfaceConfig atom_config(double omega0_value, double z_value,
                                double gamma_value) const {
    AtomSurfaceConfig cfg;
    cfg.omega0 = omega0_value;
    cfg.z_atom = z_value;
    cfg.orientation.dz_over_d_sq = dz_over_d_sq;
    cfg.medium = {medium.omega_p, gamma_value};
    cfg.omega0_over_gamma0 = omega0_over_gamma0;
    cfg.total_rate = total_rate;
    return cfg;
  }
};

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "medium.omega_p", "medium.gamma",
      "atom.omega0", "atom.zA", "atom.dz_over_d_sq",
      "atom.omega0_over_gamma0", "atom.total_rate",
      "drive.rabi", "drive.rabi_mode", "drive.rabi_scale",
      "drive.detuning", "drive.phase",
      "init.c1_re", "init.c1_im", "init.c2_re", "init.c2_im",
      "dynamics.free_space", "dynamics.include_shift",
      "solver", "time", "workers",
      "axis1.param", "axis1.min", "axis1.max", "axis1.count", "axis1.spacing",
      "axis2.param", "axis2.min", "axis2.max", "axis2.count", "axis2.spacing",
      "output.format"};
  return keys;
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t prev = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cur = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         prev + (a[i - 1] == b[j - 1] ? 0 : 1)});
      prev = cur;
    }
  }
  return row[b.size()];
}

inline std::string nearest_key(std::string_view key) {
  std::size_t best = static_cast<std::size_t>(-1);
  std::string who;
  for (const std::string& k : known_keys()) {
    const std::size_t d = edit_distance(key, k);
    if (d < best) {
      best = d;
      who = k;
    }
  }
  return who;
}

inline double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw ConfigError(key + ": '" + value + "' is not a number");
  return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

inline AxisSpec& axis_slot(SweepSpec& spec, int index) {
  while (static_cast<int>(spec.axes.size()) <= index) {
    AxisSpec ax;
    ax.param = "";
    spec.axes.push_back(ax);
  }
  return spec.axes[static_cast<std::size_t>(index)];
}

}  // namespace detail

/// Apply one `key = value` assignment to the spec. Unknown keys are rejected
/// with the closest valid key named; enum values are checked here, numeric
/// range constraints when the full spec is validated.
inline void apply_key(SweepSpec& spec, const std::string& key,
                      const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  if (key == "medium.omega_p") spec.medium.omega_p = parse_double(key, value);
  else if (key == "medium.gamma") spec.medium.gamma = parse_double(key, value);
  else if (key == "atom.omega0") spec.omega0 = parse_double(key, value);
  else if (key == "atom.zA") spec.z_atom = parse_double(key, value);
  else if (key == "atom.dz_over_d_sq")
    spec.dz_over_d_sq = parse_double(key, value);
  else if (key == "atom.omega0_over_gamma0")
    spec.omega0_over_gamma0 = parse_double(key, value);
  else if (key == "atom.total_rate") spec.total_rate = parse_bool(key, value);
  else if (key == "drive.rabi") spec.rabi = parse_double(key, value);
  else if (key == "drive.rabi_mode") {
    if (value == "fixed") spec.rabi_tracked = false;
    else if (value == "tracked") spec.rabi_tracked = true;
    else throw ConfigError("drive.rabi_mode must be fixed or tracked");
  } else if (key == "drive.rabi_scale")
    spec.rabi_scale = parse_double(key, value);
  else if (key == "drive.detuning") spec.detuning = parse_double(key, value);
  else if (key == "drive.phase") spec.pump_phase = parse_double(key, value);
  else if (key == "init.c1_re")
    spec.c1_0 = Complex(parse_double(key, value), spec.c1_0.imag());
  else if (key == "init.c1_im")
    spec.c1_0 = Complex(spec.c1_0.real(), parse_double(key, value));
  else if (key == "init.c2_re")
    spec.c2_0 = Complex(parse_double(key, value), spec.c2_0.imag());
  else if (key == "init.c2_im")
    spec.c2_0 = Complex(spec.c2_0.real(), parse_double(key, value));
  else if (key == "dynamics.free_space")
    spec.free_space = parse_bool(key, value);
  else if (key == "dynamics.include_shift")
    spec.include_shift = parse_bool(key, value);
  else if (key == "solver") {
    if (value == "closed") spec.solver = SolverKind::closed;
    else if (value == "oracle") spec.solver = SolverKind::oracle;
    else if (value == "volterra") spec.solver = SolverKind::volterra;
    else throw ConfigError("solver must be closed, oracle or volterra");
  } else if (key == "time") spec.fixed_time = parse_double(key, value);
  else if (key == "workers") spec.workers = parse_int(key, value);
  else if (key == "output.format") spec.format = value;
  else if (key.rfind("axis", 0) == 0 && key.size() > 5 && key[5] == '.') {
    const char which = key[4];
    if (which != '1' && which != '2')
      throw ConfigError("unknown key '" + key + "'; nearest valid key is '" +
                        detail::nearest_key(key) + "'");
    AxisSpec& ax = detail::axis_slot(spec, which - '1');
    const std::string field = key.substr(6);
    if (field == "param") ax.param = value;
    else if (field == "min") ax.min = parse_double(key, value);
    else if (field == "max") ax.max = parse_double(key, value);
    else if (field == "count") ax.count = parse_int(key, value);
    else if (field == "spacing") {
      if (value == "linear") ax.spacing = Spacing::linear;
      else if (value == "log") ax.spacing = Spacing::log;
      else throw ConfigError(key + ": spacing must be linear or log");
    } else
      throw ConfigError("unknown key '" + key + "'; nearest valid key is '" +
                        detail::nearest_key(key) + "'");
  } else
    throw ConfigError("unknown key '" + key + "'; nearest valid key is '" +
                      detail::nearest_key(key) + "'");
}

/// Parse a flat `key = value` document (one assignment per line, '#' starts
/// a comment). Returns the spec with all defaults resolved; the caller
/// validates after any further overrides.
inline SweepSpec parse_config(const std::string& text,
                              SweepSpec spec = SweepSpec{}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ", column " + std::to_string(line.size() + 1) +
                        ": expected 'key = value'");
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) +
                        ", column 1: missing key before '='");
    if (value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ", column " +
                        std::to_string(eq + 2) + ": missing value for '" +
                        key + "'");
    try {
      apply_key(spec, key, value);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return spec;
}

/// Named parameter presets for the reference datasets. Each preset is a list
/// of plain config assignments run through the normal parser, so presets and
/// hand-written configs cannot diverge in semantics.
inline const std::map<std::string, std::vector<std::pair<std::string, std::string>>>&
preset_table() {
  using KV = std::vector<std::pair<std::string, std::string>>;
  static const std::map<std::string, KV> table = [] {
    std::map<std::string, KV> t;
    // permittivity / response scans
    t["fig2"] = {{"medium.gamma", "1e-4"},
                 {"axis1.param", "omega0"}, {"axis1.min", "0.5"},
                 {"axis1.max", "1.5"}, {"axis1.count", "1001"}};
    t["fig2b"] = {{"medium.gamma", "1e-2"}, {"atom.zA", "0.05"},
                  {"axis1.param", "omega0"}, {"axis1.min", "0.5"},
                  {"axis1.max", "1.5"}, {"axis1.count", "1001"}};
    // free-space trace, resonant pump at the critical (double-root) strength
    t["fig3"] = {{"dynamics.free_space", "true"},
                 {"drive.rabi_mode", "fixed"}, {"drive.rabi", "1"},
                 {"drive.detuning", "0"},
                 {"axis1.param", "time"}, {"axis1.min", "0"},
                 {"axis1.max", "10"}, {"axis1.count", "1001"}};
    // surface meshes over (omega0, time); decay only
    const KV mesh_base = {
        {"drive.rabi_mode", "tracked"}, {"drive.rabi_scale", "1"},
        {"dynamics.include_shift", "false"},
        {"atom.zA", "0.05"},
        {"axis1.param", "omega0"}, {"axis1.min", "0.5"},
        {"axis1.max", "1.5"}, {"axis1.count", "201"},
        {"axis2.param", "time"}, {"axis2.min", "0"},
        {"axis2.max", "10"}, {"axis2.count", "101"}};
    const KV cross_base = {
        {"drive.rabi_mode", "tracked"}, {"drive.rabi_scale", "1"},
        {"dynamics.include_shift", "false"},
        {"atom.zA", "0.05"}, {"time", "10"},
        {"axis1.param", "omega0"}, {"axis1.min", "0.5"},
        {"axis1.max", "1.5"}, {"axis1.count", "201"}};
    const auto with_gamma = [](KV base, const char* gamma) {
      base.emplace_back("medium.gamma", gamma);
      return base;
    };
    const auto with_shift = [](KV base) {
      for (auto& [k, v] : base)
        if (k == "dynamics.include_shift") v = "true";
      return base;
    };
    t["fig4"] = with_gamma(mesh_base, "1e-3");
    t["fig5"] = with_gamma(cross_base, "1e-3");
    t["fig6"] = with_gamma(mesh_base, "1e-2");
    t["fig7"] = with_gamma(cross_base, "1e-2");
    t["fig8"] = with_gamma(mesh_base, "1e-1");
    t["fig9"] = with_gamma(cross_base, "1e-1");
    t["fig10"] = with_shift(with_gamma(mesh_base, "1e-3"));
    t["fig11"] = with_shift(with_gamma(cross_base, "1e-3"));
    t["fig12"] = with_shift(with_gamma(mesh_base, "1e-2"));
    t["fig13"] = with_shift(with_gamma(cross_base, "1e-2"));
    t["fig14"] = with_shift(with_gamma(mesh_base, "1e-1"));
    t["fig15"] = with_shift(with_gamma(cross_base, "1e-1"));
    // distance scans over (omega0, zA) at an early fixed time
    const KV zmesh_base = {
        {"drive.rabi_mode", "tracked"}, {"drive.rabi_scale", "1"},
        {"dynamics.include_shift", "false"}, {"time", "2"},
        {"axis1.param", "omega0"}, {"axis1.min", "0.5"},
        {"axis1.max", "1.5"}, {"axis1.count", "201"},
        {"axis2.param", "zA"}, {"axis2.min", "0.01"},
        {"axis2.max", "0.6"}, {"axis2.count", "101"}};
    const KV zcross_base = {
        {"drive.rabi_mode", "tracked"}, {"drive.rabi_scale", "1"},
        {"dynamics.include_shift", "false"}, {"time", "2"},
        {"atom.omega0", "0.5"},
        {"axis1.param", "zA"}, {"axis1.min", "0.01"},
        {"axis1.max", "0.6"}, {"axis1.count", "201"}};
    t["fig16"] = with_gamma(zmesh_base, "1e-3");
    t["fig17"] = with_gamma(zcross_base, "1e-3");
    t["fig18"] = with_gamma(zmesh_base, "1e-2");
    t["fig19"] = with_gamma(zcross_base, "1e-2");
    t["fig20"] = with_gamma(zmesh_base, "1e-1");
    t["fig21"] = with_gamma(zcross_base, "1e-1");
    return t;
  }();
  return table;
}

inline SweepSpec apply_preset(SweepSpec spec, const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string names;
    for (const auto& entry : table) {
      if (!names.empty()) names += ", ";
      names += entry.first;
    }
    throw ConfigError("unknown preset '" + name + "'; available: " + names);
  }
  for (const auto& [key, value] : it->second) apply_key(spec, key, value);
  spec.preset = name;
  return spec;
}

}  // namespace atomphase
