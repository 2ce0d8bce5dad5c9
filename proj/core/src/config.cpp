#include "topotwpa/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "topotwpa/dataset.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/presets.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

enum class Quantity {
  capacitance, inductance, energy, rate, power, impedance, angle, ratio
};

struct Unit {
  std::string_view suffix;
  std::function<double(double)> to_si;
};

const std::vector<Unit>& units_for(Quantity q) {
  static const std::vector<Unit> capacitance = {
      {"F", [](double v) { return v; }},          {"uF", [](double v) { return v * 1e-6; }},
      {"nF", [](double v) { return v * 1e-9; }},  {"pF", [](double v) { return v * 1e-12; }},
      {"fF", [](double v) { return v * 1e-15; }}, {"aF", [](double v) { return v * 1e-18; }}};
  static const std::vector<Unit> inductance = {
      {"H", [](double v) { return v; }},          {"mH", [](double v) { return v * 1e-3; }},
      {"uH", [](double v) { return v * 1e-6; }},  {"nH", [](double v) { return v * 1e-9; }},
      {"pH", [](double v) { return v * 1e-12; }}};
  static const std::vector<Unit> energy = {
      {"J", [](double v) { return v; }},
      {"Hz", [](double v) { return constants::h * v; }},
      {"kHz", [](double v) { return constants::h * v * 1e3; }},
      {"MHz", [](double v) { return constants::h * v * 1e6; }},
      {"GHz", [](double v) { return constants::h * v * 1e9; }},
      {"THz", [](double v) { return constants::h * v * 1e12; }}};
  static const std::vector<Unit> rate = {
      {"rad/s", [](double v) { return v; }},
      {"Hz", [](double v) { return angular(v); }},
      {"kHz", [](double v) { return angular(v * 1e3); }},
      {"MHz", [](double v) { return angular(v * 1e6); }},
      {"GHz", [](double v) { return angular(v * 1e9); }},
      {"THz", [](double v) { return angular(v * 1e12); }}};
  static const std::vector<Unit> power = {
      {"W", [](double v) { return v; }},          {"mW", [](double v) { return v * 1e-3; }},
      {"uW", [](double v) { return v * 1e-6; }},  {"nW", [](double v) { return v * 1e-9; }},
      {"pW", [](double v) { return v * 1e-12; }}, {"dBm", [](double v) { return dbm_to_watt(v); }}};
  static const std::vector<Unit> impedance = {
      {"Ohm", [](double v) { return v; }}, {"ohm", [](double v) { return v; }},
      {"kOhm", [](double v) { return v * 1e3; }}};
  static const std::vector<Unit> angle = {
      {"", [](double v) { return v; }},
      {"rad", [](double v) { return v; }},
      {"deg", [](double v) { return v * std::numbers::pi / 180.0; }}};
  static const std::vector<Unit> none = {{"", [](double v) { return v; }}};
  switch (q) {
    case Quantity::capacitance: return capacitance;
    case Quantity::inductance: return inductance;
    case Quantity::energy: return energy;
    case Quantity::rate: return rate;
    case Quantity::power: return power;
    case Quantity::impedance: return impedance;
    case Quantity::angle: return angle;
    default: return none;
  }
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
  int key_column = 0;
  int value_column = 0;
};


std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string origin_prefix(std::string_view origin) { return std::string(origin) + ": "; }

// Splits "1790 fF" into the SI value.
double parse_quantity(const Entry& e, Quantity q, std::string_view origin) {
  const std::string& v = e.value;
  double number = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr == begin) {
    throw ParseError(origin_prefix(origin) + e.key + ": expected a number, got '" + v + "'",
                     e.line, e.value_column);
  }
  const std::string suffix = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
  const int suffix_column = e.value_column + static_cast<int>(ptr - begin);
  for (const Unit& u : units_for(q)) {
    if (u.suffix == suffix) {
      const double si = u.to_si(number);
      if (!std::isfinite(si)) {
        throw ParseError(origin_prefix(origin) + e.key + ": value out of range", e.line,
                         e.value_column);
      }
      return si;
    }
  }
  std::string allowed;
  for (const Unit& u : units_for(q)) {
    allowed += (allowed.empty() ? "" : ", ") + (u.suffix.empty() ? std::string("<none>")
                                                                  : std::string(u.suffix));
  }
  throw ParseError(origin_prefix(origin) + e.key + ": " +
                       (suffix.empty() ? "missing unit" : "unknown unit '" + suffix + "'") +
                       " (allowed: " + allowed + ")",
                   e.line, suffix_column);
}

long long parse_integer(const Entry& e, std::string_view origin) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
    throw ParseError(origin_prefix(origin) + e.key + ": expected an integer, got '" + e.value +
                         "'",
                     e.line, e.value_column);
  }
  return v;
}

unsigned long long parse_unsigned(const Entry& e, std::string_view origin) {
  unsigned long long v = 0;
  const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
    throw ParseError(origin_prefix(origin) + e.key + ": expected a non-negative integer, got '" +
                         e.value + "'",
                     e.line, e.value_column);
  }
  return v;
}

bool parse_bool(const Entry& e, std::string_view origin) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ParseError(origin_prefix(origin) + e.key + ": expected true or false", e.line,
                   e.value_column);
}

std::vector<Entry> tokenize(std::string_view text, std::string_view origin) {
  std::vector<Entry> out;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    // Strip comments outside quotes.
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (!quoted && (raw[i] == '#' || raw[i] == ';')) {
        cut = i;
        break;
      }
    }
    raw = raw.substr(0, cut);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError(origin_prefix(origin) + "unterminated section header", line_no,
                         indent + static_cast<int>(line.size()) - 1);
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(origin_prefix(origin) + "empty section name", line_no, indent);
      continue;
    }
    const std::size_t eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(origin_prefix(origin) + "expected 'key = value'", line_no, indent);
    }
    Entry e;
    e.section = section;
    e.key = trim(raw.substr(0, eq));
    e.line = line_no;
    e.key_column = indent;
    const std::string_view rhs = raw.substr(eq + 1);
    const std::size_t vstart = rhs.find_first_not_of(" \t");
    e.value_column = static_cast<int>(eq + 2 + (vstart == std::string_view::npos ? 0 : vstart));
    e.value = trim(rhs);
    if (e.key.empty()) throw ParseError(origin_prefix(origin) + "missing key", line_no, indent);
    if (e.value.size() >= 2 && e.value.front() == '"' && e.value.back() == '"') {
      e.value = e.value.substr(1, e.value.size() - 2);
      ++e.value_column;
    } else if (e.value.empty()) {
      throw ParseError(origin_prefix(origin) + e.key + ": missing value", line_no,
                       e.value_column);
    }
    out.push_back(std::move(e));
  }
  return out;
}

using Setter = std::function<void(RunConfig&, double)>;

struct NumericField {
  Quantity quantity;
  Setter set;
};

const std::map<std::string, NumericField>& circuit_fields() {
  static const std::map<std::string, NumericField> f = {
      {"C_a", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_a = v; }}},
      {"C_a_prime", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_a_prime = v; }}},
      {"C_ab", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_ab = v; }}},
      {"C_aw", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_aw = v; }}},
      {"C_b", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_b = v; }}},
      {"C_b_prime", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_b_prime = v; }}},
      {"C_bw", {Quantity::capacitance, [](RunConfig& c, double v) { c.circuit.C_bw = v; }}},
      {"L_b", {Quantity::inductance, [](RunConfig& c, double v) { c.circuit.L_b = v; }}},
      {"E_J", {Quantity::energy, [](RunConfig& c, double v) { c.circuit.E_J = v; }}},
      {"E_J_prime", {Quantity::energy, [](RunConfig& c, double v) { c.circuit.E_J_prime = v; }}},
      {"Z_0", {Quantity::impedance, [](RunConfig& c, double v) { c.circuit.Z_0 = v; }}},
      {"P_b", {Quantity::power, [](RunConfig& c, double v) { c.circuit.P_b = v; }}},
  };
  return f;
}

const std::map<std::string, NumericField>& lattice_fields() {
  static const std::map<std::string, NumericField> f = {
      {"Delta", {Quantity::rate, [](RunConfig& c, double v) { c.lattice.Delta = v; }}},
      {"J", {Quantity::rate, [](RunConfig& c, double v) { c.lattice.J = v; }}},
      {"phi", {Quantity::angle, [](RunConfig& c, double v) { c.lattice.phi = v; }}},
      {"kappa", {Quantity::rate, [](RunConfig& c, double v) { c.lattice.kappa = v; }}},
      {"g_s", {Quantity::rate, [](RunConfig& c, double v) { c.lattice.g_s = v; }}},
      {"g_c", {Quantity::rate, [](RunConfig& c, double v) { c.lattice.g_c = v; }}},
  };
  return f;
}

// Ratios are applied after every absolute value so that they refer to the
// final J regardless of their position in the file.
const std::map<std::string, Setter>& lattice_ratios() {
  static const std::map<std::string, Setter> f = {
      {"kappa_over_J", [](RunConfig& c, double v) { c.lattice.kappa = v * c.lattice.J; }},
      {"gc_over_J", [](RunConfig& c, double v) { c.lattice.g_c = v * c.lattice.J; }},
      {"gs_over_J", [](RunConfig& c, double v) { c.lattice.g_s = v * c.lattice.J; }},
      {"delta_over_J", [](RunConfig& c, double v) { c.lattice.Delta = v * c.lattice.J; }},
  };
  return f;
}

[[noreturn]] void unknown_key(const Entry& e, std::string_view origin) {
  throw ParseError(origin_prefix(origin) + "unknown key '" + e.key + "'" +
                       (e.section.empty() ? "" : " in section [" + e.section + "]"),
                   e.line, e.key_column);
}

void apply_preset(RunConfig& c, std::string_view name) {
  const Preset& p = preset(name);
  c.preset = p.name;
  c.has_circuit = true;
  c.circuit = p.circuit;
  c.lattice = p.nominal;
  c.signal.omega_s_over_J = p.omega_s_over_J;
  c.signal.alpha_s_sq = p.alpha_s_sq;
  c.signal.input_site = 0;
}

void validate_config(RunConfig& c) {
  if (c.has_circuit) {
    try {
      validate(c.circuit);
    } catch (const NonPositiveParameter& ex) {
      throw ValidationError(std::string("circuit.") + ex.what());
    }
  }
  if (c.lattice_source == LatticeSource::circuit) {
    if (!c.has_circuit) throw ValidationError("lattice.source: 'circuit' needs a [circuit] section");
    if (c.lattice.N < 1) throw ValidationError("lattice.N: must be >= 1");
  } else {
    try {
      validate(c.lattice);
    } catch (const ValidationError& ex) {
      throw ValidationError(std::string("lattice.") + ex.what());
    }
  }
  if (c.signal.input_site < 0 || c.signal.input_site >= c.lattice.N) {
    throw ValidationError("signal.input_site: must lie in 1..N");
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin) {
  const std::vector<Entry> entries = tokenize(text, origin);
  RunConfig c;
  // The preset is the base every other key overrides.
  for (const Entry& e : entries) {
    if (e.section.empty() && e.key == "preset") {
      try {
        apply_preset(c, e.value);
      } catch (const ValidationError& ex) {
        throw ParseError(origin_prefix(origin) + ex.what(), e.line, e.value_column);
      }
    }
  }
  std::vector<std::pair<const Entry*, Setter>> ratios;
  bool lattice_n_set = false;
  for (const Entry& e : entries) {
    if (e.section.empty()) {
      if (e.key == "preset") continue;
      if (e.key == "seed") {
        c.seed = parse_unsigned(e, origin);
        continue;
      }
      unknown_key(e, origin);
    } else if (e.section == "circuit") {
      c.has_circuit = true;
      if (auto it = circuit_fields().find(e.key); it != circuit_fields().end()) {
        it->second.set(c, parse_quantity(e, it->second.quantity, origin));
      } else if (e.key == "M") {
        c.circuit.M = static_cast<int>(parse_integer(e, origin));
      } else if (e.key == "N") {
        c.circuit.N = static_cast<int>(parse_integer(e, origin));
        if (!lattice_n_set) c.lattice.N = c.circuit.N;
      } else {
        unknown_key(e, origin);
      }
    } else if (e.section == "options") {
      if (e.key == "apply_kerr_shifts") {
        c.circuit_options.apply_kerr_shifts = parse_bool(e, origin);
      } else if (e.key == "include_cab_in_array_capacitance") {
        c.circuit_options.include_cab_in_array_capacitance = parse_bool(e, origin);
      } else if (e.key == "impedance_match_tolerance") {
        c.circuit_options.impedance_match_tolerance = parse_quantity(e, Quantity::ratio, origin);
      } else {
        unknown_key(e, origin);
      }
    } else if (e.section == "meanfield") {
      if (e.key != "mode") unknown_key(e, origin);
      if (e.value == "zero_detuning") {
        c.meanfield_mode = MeanFieldMode::zero_detuning;
      } else if (e.value == "circuit_detuning") {
        c.meanfield_mode = MeanFieldMode::circuit_detuning;
      } else {
        throw ParseError(origin_prefix(origin) + "mode: expected zero_detuning or circuit_detuning",
                         e.line, e.value_column);
      }
    } else if (e.section == "lattice") {
      if (auto it = lattice_fields().find(e.key); it != lattice_fields().end()) {
        it->second.set(c, parse_quantity(e, it->second.quantity, origin));
      } else if (auto r = lattice_ratios().find(e.key); r != lattice_ratios().end()) {
        ratios.emplace_back(&e, r->second);
      } else if (e.key == "N") {
        c.lattice.N = static_cast<int>(parse_integer(e, origin));
        lattice_n_set = true;
      } else if (e.key == "source") {
        if (e.value == "nominal") {
          c.lattice_source = LatticeSource::nominal;
        } else if (e.value == "circuit") {
          c.lattice_source = LatticeSource::circuit;
        } else {
          throw ParseError(origin_prefix(origin) + "source: expected nominal or circuit", e.line,
                           e.value_column);
        }
      } else {
        unknown_key(e, origin);
      }
    } else if (e.section == "signal") {
      if (e.key == "omega_s_over_J") {
        c.signal.omega_s_over_J = parse_quantity(e, Quantity::ratio, origin);
      } else if (e.key == "alpha_s_sq") {
        c.signal.alpha_s_sq = parse_quantity(e, Quantity::rate, origin);
      } else if (e.key == "input_site") {
        c.signal.input_site = static_cast<int>(parse_integer(e, origin)) - 1;
      } else {
        unknown_key(e, origin);
      }
    } else {
      throw ParseError(origin_prefix(origin) + "unknown section [" + e.section + "]", e.line, 1);
    }
  }
  for (const auto& [e, set] : ratios) set(c, parse_quantity(*e, Quantity::ratio, origin));
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  apply_preset(c, name);
  validate_config(c);
  return c;
}

std::string write_config(const RunConfig& c) {
  std::ostringstream o;
  auto num = [](double v) { return format_double(v); };
  if (!c.preset.empty()) o << "preset = " << c.preset << '\n';
  o << "seed = " << c.seed << '\n';
  if (c.has_circuit) {
    const CircuitParams& p = c.circuit;
    o << "\n[circuit]\n"
      << "C_a = " << num(p.C_a) << " F\n"
      << "C_a_prime = " << num(p.C_a_prime) << " F\n"
      << "C_ab = " << num(p.C_ab) << " F\n"
      << "C_aw = " << num(p.C_aw) << " F\n"
      << "C_b = " << num(p.C_b) << " F\n"
      << "C_b_prime = " << num(p.C_b_prime) << " F\n"
      << "C_bw = " << num(p.C_bw) << " F\n"
      << "L_b = " << num(p.L_b) << " H\n"
      << "E_J = " << num(p.E_J) << " J\n"
      << "E_J_prime = " << num(p.E_J_prime) << " J\n"
      << "M = " << p.M << '\n'
      << "N = " << p.N << '\n'
      << "Z_0 = " << num(p.Z_0) << " Ohm\n"
      << "P_b = " << num(p.P_b) << " W\n";
  }
  o << "\n[options]\n"
    << "apply_kerr_shifts = " << (c.circuit_options.apply_kerr_shifts ? "true" : "false") << '\n'
    << "include_cab_in_array_capacitance = "
    << (c.circuit_options.include_cab_in_array_capacitance ? "true" : "false") << '\n'
    << "impedance_match_tolerance = " << num(c.circuit_options.impedance_match_tolerance) << '\n';
  o << "\n[meanfield]\nmode = "
    << (c.meanfield_mode == MeanFieldMode::zero_detuning ? "zero_detuning" : "circuit_detuning")
    << '\n';
  const EffectiveParams& l = c.lattice;
  o << "\n[lattice]\n"
    << "source = " << (c.lattice_source == LatticeSource::nominal ? "nominal" : "circuit") << '\n'
    << "N = " << l.N << '\n'
    << "Delta = " << num(l.Delta) << " rad/s\n"
    << "J = " << num(l.J) << " rad/s\n"
    << "phi = " << num(l.phi) << " rad\n"
    << "kappa = " << num(l.kappa) << " rad/s\n"
    << "g_s = " << num(l.g_s) << " rad/s\n"
    << "g_c = " << num(l.g_c) << " rad/s\n";
  o << "\n[signal]\n"
    << "omega_s_over_J = " << num(c.signal.omega_s_over_J) << '\n'
    << "alpha_s_sq = " << num(c.signal.alpha_s_sq) << " rad/s\n"
    << "input_site = " << c.signal.input_site + 1 << '\n';
  return o.str();
}

EffectiveParams resolve_effective_params(const RunConfig& c) {
  if (c.lattice_source == LatticeSource::nominal) return c.lattice;
  CircuitParams circuit = c.circuit;
  circuit.N = c.lattice.N;
  const EffectiveCircuit ec = derive_effective_circuit(circuit, c.circuit_options);
  return effective_params_from_meanfield(ec, solve_meanfield(ec, c.meanfield_mode));
}

}  // namespace topotwpa
