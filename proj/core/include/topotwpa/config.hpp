#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "topotwpa/circuit.hpp"
#include "topotwpa/effective_params.hpp"
#include "topotwpa/meanfield.hpp"

namespace topotwpa {

/// Where the lattice handles come from.
enum class LatticeSource {
  /// The preset's nominal ratios (or the explicit [lattice] values).
  nominal,
  /// Circuit -> mean field -> effective parameters.
  circuit,
};

struct SignalSettings {
  double omega_s_over_J = -0.5;
  double alpha_s_sq = 0.0;  // photon flux (1/s)
  int input_site = 0;       // 0-based; 1-based in the file

  bool operator==(const SignalSettings&) const = default;
};

/// A fully normalized run configuration: SI units, angular rates.
struct RunConfig {
  std::string preset;  // empty when none
  bool has_circuit = false;
  CircuitParams circuit;
  CircuitOptions circuit_options;
  MeanFieldMode meanfield_mode = MeanFieldMode::zero_detuning;
  LatticeSource lattice_source = LatticeSource::nominal;
  EffectiveParams lattice;
  SignalSettings signal;
  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key = value format:
///
///   preset = P1
///   [circuit]
///   C_a = 1790 fF
///   E_J = 1.00 THz      # energy given as h * f
///   P_b = -74.8 dBm
///   [lattice]
///   N = 20
///
/// Keys outside any section are `preset` and `seed`. Values carry unit
/// suffixes where the quantity has a dimension. `origin` names the source in
/// error messages. Throws ParseError (line, column) and ValidationError.
RunConfig parse_config(std::string_view text, std::string_view origin = "<string>");

/// Reads and parses a file. Throws IoError when it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Configuration for a preset with no overrides.
RunConfig preset_config(std::string_view name);

/// Canonical text of a configuration: every normalized field in base SI
/// units with 17 significant digits, so parse_config(write_config(c)) == c.
std::string write_config(const RunConfig& c);

/// Lattice handles selected by the configuration.
EffectiveParams resolve_effective_params(const RunConfig& c);

}  // namespace topotwpa
