#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "topotwpa/circuit.hpp"
#include "topotwpa/effective_params.hpp"
#include "topotwpa/meanfield.hpp"

namespace topotwpa {

/// Published values of one operating point, in the units of the table.
struct TableRow {
  int N = 0;
  int M = 0;
  double gc_over_J = 0.0;
  double kappa_over_J = 0.0;
  double C_a_eq_fF = 0.0;
  double L_a_eq_pH = 0.0;
  double E_C_MHz = 0.0;    // E_C / h
  double K_c_kHz = 0.0;    // K_c / 2 pi
  double J_a_MHz = 0.0;    // J_a / 2 pi
  double kappa_MHz = 0.0;  // kappa / 2 pi
  double P_b_dBm = 0.0;
  double alpha_sq = 0.0;
  double J_MHz = 0.0;      // J / 2 pi
};

struct Preset {
  std::string name;
  CircuitParams circuit;
  /// Lattice handles at the nominal ratios (Delta = 0, phi = pi/2,
  /// g_s = g_c) with J from the table.
  EffectiveParams nominal;
  double omega_s_over_J = -0.5;
  /// Signal photon flux |alpha_s|^2 (1/s).
  double alpha_s_sq = 0.0;
  TableRow table;
};

/// P1, P1p, P2, P3.
const std::vector<Preset>& presets();

/// Lookup by name ("P1p" and "P1'" both name the primed point). Throws
/// ValidationError for unknown names.
const Preset& preset(std::string_view name);

/// Lattice handles obtained from the circuit through the mean field.
EffectiveParams circuit_effective_params(const Preset& p,
                                         const CircuitOptions& options = {},
                                         MeanFieldMode mode = MeanFieldMode::zero_detuning);

}  // namespace topotwpa
