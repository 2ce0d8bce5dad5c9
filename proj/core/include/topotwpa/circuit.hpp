#pragma once

#include <string>
#include <vector>

namespace topotwpa {

/// Microscopic parameters of the two coupled arrays (JJ array + auxiliary
/// resonator array). SI units throughout.
///
/// `E_J` and `E_J_prime` are the Josephson energies of each junction inside
/// an M-junction series sub-array, i.e. the "M E_J" of the usual sub-array
/// scaling; the linear circuit therefore sees L_J = M Phi0^2 / E_J.
struct CircuitParams {
  double C_a = 0.0;        // on-site capacitance, JJ array (F)
  double C_a_prime = 0.0;  // inter-site capacitance, JJ array (F)
  double C_ab = 0.0;       // inter-array coupling capacitance (F)
  double C_aw = 0.0;       // JJ site to transmission line (F)
  double C_b = 0.0;        // on-site capacitance, auxiliary array (F)
  double C_b_prime = 0.0;  // inter-site capacitance, auxiliary array (F)
  double C_bw = 0.0;       // auxiliary boundary to transmission line (F)
  double L_b = 0.0;        // auxiliary resonator inductance (H)
  double E_J = 0.0;        // on-site junction energy (J)
  double E_J_prime = 0.0;  // inter-site junction energy (J)
  int M = 1;               // junctions per sub-array
  double Z_0 = 50.0;       // line impedance (ohm)
  double P_b = 0.0;        // pump power on auxiliary site 1 (W)
  int N = 1;               // array length

  bool operator==(const CircuitParams&) const = default;
};

struct CircuitOptions {
  /// Apply omega_a -> omega_a - K_c - K_s and J_a -> J_a + K_c.
  bool apply_kerr_shifts = true;
  /// Count C_ab in the JJ-array equivalent capacitance. Off by default: the
  /// tabulated operating points are computed with C_a + 2 C_a' + C_aw.
  bool include_cab_in_array_capacitance = false;
  /// Relative tolerance on Gamma == 2 J_b before flagging a mismatch.
  double impedance_match_tolerance = 1e-12;

  bool operator==(const CircuitOptions&) const = default;
};

/// Effective coupled-array model quantities. Rates are angular (rad/s).
struct EffectiveCircuit {
  double omega_a = 0.0;
  double omega_b = 0.0;
  double J_a = 0.0;
  double J_b = 0.0;
  double J_ab = 0.0;
  double K_s = 0.0;
  double K_c = 0.0;
  double kappa = 0.0;
  double Gamma = 0.0;
  double kappa_nl = 0.0;
  double Omega_b = 0.0;
  double Omega_a = 0.0;
  double E_C = 0.0;      // J
  double phi_zpf = 0.0;  // Wb
  double Z_a = 0.0;      // ohm
  double Z_b = 0.0;      // ohm
  double C_a_eq = 0.0;   // F
  double C_b_eq = 0.0;   // F
  double L_a_eq = 0.0;   // H
  double L_J = 0.0;      // H
  double L_J_prime = 0.0;
  int N = 1;
  int M = 1;

  /// |Gamma - 2 J_b| / (2 J_b).
  double impedance_mismatch = 0.0;
  bool impedance_matched = false;
  /// Boundary auxiliary capacitance C_b + C_b' - C_bw that compensates the
  /// line loading at j = 1 and j = N. Reported only; the effective model
  /// assumes the compensation is in place.
  double C_b_boundary = 0.0;
  bool boundary_compensation_valid = false;

  std::vector<std::string> warnings;
};

/// Throws NonPositiveParameter when an invariant of CircuitParams fails.
void validate(const CircuitParams& p);

EffectiveCircuit derive_effective_circuit(const CircuitParams& p,
                                          const CircuitOptions& options = {});

/// Low-flux validity ratio alpha_sq / (m^2 (Phi0 / 2 phi_zpf)^2). Values well
/// below one keep the quartic expansion of the junction potential valid.
double low_flux_margin(double alpha_sq, int m, double phi_zpf);

inline constexpr double kLowFluxWarningThreshold = 0.1;

}  // namespace topotwpa
