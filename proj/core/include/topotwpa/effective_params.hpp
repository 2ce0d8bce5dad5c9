#pragma once

#include <numbers>

namespace topotwpa {

/// Handles of the linearized lattice model: detuning, complex hopping
/// J e^{i phi}, uniform decay, local (g_s) and nearest-neighbour (g_c)
/// two-photon pumping. Rates in rad/s.
struct EffectiveParams {
  int N = 1;
  double Delta = 0.0;
  double J = 0.0;
  double phi = std::numbers::pi / 2.0;
  double kappa = 0.0;
  double g_s = 0.0;
  double g_c = 0.0;

  bool operator==(const EffectiveParams&) const = default;

  /// Same parameters expressed with J as the unit: (kappa/J, g_c/J, ...).
  static EffectiveParams in_units_of_J(int n, double J, double kappa_over_J,
                                       double gc_over_J, double gs_over_J,
                                       double delta_over_J = 0.0,
                                       double phi = std::numbers::pi / 2.0) {
    return EffectiveParams{n,           delta_over_J * J, J, phi, kappa_over_J * J,
                           gs_over_J * J, gc_over_J * J};
  }
};

/// Throws ValidationError unless N >= 1 and kappa > 0.
void validate(const EffectiveParams& p);

}  // namespace topotwpa
