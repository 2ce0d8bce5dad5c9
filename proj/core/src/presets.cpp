#include "topotwpa/presets.hpp"

#include <string>

#include "topotwpa/errors.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

constexpr double fF = 1e-15;

struct Row {
  const char* name;
  int M;
  double C_a, C_a_prime, ME_J_THz, C_aw, C_ab, C_b, P_b_dBm;
  int N;
  TableRow table;
};

Preset make(const Row& r) {
  Preset p;
  p.name = r.name;
  CircuitParams& c = p.circuit;
  c.C_a = r.C_a * fF;
  c.C_a_prime = r.C_a_prime * fF;
  c.C_ab = r.C_ab * fF;
  c.C_aw = r.C_aw * fF;
  c.C_b = r.C_b * fF;
  c.C_b_prime = 1.99 * fF;
  c.C_bw = 39.8 * fF;
  c.L_b = 0.995e-9;
  c.E_J = constants::h * r.ME_J_THz * 1e12;
  c.E_J_prime = 0.5 * c.E_J;
  c.M = r.M;
  c.Z_0 = 50.0;
  c.P_b = dbm_to_watt(r.P_b_dBm);
  c.N = r.N;
  p.table = r.table;
  p.nominal = EffectiveParams::in_units_of_J(r.N, angular(r.table.J_MHz * 1e6),
                                             r.table.kappa_over_J, r.table.gc_over_J,
                                             r.table.gc_over_J);
  p.omega_s_over_J = -0.5;
  return p;
}

std::vector<Preset> build() {
  // name, M, C_a, C_a', M E_J/h, C_aw, C_ab, C_b, P_b, N
  // table: N, M, g_c/J, kappa/J, C_a_eq, L_a_eq, E_C/h, K_c/2pi, J_a/2pi,
  //        kappa/2pi, P_b, |alpha|^2, J/2pi
  const Row rows[] = {
      {"P1", 1, 1790, 1020, 1.00, 386, 6.26, 388, -74.8, 8,
       {8, 1, 0.6, 2.6, 4220, 81.7, 4.57, 2290, -31.2, 406, -74.8, 41.0, 156}},
      {"P1p", 7, 76.2, 89.3, 0.623, 113, 1.85, 392, -68.5, 10,
       {10, 7, 0.6, 2.6, 368, 921, 52.4, 535, -31.2, 406, -68.5, 175, 156}},
      {"P2", 32, 48.6, 108, 2.85, 103, 1.85, 392, -55.8, 27,
       {27, 32, 0.25, 0.9, 368, 921, 52.4, 25.6, 187, 337, -55.8, 3660, 375}},
      {"P3", 22, 106, 84.4, 1.96, 93.5, 1.85, 392, -59.5, 4,
       {4, 22, 0.95, 2.8, 368, 921, 52.4, 54.1, -88.7, 276, -59.5, 1730, 98.6}},
  };
  std::vector<Preset> out;
  for (const Row& r : rows) out.push_back(make(r));
  out[0].alpha_s_sq = angular(5e6);
  out[1].alpha_s_sq = angular(5e6);
  out[2].alpha_s_sq = angular(19e6);
  out[3].alpha_s_sq = angular(5e6);
  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& preset(std::string_view name) {
  if (name == "P1'") name = "P1p";
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  throw ValidationError("preset: unknown name '" + std::string(name) +
                        "' (expected P1, P1p, P2 or P3)");
}

EffectiveParams circuit_effective_params(const Preset& p, const CircuitOptions& options,
                                         MeanFieldMode mode) {
  const EffectiveCircuit ec = derive_effective_circuit(p.circuit, options);
  return effective_params_from_meanfield(ec, solve_meanfield(ec, mode));
}

}  // namespace topotwpa
