#include "topotwpa/circuit.hpp"

#include <cmath>
#include <string>

#include "topotwpa/errors.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw NonPositiveParameter(std::string(name) + " must be positive and finite, got " +
                               std::to_string(v));
  }
}

}  // namespace

void validate(const CircuitParams& p) {
  require_positive(p.C_a, "C_a");
  require_positive(p.C_a_prime, "C_a_prime");
  require_positive(p.C_ab, "C_ab");
  require_positive(p.C_aw, "C_aw");
  require_positive(p.C_b, "C_b");
  require_positive(p.C_b_prime, "C_b_prime");
  require_positive(p.C_bw, "C_bw");
  require_positive(p.L_b, "L_b");
  require_positive(p.E_J, "E_J");
  require_positive(p.E_J_prime, "E_J_prime");
  require_positive(p.Z_0, "Z_0");
  if (p.M < 1) throw NonPositiveParameter("M must be >= 1");
  if (p.N < 1) throw NonPositiveParameter("N must be >= 1");
  if (!(p.P_b >= 0.0) || !std::isfinite(p.P_b)) {
    throw NonPositiveParameter("P_b must be non-negative and finite");
  }
}

EffectiveCircuit derive_effective_circuit(const CircuitParams& p,
                                          const CircuitOptions& options) {
  validate(p);
  using constants::e;
  using constants::hbar;
  const double phi0_sq = constants::flux_quantum * constants::flux_quantum;
  const double m = static_cast<double>(p.M);

  EffectiveCircuit ec;
  ec.N = p.N;
  ec.M = p.M;

  // JJ array
  ec.C_a_eq = p.C_a + 2.0 * p.C_a_prime + p.C_aw;
  if (options.include_cab_in_array_capacitance) ec.C_a_eq += p.C_ab;
  ec.L_J = m * phi0_sq / p.E_J;
  ec.L_J_prime = m * phi0_sq / p.E_J_prime;
  ec.L_a_eq = ec.L_J_prime * ec.L_J / (ec.L_J_prime + 2.0 * ec.L_J);
  const double omega_a = 1.0 / std::sqrt(ec.L_a_eq * ec.C_a_eq);
  ec.J_a = 0.5 * omega_a * (p.C_a_prime / ec.C_a_eq - ec.L_a_eq / ec.L_J_prime);
  ec.E_C = e * e / (2.0 * ec.C_a_eq);
  ec.K_s = (ec.E_C / hbar) / (m * m);
  ec.K_c = 2.0 * (ec.E_C / hbar) * (ec.L_a_eq / ec.L_J_prime) / (m * m);
  ec.omega_a = omega_a;
  if (options.apply_kerr_shifts) {
    ec.omega_a -= ec.K_c + ec.K_s;
    ec.J_a += ec.K_c;
  }
  ec.Z_a = std::sqrt(ec.L_a_eq / ec.C_a_eq);
  ec.phi_zpf = std::sqrt(hbar / (2.0 * ec.C_a_eq * ec.omega_a));
  ec.kappa = std::pow(p.C_aw / ec.C_a_eq, 2) * (p.Z_0 / ec.Z_a) * (omega_a / 2.0);

  // auxiliary array
  ec.C_b_eq = p.C_b + 2.0 * p.C_b_prime + p.C_ab;
  ec.omega_b = 1.0 / std::sqrt(p.L_b * ec.C_b_eq);
  ec.Z_b = std::sqrt(p.L_b / ec.C_b_eq);
  ec.J_b = 0.5 * ec.omega_b * (p.C_b_prime / ec.C_b_eq);
  ec.J_ab = 0.5 * std::sqrt(omega_a * ec.omega_b) * p.C_ab /
            std::sqrt(ec.C_a_eq * ec.C_b_eq);
  ec.Gamma = std::pow(p.C_bw / ec.C_b_eq, 2) * (p.Z_0 / ec.Z_b) * (ec.omega_b / 2.0);
  ec.kappa_nl = ec.J_ab * ec.J_ab / (2.0 * ec.J_b);
  ec.Omega_b = (p.C_bw / (2.0 * ec.C_b_eq)) * std::sqrt(p.Z_0 / ec.Z_b) *
               std::sqrt(p.P_b / hbar);
  ec.Omega_a = (ec.J_ab / (2.0 * ec.J_b)) * ec.Omega_b;

  for (const auto& [v, name] : {std::pair{ec.omega_a, "omega_a"}, {ec.omega_b, "omega_b"},
                                {ec.kappa, "kappa"}, {ec.Gamma, "Gamma"},
                                {ec.L_a_eq, "L_a_eq"}, {ec.J_b, "J_b"}}) {
    require_positive(v, name);
  }

  ec.impedance_mismatch = std::abs(ec.Gamma - 2.0 * ec.J_b) / (2.0 * ec.J_b);
  ec.impedance_matched = ec.impedance_mismatch <= options.impedance_match_tolerance;
  if (!ec.impedance_matched) {
    ec.warnings.push_back("impedance mismatch: |Gamma - 2 J_b| / 2 J_b = " +
                          std::to_string(ec.impedance_mismatch));
  }
  ec.C_b_boundary = p.C_b + p.C_b_prime - p.C_bw;
  ec.boundary_compensation_valid = ec.C_b_boundary > 0.0;
  if (!ec.boundary_compensation_valid) {
    ec.warnings.push_back("boundary capacitance C_b + C_b' - C_bw is not positive");
  }
  return ec;
}

double low_flux_margin(double alpha_sq, int m, double phi_zpf) {
  const double bound = constants::flux_quantum / (2.0 * phi_zpf);
  const double mm = static_cast<double>(m);
  return alpha_sq / (mm * mm * bound * bound);
}

}  // namespace topotwpa
