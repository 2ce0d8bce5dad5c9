#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "topotwpa/circuit.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/presets.hpp"
#include "topotwpa/units.hpp"

using namespace topotwpa;
using testing::rel_err;

TEST_SUITE("circuit") {

TEST_CASE("P1 row reproduces the tabulated capacitance, charging energy and Kerr") {
  const auto ec = derive_effective_circuit(preset("P1").circuit);
  CHECK(rel_err(ec.C_a_eq, 4220e-15) < 0.05);
  CHECK(rel_err(ec.E_C / constants::h, 4.57e6) < 0.05);
  CHECK(rel_err(ec.K_c / two_pi, 2290e3) < 0.05);
  CHECK(rel_err(ec.L_a_eq, 81.7e-12) < 0.05);
}

TEST_CASE("P1 resonance frequency follows from L_a_eq and C_a_eq") {
  const double L = 81.7e-12;
  const double C = 4220e-15;
  const double f = 1.0 / (two_pi * std::sqrt(L * C));
  CHECK(rel_err(f, 8.56e9) < 0.01);

  CircuitOptions bare;
  bare.apply_kerr_shifts = false;
  const auto ec = derive_effective_circuit(preset("P1").circuit, bare);
  CHECK(rel_err(ec.omega_a, 1.0 / std::sqrt(ec.L_a_eq * ec.C_a_eq)) < 1e-12);
  CHECK(rel_err(ec.omega_a / two_pi, 8.56e9) < 0.01);
}

TEST_CASE("vanishing coupling capacitances leave a purely inductive hopping") {
  CircuitParams p = preset("P1").circuit;
  p.C_a_prime = 1e-30;
  p.C_ab = 1e-30;
  p.C_aw = 1e-30;
  CircuitOptions bare;
  bare.apply_kerr_shifts = false;
  const auto ec = derive_effective_circuit(p, bare);
  CHECK(rel_err(ec.C_a_eq, p.C_a) < 1e-12);
  const double inductive = -0.5 * ec.omega_a * ec.L_a_eq / ec.L_J_prime;
  CHECK(rel_err(ec.J_a, inductive) < 1e-12);
}

TEST_CASE("Table I rows within 5%") {
  for (const Preset& pr : presets()) {
    CAPTURE(pr.name);
    const auto ec = derive_effective_circuit(pr.circuit);
    const TableRow& t = pr.table;
    CHECK(rel_err(ec.C_a_eq * 1e15, t.C_a_eq_fF) < 0.05);
    CHECK(rel_err(ec.L_a_eq * 1e12, t.L_a_eq_pH) < 0.05);
    CHECK(rel_err(ec.E_C / constants::h / 1e6, t.E_C_MHz) < 0.05);
    CHECK(rel_err(ec.K_c / two_pi / 1e3, t.K_c_kHz) < 0.05);
    CHECK(rel_err(ec.J_a / two_pi / 1e6, t.J_a_MHz) < 0.05);
    CHECK(rel_err(ec.kappa / two_pi / 1e6, t.kappa_MHz) < 0.05);
  }
}

TEST_CASE("on-site Kerr is twice the cross Kerr for E_J / E_J' = 2") {
  const auto ec = derive_effective_circuit(preset("P2").circuit);
  CHECK(std::abs(ec.K_s / ec.K_c - 2.0) < 1e-9);
}

TEST_CASE("uniform capacitance and inductance scaling keeps the bare frequencies") {
  const double s = 3.0;
  CircuitParams p = preset("P1").circuit;
  CircuitParams q = p;
  for (double* c : {&q.C_a, &q.C_a_prime, &q.C_ab, &q.C_aw, &q.C_b, &q.C_b_prime, &q.C_bw})
    *c *= s;
  q.L_b /= s;
  q.E_J *= s;
  q.E_J_prime *= s;
  CircuitOptions bare;
  bare.apply_kerr_shifts = false;
  const auto a = derive_effective_circuit(p, bare);
  const auto b = derive_effective_circuit(q, bare);
  CHECK(rel_err(b.omega_a, a.omega_a) < 1e-12);
  CHECK(rel_err(b.omega_b, a.omega_b) < 1e-12);
  CHECK(rel_err(b.Z_a, a.Z_a / s) < 1e-12);
}

TEST_CASE("low-flux margin") {
  CHECK(low_flux_margin(0.0, 7, 1e-16) == 0.0);
  const double r1 = low_flux_margin(175.0, 3, 2e-16);
  const double r2 = low_flux_margin(175.0, 6, 2e-16);
  CHECK(rel_err(r1 / r2, 4.0) < 1e-12);

  // Arithmetic oracle from the P1' row: C_a_eq = 368 fF, L_a_eq = 921 pH,
  // M = 7, |alpha|^2 = 175, reduced flux quantum hbar / 2e.
  const double C = 368e-15;
  const double L = 921e-12;
  const double hbar = 1.054571817e-34;
  const double flux = hbar / (2.0 * 1.602176634e-19);
  const double w = 1.0 / std::sqrt(L * C);
  const double zpf = std::sqrt(hbar / (2.0 * C * w));
  const double oracle = 175.0 / (49.0 * std::pow(flux / (2.0 * zpf), 2));
  const auto ec = derive_effective_circuit(preset("P1p").circuit);
  const double r = low_flux_margin(175.0, 7, ec.phi_zpf);
  CHECK(rel_err(r, oracle) < 0.03);
  CHECK(r == doctest::Approx(0.35).epsilon(0.05));
}

TEST_CASE("invalid parameters are rejected") {
  CircuitParams p = preset("P1").circuit;
  p.C_a = -1e-15;
  CHECK_THROWS_AS(derive_effective_circuit(p), NonPositiveParameter);
  p = preset("P1").circuit;
  p.N = 0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = preset("P1").circuit;
  p.M = 0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
  p = preset("P1").circuit;
  p.P_b = -1.0;
  CHECK_THROWS_AS(validate(p), NonPositiveParameter);
}

TEST_CASE("boundary compensation and impedance diagnostics are reported") {
  const auto ec = derive_effective_circuit(preset("P1").circuit);
  CHECK(ec.boundary_compensation_valid);
  CHECK(ec.impedance_mismatch < 0.01);
  CHECK(ec.Gamma > 0.0);
  CHECK(ec.J_b > 0.0);
}

}
