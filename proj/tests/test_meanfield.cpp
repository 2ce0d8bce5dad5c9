#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "support.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/meanfield.hpp"
#include "topotwpa/presets.hpp"
#include "topotwpa/units.hpp"

using namespace topotwpa;
using testing::rel_err;
using cd = std::complex<double>;

namespace {

double bisect_duffing(double xi) {
  double lo = 0.0;
  double hi = std::max(1.0, std::cbrt(xi) + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid + 0.25 * mid - xi > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("meanfield") {

TEST_CASE("closed-form Duffing root") {
  CHECK(duffing_analytic(0.0) == 0.0);
  CHECK(duffing_analytic(0.25) == doctest::Approx(0.5).epsilon(1e-14));
  for (double xi : {1e-3, 1.0, 1e3}) {
    CAPTURE(xi);
    CHECK(std::abs(duffing_analytic(xi) - bisect_duffing(xi)) <= 1e-10);
  }
  for (double n : {1e-4, 0.3, 2.0, 7.5}) {
    const double xi = n * n * n + 0.25 * n;
    CHECK(rel_err(duffing_analytic(xi), n) < 1e-12);
  }
  CHECK_THROWS_AS(duffing_analytic(-1e-3), NegativeDrive);
}

TEST_CASE("closed-form residual stays below 1e-12 on [0, 1e3]") {
  double worst = 0.0;
  for (int k = 0; k <= 20000; ++k) {
    const double xi = 1e3 * k / 20000.0;
    const double n = duffing_analytic(xi);
    worst = std::max(worst, std::abs(n * n * n + 0.25 * n - xi));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("numeric steady states") {
  SUBCASE("undriven") {
    const auto r = duffing_numeric(0.0, 1.0, -0.3, 0.1);
    REQUIRE(r.size() == 1);
    CHECK(r[0].intensity == 0.0);
    CHECK(std::abs(r[0].amplitude) == 0.0);
  }
  SUBCASE("linear resonator") {
    const auto r = duffing_numeric(0.7, 2.0, 0.0, 0.0);
    REQUIRE(r.size() == 1);
    CHECK(rel_err(r[0].intensity, std::pow(2.0 * 0.7 / 2.0, 2)) < 1e-12);
  }
  SUBCASE("zero-detuning parametrization") {
    const double kappa = 3.0, K = 0.02, Omega = 40.0;
    const double xi = (Omega / kappa) * (Omega / kappa) * K / kappa;
    const double n = duffing_analytic(xi);
    const auto r = duffing_numeric(Omega, kappa, -2.0 * kappa * n, K);
    REQUIRE(!r.empty());
    bool found = false;
    for (const auto& root : r) found |= rel_err(root.intensity, kappa * n / K) < 1e-9;
    CHECK(found);
  }
  SUBCASE("bistable triple has an unstable middle branch") {
    const auto r = duffing_numeric(3.0, 1.0, -5.0, 1.0);
    REQUIRE(r.size() == 3);
    CHECK(r[0].stable);
    CHECK_FALSE(r[1].stable);
    CHECK(r[2].stable);
    for (const auto& root : r) {
      const double x = root.intensity;
      CHECK(std::abs(x * (0.25 + std::pow(-5.0 + x, 2)) - 9.0) < 1e-9);
      // Amplitude solves the complex steady-state equation itself.
      const cd lhs = (0.5 - cd(0, 1) * (-5.0 + x)) * root.amplitude;
      CHECK(std::abs(lhs - 3.0) < 1e-8);
    }
  }
}

TEST_CASE("matched auxiliary chain") {
  for (int n = 1; n <= 40; ++n) {
    const double Jb = 0.37;
    const Eigen::MatrixXcd prod =
        aux_chain_matrix(2.0 * Jb, Jb, n) * matched_chain_inverse(Jb, n);
    const double err = (prod - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    CAPTURE(n);
    CHECK(err <= 1e-12);
  }
  const Eigen::MatrixXcd inv3 = matched_chain_inverse(1.5, 3);
  CHECK(std::abs(inv3(0, 2) - cd(-1.0 / 3.0, 0.0)) < 1e-15);
  CHECK(std::abs(matched_chain_inverse(2.0, 1)(0, 0) - 0.25) < 1e-15);
  const Eigen::MatrixXcd direct = aux_chain_matrix(3.0, 1.5, 3).inverse();
  CHECK(std::abs(direct(0, 2) - inv3(0, 2)) < 1e-12);
}

TEST_CASE("auxiliary running wave") {
  const double Jb = 0.5, Omega = 1.0;
  const auto beta = aux_chain_steady_state(Omega, Jb, 0.0, cd(0.0), 4);
  REQUIRE(beta.size() == 4);
  for (int j = 0; j < 4; ++j) {
    const cd expected = cd(0, 1) * Omega / (2 * Jb) * std::exp(cd(0, -std::numbers::pi * (j + 1) / 2));
    CHECK(std::abs(beta[j] - expected) < 1e-14);
  }
  for (int j = 0; j + 1 < 4; ++j) {
    const double d = std::arg(beta[j + 1] / beta[j]);
    CHECK(std::abs(d + std::numbers::pi / 2) < 1e-12);
  }
  for (const cd& b : aux_chain_steady_state(0.0, Jb, 0.3, cd(0.0), 6)) CHECK(std::abs(b) == 0.0);
}

TEST_CASE("auxiliary steady state solves the chain equations") {
  const double Jb = 0.8, Jab = 0.11, Omega = 1.7;
  const cd alpha(0.4, -1.3);
  const int n = 7;
  const auto beta = aux_chain_steady_state(Omega, Jb, Jab, alpha, n);
  Eigen::VectorXcd rhs(n);
  for (int l = 0; l < n; ++l)
    rhs(l) = -cd(0, 1) * Jab * alpha * std::exp(-cd(0, 1) * (std::numbers::pi / 2 * (l + 1)));
  rhs(0) += Omega;
  const Eigen::VectorXcd solved = aux_chain_matrix(2 * Jb, Jb, n).partialPivLu().solve(rhs);
  for (int j = 0; j < n; ++j) CHECK(std::abs(beta[j] - solved(j)) < 1e-12);
}

TEST_CASE("effective lattice parameters") {
  const auto ec = derive_effective_circuit(preset("P1").circuit);

  SUBCASE("no pump") {
    const auto p = effective_params_from_meanfield(ec, 0.0);
    const cd hop = p.J * std::exp(cd(0, -p.phi));
    const cd bare = ec.J_a * std::exp(cd(0, -std::numbers::pi / 2));
    CHECK(std::abs(hop - bare) < 1e-6 * std::abs(bare));
    CHECK(p.g_s == 0.0);
    CHECK(p.g_c == 0.0);
    CHECK(rel_err(p.Delta, ec.omega_b - ec.omega_a) < 1e-12);
  }
  SUBCASE("P1 pumped") {
    const auto mf = solve_meanfield(ec);
    CHECK(rel_err(mf.alpha_sq, 41.0) < 0.05);
    const auto p = effective_params_from_meanfield(ec, mf);
    CHECK(rel_err(p.J / two_pi, 156e6) < 0.05);
    CHECK(rel_err(p.g_c / two_pi, 93.9e6) < 0.05);
    CHECK(std::abs(p.Delta) <= 1e-6 * ec.kappa);
  }
  SUBCASE("zero-detuning identity") {
    const auto mf = solve_meanfield(ec);
    const double K = ec.K_s + ec.K_c;
    CHECK(rel_err(mf.alpha_sq, ec.kappa * mf.n / K) < 1e-12);
    CHECK(rel_err(mf.detuning_pump, -2.0 * ec.kappa * mf.n) < 1e-12);
    CHECK(rel_err(mf.n, duffing_analytic(drive_parameter(ec))) < 1e-12);
  }
}

TEST_CASE("circuit detuning mode exposes every branch") {
  const auto ec = derive_effective_circuit(preset("P1").circuit);
  const auto mf = solve_meanfield(ec, MeanFieldMode::circuit_detuning);
  REQUIRE(!mf.branches.empty());
  for (std::size_t i = 1; i < mf.branches.size(); ++i)
    CHECK(mf.branches[i - 1].intensity < mf.branches[i].intensity);
  CHECK(mf.branches[mf.branch].stable);
  CHECK_THROWS_AS(solve_meanfield(ec, MeanFieldMode::circuit_detuning, 99), ValidationError);
}

}
