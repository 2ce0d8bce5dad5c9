#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "topotwpa/effective_params.hpp"
#include "topotwpa/lattice.hpp"

namespace testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::abs(want);
}

/// Random lattice handles in units of J = 1, rejection-sampled until stable.
inline topotwpa::EffectiveParams random_stable_params(std::mt19937_64& rng, int n_min,
                                                      int n_max) {
  std::uniform_int_distribution<int> n_dist(n_min, n_max);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    topotwpa::EffectiveParams p;
    p.N = n_dist(rng);
    p.J = 1.0;
    p.Delta = -1.0 + 2.0 * u(rng);
    p.phi = 2.0 * std::numbers::pi * u(rng);
    p.kappa = 0.5 + 3.5 * u(rng);
    p.g_s = 1.2 * u(rng);
    p.g_c = 1.2 * u(rng);
    if (topotwpa::stability(topotwpa::build_hnh(p)).stable) return p;
  }
}

/// -i * integral_0^inf e^{i w t} x(t) dt with x' = -i H x, x(0) = e_m, by RK4
/// and the trapezoid rule. Equals column m of (w - H)^{-1} for stable H.
inline Eigen::VectorXcd impulse_column(const Eigen::MatrixXcd& h, int m, double w, double dt,
                                double t_end) {
  const std::complex<double> I(0, 1);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(h.rows());
  x(m) = 1.0;
  auto f = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return -I * (h * y); };
  Eigen::VectorXcd acc = 0.5 * x;
  const auto steps = static_cast<long>(t_end / dt);
  for (long k = 1; k <= steps; ++k) {
    const Eigen::VectorXcd k1 = f(x);
    const Eigen::VectorXcd k2 = f(x + 0.5 * dt * k1);
    const Eigen::VectorXcd k3 = f(x + 0.5 * dt * k2);
    const Eigen::VectorXcd k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    acc += std::exp(I * (w * dt * k)) * x;
  }
  return -I * dt * acc;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("topotwpa_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
