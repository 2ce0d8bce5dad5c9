#include "topotwpa/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "topotwpa/errors.hpp"

namespace topotwpa {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

// x [(kappa/2)^2 + (delta + K x)^2] - Omega^2 and its derivative.
struct IntensityCubic {
  double half_kappa, delta, K, omega_sq;
  double f(double x) const {
    const double d = delta + K * x;
    return x * (half_kappa * half_kappa + d * d) - omega_sq;
  }
  double df(double x) const {
    return 3.0 * K * K * x * x + 4.0 * delta * K * x + half_kappa * half_kappa +
           delta * delta;
  }
};

double bracketed_root(const IntensityCubic& c, double lo, double hi) {
  double flo = c.f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = c.f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = c.df(x);
    if (d == 0.0) break;
    const double next = x - c.f(x) / d;
    if (next < lo || next > hi) break;
    x = next;
  }
  return x;
}

}  // namespace

double duffing_analytic(double xi) {
  if (xi < 0.0 || std::isnan(xi)) {
    throw NegativeDrive("duffing_analytic: xi must be >= 0, got " + std::to_string(xi));
  }
  if (xi == 0.0) return 0.0;
  const double s = 36.0 * xi + std::sqrt(3.0 + 1296.0 * xi * xi);
  const double cbrt_s = std::cbrt(s);
  double n = (std::cbrt(3.0) * cbrt_s * cbrt_s - std::cbrt(9.0)) / (6.0 * cbrt_s);
  // The closed form loses digits to cancellation for small xi.
  for (int it = 0; it < 2; ++it) n -= (n * n * n + 0.25 * n - xi) / (3.0 * n * n + 0.25);
  return n;
}

std::vector<DuffingRoot> duffing_numeric(double Omega_a, double kappa, double delta_pump,
                                         double kerr_sum) {
  if (!(kappa > 0.0)) throw NonPositiveParameter("duffing_numeric: kappa must be > 0");
  if (kerr_sum < 0.0) throw NonPositiveParameter("duffing_numeric: kerr_sum must be >= 0");
  if (Omega_a < 0.0) throw NegativeDrive("duffing_numeric: Omega_a must be >= 0");

  const IntensityCubic c{0.5 * kappa, delta_pump, kerr_sum, Omega_a * Omega_a};
  auto amplitude = [&](double x) {
    return Omega_a / (cd(0.5 * kappa, 0.0) - I * (delta_pump + kerr_sum * x));
  };
  if (Omega_a == 0.0) return {DuffingRoot{0.0, cd{}, true}};

  // Split [0, inf) at the critical points of the cubic; each monotone piece
  // holds at most one root.
  std::vector<double> edges{0.0};
  if (kerr_sum > 0.0) {
    const double a = 3.0 * kerr_sum * kerr_sum;
    const double b = 4.0 * delta_pump * kerr_sum;
    const double cc = c.half_kappa * c.half_kappa + delta_pump * delta_pump;
    const double disc = b * b - 4.0 * a * cc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      for (double r : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (r > 0.0) edges.push_back(r);
      }
    }
  }
  double hi = std::max(edges.back(), 1.0);
  while (c.f(hi) <= 0.0) hi *= 2.0;
  edges.push_back(hi);

  std::vector<DuffingRoot> roots;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double lo = edges[k], up = edges[k + 1];
    const double flo = c.f(lo), fup = c.f(up);
    if (flo == 0.0 && lo > 0.0) {
      roots.push_back({lo, amplitude(lo), c.df(lo) > 0.0});
      continue;
    }
    if ((flo < 0.0) == (fup < 0.0) || fup == 0.0) continue;
    const double x = bracketed_root(c, lo, up);
    if (std::abs(c.f(x)) > 1e-10 * c.omega_sq) {
      throw SolverTolerance("duffing_numeric: residual " + std::to_string(c.f(x)) +
                            " above tolerance");
    }
    roots.push_back({x, amplitude(x), c.df(x) > 0.0});
  }
  if (c.f(hi) == 0.0) roots.push_back({hi, amplitude(hi), true});
  std::sort(roots.begin(), roots.end(),
            [](const DuffingRoot& a, const DuffingRoot& b) { return a.intensity < b.intensity; });
  return roots;
}

Eigen::MatrixXcd aux_chain_matrix(double Gamma, double J_b, int N) {
  if (N < 1) throw DimensionMismatch("aux_chain_matrix: N must be >= 1");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
  m(0, 0) += 0.5 * Gamma;
  m(N - 1, N - 1) += 0.5 * Gamma;
  for (int j = 0; j + 1 < N; ++j) {
    m(j, j + 1) = I * J_b;
    m(j + 1, j) = I * J_b;
  }
  return m;
}

Eigen::MatrixXcd matched_chain_inverse(double J_b, int N) {
  if (N < 1) throw DimensionMismatch("matched_chain_inverse: N must be >= 1");
  if (!(J_b > 0.0)) throw NonPositiveParameter("matched_chain_inverse: J_b must be > 0");
  // e^{-i pi d / 2} cycles through 1, -i, -1, i.
  static const cd phase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  Eigen::MatrixXcd inv(N, N);
  for (int j = 0; j < N; ++j) {
    for (int l = 0; l < N; ++l) inv(j, l) = phase[std::abs(j - l) % 4] / (2.0 * J_b);
  }
  return inv;
}

std::vector<cd> aux_chain_steady_state(double Omega_b, double J_b, double J_ab, cd alpha,
                                       int N) {
  const Eigen::MatrixXcd inv = matched_chain_inverse(J_b, N);
  constexpr double phi = std::numbers::pi / 2.0;
  Eigen::VectorXcd source(N);
  for (int l = 0; l < N; ++l) {
    source(l) = -I * J_ab * alpha * std::exp(-I * (phi * (l + 1)));
  }
  source(0) += Omega_b;
  const Eigen::VectorXcd beta = inv * source;
  return {beta.data(), beta.data() + N};
}

double drive_parameter(const EffectiveCircuit& ec) {
  const double r = ec.Omega_a / ec.kappa;
  return r * r * (ec.K_s + ec.K_c) / ec.kappa;
}

MeanFieldSolution solve_meanfield(const EffectiveCircuit& ec, MeanFieldMode mode,
                                  std::size_t branch) {
  const double K = ec.K_s + ec.K_c;
  if (!(K > 0.0)) throw NonPositiveParameter("solve_meanfield: K_s + K_c must be > 0");
  MeanFieldSolution s;
  s.xi = drive_parameter(ec);
  if (mode == MeanFieldMode::zero_detuning) {
    s.n = duffing_analytic(s.xi);
    s.alpha_sq = ec.kappa * s.n / K;
    s.detuning_pump = -2.0 * ec.kappa * s.n;
    s.alpha = ec.Omega_a / (cd(0.5 * ec.kappa, 0.0) -
                            I * (s.detuning_pump + K * s.alpha_sq));
    s.branches = {DuffingRoot{s.alpha_sq, s.alpha, true}};
  } else {
    s.detuning_pump = ec.omega_b - ec.omega_a;
    s.branches = duffing_numeric(ec.Omega_a, ec.kappa, s.detuning_pump, K);
    if (branch >= s.branches.size()) {
      throw ValidationError("solve_meanfield: branch " + std::to_string(branch) +
                            " out of range (" + std::to_string(s.branches.size()) +
                            " roots)");
    }
    s.branch = branch;
    s.alpha_sq = s.branches[branch].intensity;
    s.alpha = s.branches[branch].amplitude;
    s.n = K * s.alpha_sq / ec.kappa;
  }
  s.beta = aux_chain_steady_state(ec.Omega_b, ec.J_b, ec.J_ab, s.alpha, ec.N);
  return s;
}

namespace {

EffectiveParams effective_params(const EffectiveCircuit& ec, double detuning,
                                 double alpha_sq) {
  if (alpha_sq < 0.0) throw ValidationError("alpha_sq must be >= 0");
  EffectiveParams p;
  p.N = ec.N;
  p.kappa = ec.kappa;
  p.J = ec.J_a + 2.0 * ec.K_c * alpha_sq;
  p.Delta = detuning + 2.0 * (ec.K_s + ec.K_c) * alpha_sq;
  p.g_s = (ec.K_s - ec.K_c) * alpha_sq;
  p.g_c = ec.K_c * alpha_sq;
  p.phi = std::numbers::pi / 2.0;
  if (p.J < 0.0) {
    // J e^{-i phi} is invariant under (J, phi) -> (-J, phi + pi).
    p.J = -p.J;
    p.phi -= std::numbers::pi;
  }
  return p;
}

}  // namespace

EffectiveParams effective_params_from_meanfield(const EffectiveCircuit& ec,
                                                double alpha_sq) {
  return effective_params(ec, ec.omega_b - ec.omega_a, alpha_sq);
}

EffectiveParams effective_params_from_meanfield(const EffectiveCircuit& ec,
                                                const MeanFieldSolution& mf) {
  return effective_params(ec, mf.detuning_pump, mf.alpha_sq);
}

}  // namespace topotwpa
