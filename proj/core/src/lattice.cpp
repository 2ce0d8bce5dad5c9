#include "topotwpa/lattice.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "topotwpa/errors.hpp"

namespace topotwpa {

namespace {
using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};
}  // namespace

void validate(const EffectiveParams& p) {
  if (p.N < 1) throw ValidationError("N: must be >= 1, got " + std::to_string(p.N));
  if (!(p.kappa > 0.0) || !std::isfinite(p.kappa)) {
    throw ValidationError("kappa: must be positive and finite");
  }
  for (const auto& [v, name] : {std::pair{p.Delta, "Delta"}, {p.J, "J"}, {p.phi, "phi"},
                                {p.g_s, "g_s"}, {p.g_c, "g_c"}}) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + ": must be finite");
  }
}

DisorderRealization DisorderRealization::uniform(const EffectiveParams& p) {
  const auto n = static_cast<std::size_t>(p.N);
  const std::size_t b = n - 1;
  return DisorderRealization{std::vector<double>(n, p.Delta), std::vector<double>(n, p.kappa),
                             std::vector<double>(n, p.g_s),   std::vector<double>(b, p.J),
                             std::vector<double>(b, p.phi),   std::vector<double>(b, p.g_c)};
}

DisorderRealization sample_disorder(const EffectiveParams& base,
                                    const DisorderSigmas& sigmas, std::uint64_t seed) {
  validate(base);
  for (double s : {sigmas.delta, sigmas.kappa, sigmas.J, sigmas.g_s, sigmas.g_c, sigmas.phi}) {
    if (!(s >= 0.0)) throw ValidationError("disorder sigma must be >= 0");
  }
  DisorderRealization d = DisorderRealization::uniform(base);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const double J = base.J;

  // Every quantity is drawn even at zero sigma so that the stream position
  // of a family does not depend on the others.
  for (auto& v : d.delta_onsite) v += sigmas.delta * J * z(rng);
  for (auto& v : d.kappa_site) {
    double k = base.kappa + sigmas.kappa * J * z(rng);
    while (!(k > 0.0)) k = base.kappa + sigmas.kappa * J * z(rng);
    v = k;
  }
  for (auto& v : d.g_s_site) v += sigmas.g_s * J * z(rng);
  for (auto& v : d.J_bond) v += sigmas.J * J * z(rng);
  for (auto& v : d.phi_bond) v += sigmas.phi * std::abs(base.phi) * z(rng);
  for (auto& v : d.g_c_bond) v += sigmas.g_c * J * z(rng);
  return d;
}

NambuMatrix::NambuMatrix(Eigen::MatrixXcd entries, std::vector<double> kappa_site)
    : n_(static_cast<int>(kappa_site.size())),
      m_(std::move(entries)),
      kappa_(std::move(kappa_site)) {
  if (m_.rows() != 2 * n_ || m_.cols() != 2 * n_) {
    throw DimensionMismatch("NambuMatrix: entries must be 2N x 2N with N = " +
                            std::to_string(n_));
  }
}

double NambuMatrix::mean_kappa() const {
  return std::accumulate(kappa_.begin(), kappa_.end(), 0.0) / static_cast<double>(n_);
}

Eigen::MatrixXcd NambuMatrix::coherent_block() const {
  Eigen::MatrixXcd m = particle_block();
  for (int j = 0; j < n_; ++j) m(j, j) += I * (0.5 * kappa_[static_cast<std::size_t>(j)]);
  return m;
}

Eigen::MatrixXd NambuMatrix::pump_block() const {
  return m_.bottomLeftCorner(n_, n_).real();
}

Eigen::MatrixXcd NambuMatrix::shifted(double omega) const {
  Eigen::MatrixXcd s = -m_;
  s.diagonal().array() += omega;
  return s;
}

NambuMatrix build_hnh(const EffectiveParams& p) {
  return build_hnh(p, DisorderRealization::uniform(p));
}

NambuMatrix build_hnh(const EffectiveParams& p, const DisorderRealization& d) {
  validate(p);
  const int n = p.N;
  const auto un = static_cast<std::size_t>(n);
  const std::size_t nb = un - 1;
  if (d.delta_onsite.size() != un || d.kappa_site.size() != un || d.g_s_site.size() != un ||
      d.J_bond.size() != nb || d.phi_bond.size() != nb || d.g_c_bond.size() != nb) {
    throw DimensionMismatch("build_hnh: disorder realization does not match N = " +
                            std::to_string(n));
  }
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    M(j, j) = -d.delta_onsite[uj];
    K(j, j) = d.g_s_site[uj];
    if (j + 1 < n) {
      const cd hop = d.J_bond[uj] * std::exp(-I * d.phi_bond[uj]);
      M(j, j + 1) = hop;
      M(j + 1, j) = std::conj(hop);
      K(j, j + 1) = d.g_c_bond[uj];
      K(j + 1, j) = d.g_c_bond[uj];
    }
  }
  Eigen::MatrixXcd h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = M;
  h.topRightCorner(n, n) = -K.cast<cd>();
  h.bottomLeftCorner(n, n) = K.cast<cd>();
  h.bottomRightCorner(n, n) = -M.conjugate();
  for (int j = 0; j < n; ++j) {
    const double half = 0.5 * d.kappa_site[static_cast<std::size_t>(j)];
    h(j, j) -= I * half;
    h(n + j, n + j) -= I * half;
  }
  return NambuMatrix(std::move(h), d.kappa_site);
}

Eigen::MatrixXcd particle_hole_conjugate(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows() / 2;
  Eigen::MatrixXcd c = h.conjugate();
  Eigen::MatrixXcd out(h.rows(), h.cols());
  out.topLeftCorner(n, n) = c.bottomRightCorner(n, n);
  out.topRightCorner(n, n) = c.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = c.topRightCorner(n, n);
  out.bottomRightCorner(n, n) = c.topLeftCorner(n, n);
  return out;
}

StabilityReport stability(const NambuMatrix& h, double relative_tolerance) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h.entries(), false);
  if (es.info() != Eigen::Success) {
    throw EigenSolverFailure("stability: eigenvalue iteration did not converge");
  }
  StabilityReport r;
  r.eigenvalues = es.eigenvalues();
  r.max_im_eigenvalue = r.eigenvalues.imag().maxCoeff();
  if (!std::isfinite(r.max_im_eigenvalue)) {
    throw EigenSolverFailure("stability: non-finite eigenvalues");
  }
  r.stable = r.max_im_eigenvalue < -relative_tolerance * h.mean_kappa();
  return r;
}

}  // namespace topotwpa
