#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "topotwpa/effective_params.hpp"

namespace topotwpa {

/// Per-site and per-bond values of every effective parameter. Bond b couples
/// sites b and b+1 (0-based).
struct DisorderRealization {
  std::vector<double> delta_onsite;  // N
  std::vector<double> kappa_site;    // N
  std::vector<double> g_s_site;      // N
  std::vector<double> J_bond;        // N-1
  std::vector<double> phi_bond;      // N-1
  std::vector<double> g_c_bond;      // N-1

  /// The clean chain described by `p`.
  static DisorderRealization uniform(const EffectiveParams& p);

  int n_sites() const { return static_cast<int>(delta_onsite.size()); }
};

/// Relative disorder strengths. Standard deviations are sigma * J for
/// {Delta, kappa, J, g_s, g_c} and sigma * phi for the hopping phase.
struct DisorderSigmas {
  double delta = 0.0;
  double kappa = 0.0;
  double J = 0.0;
  double g_s = 0.0;
  double g_c = 0.0;
  double phi = 0.0;

  bool operator==(const DisorderSigmas&) const = default;
};

/// Draws one realization. Each quantity is an independent Gaussian; a site
/// whose decay comes out non-positive is redrawn. The draw order is fixed,
/// so the result depends on `seed` only.
DisorderRealization sample_disorder(const EffectiveParams& base,
                                    const DisorderSigmas& sigmas, std::uint64_t seed);

/// The 2N x 2N dynamical matrix
///
///   [ M - i kappa/2      -K          ]
///   [ K             -M* - i kappa/2  ]
///
/// with M Hermitian and K real symmetric, open boundaries. Immutable.
class NambuMatrix {
 public:
  NambuMatrix(Eigen::MatrixXcd entries, std::vector<double> kappa_site);

  int n_sites() const { return n_; }
  int dim() const { return 2 * n_; }
  const Eigen::MatrixXcd& entries() const { return m_; }
  const std::vector<double>& kappa_site() const { return kappa_; }
  double kappa(int site) const { return kappa_[static_cast<std::size_t>(site)]; }
  double mean_kappa() const;

  /// M - i kappa/2 (particle block).
  Eigen::MatrixXcd particle_block() const { return m_.topLeftCorner(n_, n_); }
  /// -M* - i kappa/2 (hole block).
  Eigen::MatrixXcd hole_block() const { return m_.bottomRightCorner(n_, n_); }
  /// -K (upper right).
  Eigen::MatrixXcd pairing_block() const { return m_.topRightCorner(n_, n_); }
  /// Coherent hopping/detuning part M, recovered from the particle block.
  Eigen::MatrixXcd coherent_block() const;
  /// Real symmetric pumping matrix K.
  Eigen::MatrixXd pump_block() const;

  /// omega - H_nh.
  Eigen::MatrixXcd shifted(double omega) const;

 private:
  int n_;
  Eigen::MatrixXcd m_;
  std::vector<double> kappa_;
};

NambuMatrix build_hnh(const EffectiveParams& p);
/// Throws DimensionMismatch if the realization does not fit p.N.
NambuMatrix build_hnh(const EffectiveParams& p, const DisorderRealization& d);

/// Particle/hole swap S H* S for the 2N x 2N layout.
Eigen::MatrixXcd particle_hole_conjugate(const Eigen::MatrixXcd& h);

struct StabilityReport {
  double max_im_eigenvalue = 0.0;
  bool stable = false;
  Eigen::VectorXcd eigenvalues;
};

/// Default marginal-stability tolerance, relative to the mean decay.
inline constexpr double kStabilityTolerance = 1e-9;

/// Steady state exists iff every eigenvalue has Im < -tol * mean(kappa).
/// Throws EigenSolverFailure if the eigen-solver does not converge.
StabilityReport stability(const NambuMatrix& h,
                          double relative_tolerance = kStabilityTolerance);

}  // namespace topotwpa
