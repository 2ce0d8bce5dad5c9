#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "topotwpa/effective_params.hpp"
#include "topotwpa/lattice.hpp"

namespace topotwpa {

/// Singular value decomposition omega - H_nh = U diag(E) V^dagger with the
/// singular values sorted ascending and the columns of U, V aligned to them.
struct SpectralDecomposition {
  double omega = 0.0;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXcd left_vectors;   // u^(n) in column n
  Eigen::MatrixXcd right_vectors;  // v^(n) in column n
};

/// Throws SvdFailure if the decomposition contains non-finite values.
SpectralDecomposition svd_spectrum(const NambuMatrix& h, double omega);

/// Singular values only, ascending.
Eigen::VectorXd singular_values(const NambuMatrix& h, double omega);

/// Hermitian 4N x 4N matrix [[0, w - H], [(w - H)^dagger, 0]]; its spectrum is
/// plus/minus the singular values of w - H.
Eigen::MatrixXcd extended_hamiltonian(const NambuMatrix& h, double omega);

enum class PhaseClass { topological, trivial, unstable };

std::string_view to_string(PhaseClass c);

/// Inclusive 0-based site interval.
struct SiteRange {
  int first = 0;
  int last = 0;
  int size() const { return last - first + 1; }
};

/// Default window for the Green's-function fit: sites 2..N-3 in 1-based
/// numbering, widened to the whole chain when that leaves fewer than 3 sites.
SiteRange default_fit_range(int n_sites);

struct ZetaFit {
  std::complex<double> zeta;  // per site; Re > 0 means growth to the right
  double r2_re = 0.0;
  double r2_im = 0.0;
  SiteRange range;
  std::vector<std::complex<double>> ratios;  // G_j1 / G_11 for every site
  std::vector<double> residuals_re;          // over `range`
  std::vector<double> residuals_im;
};

/// Fits log(G_j1 / G_11) = zeta (j - 1) over `range`. Throws DegenerateFit
/// when the range holds fewer than 3 sites.
ZetaFit localization_length(const NambuMatrix& h, double omega,
                            std::optional<SiteRange> range = std::nullopt);

/// Slope of ln E_0(N) against N, i.e. -Re zeta estimated from the zero-mode
/// energy. Secondary diagnostic for the Green's-function fit.
double zero_mode_decay_rate(const EffectiveParams& p, double omega,
                            std::span<const int> sizes);

struct TopologyReport {
  double e0 = 0.0;     // E_0 / J at the reference frequency
  double gap = 0.0;    // Delta_top / J
  double w_top = 0.0;  // rad/s
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::complex<double> zeta{std::nan(""), std::nan("")};
  PhaseClass classification = PhaseClass::trivial;
  double max_im_eigenvalue = 0.0;
};

/// Classification at one frequency: unstable, topological (E_0/J <= 1/N) or
/// trivial. zeta is filled when topological.
TopologyReport classify_point(const EffectiveParams& p, double omega);
TopologyReport classify_point(const NambuMatrix& h, double J, double omega);

/// Uniform grid of `points` frequencies over [lo, hi].
std::vector<double> frequency_grid(double lo, double hi, int points);
/// [-3J, 3J] with 301 points.
std::vector<double> default_frequency_grid(double J);

/// Longest contiguous run of grid points with E_0/J <= 1/N. w_top is its
/// width, gap the minimum of E_1/J over it, e0 and zeta taken at its centre.
TopologyReport topological_window(const EffectiveParams& p,
                                  std::span<const double> omega_grid);
TopologyReport topological_window(const NambuMatrix& h, double J,
                                  std::span<const double> omega_grid,
                                  bool compute_zeta = true);

struct EdgeStates {
  Eigen::VectorXcd u0;  // left singular vector of E_0 (left-localized)
  Eigen::VectorXcd v0;  // right singular vector of E_0 (right-localized)
  double e0 = 0.0;
  double u_first_quartile_weight = 0.0;
  double u_last_quartile_weight = 0.0;
  double v_first_quartile_weight = 0.0;
  double v_last_quartile_weight = 0.0;
};

/// Zero-mode singular vectors. Throws NotTopological unless the point is
/// stable with E_0/J <= 1/N.
EdgeStates edge_states(const NambuMatrix& h, double J, double omega);

struct PhaseGrid {
  std::vector<double> kappa_over_J;
  std::vector<double> gc_over_J;
  /// g_s follows g_c with this ratio.
  double gs_over_gc = 1.0;
  /// Compute the gap as Delta_top over the topological window (slower)
  /// instead of E_1/J at the classification frequency.
  bool window_gap = false;
};

struct PhaseCell {
  double kappa_over_J = 0.0;
  double gc_over_J = 0.0;
  PhaseClass classification = PhaseClass::trivial;
  double re_zeta = std::nan("");
  double e0 = std::nan("");
  double gap = std::nan("");
  std::string error;  // non-empty if the cell failed
};

/// One cell of a phase map; never throws for numerical failures.
PhaseCell phase_cell(const PhaseGrid& grid, const EffectiveParams& base, double omega,
                     std::size_t kappa_index, std::size_t gc_index);

/// Row-major over (kappa, g_c): cell (i, k) lands at i * gc.size() + k.
/// `workers` = 0 selects the default worker count.
std::vector<PhaseCell> phase_map(const PhaseGrid& grid, const EffectiveParams& base,
                                 double omega, unsigned workers = 0);

}  // namespace topotwpa
