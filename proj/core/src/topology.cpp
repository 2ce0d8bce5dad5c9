#include "topotwpa/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "topotwpa/errors.hpp"
#include "topotwpa/parallel.hpp"
#include "topotwpa/response.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

using cd = std::complex<double>;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(r);
    ss_res += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

bool is_zero_mode(double e0_over_J, int n_sites) {
  return e0_over_J <= 1.0 / static_cast<double>(n_sites);
}

}  // namespace

SpectralDecomposition svd_spectrum(const NambuMatrix& h, double omega) {
  const Eigen::MatrixXcd a = h.shifted(omega);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!s.allFinite() || !svd.matrixU().allFinite() || !svd.matrixV().allFinite()) {
    throw SvdFailure("svd_spectrum: non-finite decomposition");
  }
  // Eigen sorts descending; flip to ascending.
  SpectralDecomposition d;
  d.omega = omega;
  d.singular_values = s.reverse();
  d.left_vectors = svd.matrixU().rowwise().reverse();
  d.right_vectors = svd.matrixV().rowwise().reverse();
  return d;
}

Eigen::VectorXd singular_values(const NambuMatrix& h, double omega) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(h.shifted(omega));
  const Eigen::VectorXd& s = svd.singularValues();
  if (!s.allFinite()) throw SvdFailure("singular_values: non-finite values");
  return s.reverse();
}

Eigen::MatrixXcd extended_hamiltonian(const NambuMatrix& h, double omega) {
  const Eigen::MatrixXcd a = h.shifted(omega);
  const Eigen::Index d = a.rows();
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  x.topRightCorner(d, d) = a;
  x.bottomLeftCorner(d, d) = a.adjoint();
  return x;
}

std::string_view to_string(PhaseClass c) {
  switch (c) {
    case PhaseClass::topological: return "topological";
    case PhaseClass::trivial: return "trivial";
    case PhaseClass::unstable: return "unstable";
  }
  return "unknown";
}

SiteRange default_fit_range(int n_sites) {
  SiteRange r{1, n_sites - 4};
  if (r.size() < 3) r = SiteRange{0, n_sites - 1};
  return r;
}

ZetaFit localization_length(const NambuMatrix& h, double omega,
                            std::optional<SiteRange> range) {
  const int n = h.n_sites();
  const SiteRange fr = range.value_or(default_fit_range(n));
  if (fr.first < 0 || fr.last >= n || fr.size() < 3) {
    throw DegenerateFit("localization_length: fit range [" + std::to_string(fr.first) +
                        ", " + std::to_string(fr.last) + "] needs at least 3 sites in a chain of " +
                        std::to_string(n));
  }
  // First column of G = V S^-1 U^dagger scaled by E_0, so that deep in the
  // topological phase (E_0 near underflow) the ratios stay finite.
  const SpectralDecomposition sd = svd_spectrum(h, omega);
  const double e0 = sd.singular_values(0);
  Eigen::VectorXcd col = Eigen::VectorXcd::Zero(h.dim());
  for (Eigen::Index k = 0; k < sd.singular_values.size(); ++k) {
    const double s = sd.singular_values(k);
    const double w = e0 > 0.0 ? e0 / s : (s == 0.0 ? 1.0 : 0.0);
    col += sd.right_vectors.col(k) * (w * std::conj(sd.left_vectors(0, k)));
  }
  ZetaFit out;
  out.range = fr;
  const cd g11 = col(0);
  std::vector<double> log_mag(static_cast<std::size_t>(n)), phase(static_cast<std::size_t>(n));
  double prev = 0.0;
  for (int j = 0; j < n; ++j) {
    const cd r = col(j) / g11;
    out.ratios.push_back(r);
    log_mag[static_cast<std::size_t>(j)] = std::log(std::abs(r));
    // Nearest-branch continuation along the chain.
    double a = std::arg(r);
    a += two_pi * std::round((prev - a) / two_pi);
    phase[static_cast<std::size_t>(j)] = a;
    prev = a;
  }
  std::vector<double> x, yr, yi;
  for (int j = fr.first; j <= fr.last; ++j) {
    x.push_back(static_cast<double>(j));
    yr.push_back(log_mag[static_cast<std::size_t>(j)]);
    yi.push_back(phase[static_cast<std::size_t>(j)]);
  }
  const LineFit re = fit_line(x, yr);
  const LineFit im = fit_line(x, yi);
  out.zeta = cd(re.slope, im.slope);
  out.r2_re = re.r2;
  out.r2_im = im.r2;
  out.residuals_re = re.residuals;
  out.residuals_im = im.residuals;
  return out;
}

double zero_mode_decay_rate(const EffectiveParams& p, double omega,
                            std::span<const int> sizes) {
  if (sizes.size() < 2) throw DegenerateFit("zero_mode_decay_rate: need at least 2 sizes");
  std::vector<double> x, y;
  for (int n : sizes) {
    EffectiveParams q = p;
    q.N = n;
    const Eigen::VectorXd s = singular_values(build_hnh(q), omega);
    x.push_back(static_cast<double>(n));
    y.push_back(std::log(s(0) / p.J));
  }
  return fit_line(x, y).slope;
}

TopologyReport classify_point(const EffectiveParams& p, double omega) {
  return classify_point(build_hnh(p), p.J, omega);
}

TopologyReport classify_point(const NambuMatrix& h, double J, double omega) {
  TopologyReport r;
  const StabilityReport st = stability(h);
  r.max_im_eigenvalue = st.max_im_eigenvalue;
  const Eigen::VectorXd s = singular_values(h, omega);
  r.e0 = s(0) / J;
  r.gap = s.size() > 1 ? s(1) / J : std::nan("");
  r.window_lo = r.window_hi = omega;
  if (!st.stable) {
    r.classification = PhaseClass::unstable;
    return r;
  }
  if (!is_zero_mode(r.e0, h.n_sites())) {
    r.classification = PhaseClass::trivial;
    return r;
  }
  r.classification = PhaseClass::topological;
  if (h.n_sites() >= 3) r.zeta = localization_length(h, omega).zeta;
  return r;
}

std::vector<double> frequency_grid(double lo, double hi, int points) {
  if (points < 2) throw ValidationError("frequency_grid: need at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  }
  return g;
}

std::vector<double> default_frequency_grid(double J) {
  return frequency_grid(-3.0 * J, 3.0 * J, 301);
}

TopologyReport topological_window(const EffectiveParams& p,
                                  std::span<const double> omega_grid) {
  return topological_window(build_hnh(p), p.J, omega_grid);
}

TopologyReport topological_window(const NambuMatrix& h, double J,
                                  std::span<const double> omega_grid, bool compute_zeta) {
  if (omega_grid.size() < 3) throw ValidationError("topological_window: need >= 3 grid points");
  for (std::size_t i = 1; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > omega_grid[i - 1])) {
      throw ValidationError("topological_window: grid must be strictly ascending");
    }
  }
  TopologyReport r;
  const StabilityReport st = stability(h);
  r.max_im_eigenvalue = st.max_im_eigenvalue;
  const std::size_t m = omega_grid.size();
  std::vector<double> e0(m), e1(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd s = singular_values(h, omega_grid[i]);
    e0[i] = s(0) / J;
    e1[i] = s.size() > 1 ? s(1) / J : std::nan("");
  }
  std::size_t best_first = 0, best_len = 0;
  for (std::size_t i = 0; i < m;) {
    if (!is_zero_mode(e0[i], h.n_sites())) {
      ++i;
      continue;
    }
    std::size_t k = i;
    while (k < m && is_zero_mode(e0[k], h.n_sites())) ++k;
    if (k - i > best_len) {
      best_len = k - i;
      best_first = i;
    }
    i = k;
  }
  if (!st.stable) {
    r.classification = PhaseClass::unstable;
    r.e0 = *std::min_element(e0.begin(), e0.end());
    return r;
  }
  if (best_len == 0) {
    r.classification = PhaseClass::trivial;
    r.e0 = *std::min_element(e0.begin(), e0.end());
    r.gap = 0.0;
    r.w_top = 0.0;
    return r;
  }
  const std::size_t last = best_first + best_len - 1;
  const std::size_t centre = best_first + (best_len - 1) / 2;
  r.classification = PhaseClass::topological;
  r.window_lo = omega_grid[best_first];
  r.window_hi = omega_grid[last];
  r.w_top = r.window_hi - r.window_lo;
  r.gap = *std::min_element(e1.begin() + static_cast<std::ptrdiff_t>(best_first),
                            e1.begin() + static_cast<std::ptrdiff_t>(last + 1));
  r.e0 = e0[centre];
  if (compute_zeta && h.n_sites() >= 3) {
    r.zeta = localization_length(h, omega_grid[centre]).zeta;
  }
  return r;
}

EdgeStates edge_states(const NambuMatrix& h, double J, double omega) {
  const int n = h.n_sites();
  if (!stability(h).stable) throw NotTopological("edge_states: steady state is unstable");
  const SpectralDecomposition d = svd_spectrum(h, omega);
  EdgeStates e;
  e.e0 = d.singular_values(0) / J;
  if (!is_zero_mode(e.e0, n)) {
    throw NotTopological("edge_states: E_0/J = " + std::to_string(e.e0) + " exceeds 1/N");
  }
  e.u0 = d.left_vectors.col(0);
  e.v0 = d.right_vectors.col(0);
  const int q = std::max(1, n / 4);
  auto weight = [n](const Eigen::VectorXcd& x, int first, int count) {
    double w = 0.0;
    for (int j = first; j < first + count; ++j) w += std::norm(x(j)) + std::norm(x(n + j));
    return w;
  };
  e.u_first_quartile_weight = weight(e.u0, 0, q);
  e.u_last_quartile_weight = weight(e.u0, n - q, q);
  e.v_first_quartile_weight = weight(e.v0, 0, q);
  e.v_last_quartile_weight = weight(e.v0, n - q, q);
  return e;
}

PhaseCell phase_cell(const PhaseGrid& grid, const EffectiveParams& base, double omega,
                     std::size_t kappa_index, std::size_t gc_index) {
  PhaseCell c;
  c.kappa_over_J = grid.kappa_over_J.at(kappa_index);
  c.gc_over_J = grid.gc_over_J.at(gc_index);
  try {
    EffectiveParams p = base;
    p.kappa = c.kappa_over_J * base.J;
    p.g_c = c.gc_over_J * base.J;
    p.g_s = grid.gs_over_gc * p.g_c;
    const NambuMatrix h = build_hnh(p);
    const TopologyReport r = classify_point(h, p.J, omega);
    c.classification = r.classification;
    c.e0 = r.e0;
    c.gap = r.gap;
    if (r.classification == PhaseClass::topological) {
      c.re_zeta = r.zeta.real();
      if (grid.window_gap) {
        const std::vector<double> g = default_frequency_grid(p.J);
        c.gap = topological_window(h, p.J, g, false).gap;
      }
    }
  } catch (const Error& ex) {
    c.error = ex.what();
  }
  return c;
}

std::vector<PhaseCell> phase_map(const PhaseGrid& grid, const EffectiveParams& base,
                                 double omega, unsigned workers) {
  const std::size_t nk = grid.kappa_over_J.size();
  const std::size_t ng = grid.gc_over_J.size();
  std::vector<PhaseCell> cells(nk * ng);
  parallel_for(cells.size(), workers, [&](std::size_t idx) {
    cells[idx] = phase_cell(grid, base, omega, idx / ng, idx % ng);
  });
  return cells;
}

}  // namespace topotwpa
