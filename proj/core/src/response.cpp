#include "topotwpa/response.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topotwpa/errors.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void check_site(const NambuMatrix& h, int site, const char* what) {
  if (site < 0 || site >= h.n_sites()) {
    throw DimensionMismatch(std::string(what) + ": site " + std::to_string(site) +
                            " outside chain of " + std::to_string(h.n_sites()));
  }
}

double noise_density(const GreenFunction& g, const NambuMatrix& h, int j) {
  const int n = h.n_sites();
  double sum = 0.0;
  for (int l = 0; l < n; ++l) sum += h.kappa(l) * std::norm(g.anomalous(j, l));
  return h.kappa(j) * sum;
}

// Noise density of every site at one frequency.
void densities(const NambuMatrix& h, double omega, std::vector<double>& out) {
  const GreenFunction g = green(h, omega);
  for (int j = 0; j < h.n_sites(); ++j) out[static_cast<std::size_t>(j)] = noise_density(g, h, j);
}

}  // namespace

GreenFunction::GreenFunction(double omega, Eigen::MatrixXcd matrix)
    : omega_(omega), n_(static_cast<int>(matrix.rows() / 2)), g_(std::move(matrix)) {}

GreenFunction green(const NambuMatrix& h, double omega) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(h.shifted(omega));
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw SingularMatrix("green: omega - H_nh is singular (rcond " + std::to_string(rcond) +
                         ") at omega = " + std::to_string(omega));
  }
  return GreenFunction(omega, lu.inverse());
}

Gains gains(const NambuMatrix& h, double omega_s, int input_site, int output_site) {
  return gains(green(h, omega_s), green(h, -omega_s), h, input_site, output_site);
}

Gains gains(const GreenFunction& at_signal, const GreenFunction& at_idler,
            const NambuMatrix& h, int m, int j) {
  check_site(h, m, "gains");
  check_site(h, j, "gains");
  const double pref = h.kappa(m) * h.kappa(j);
  Gains g;
  g.forward = pref * std::norm(at_signal.normal(j, m));
  g.reverse = pref * std::norm(at_signal.normal(m, j));
  g.idler = pref * std::norm(at_idler.anomalous(j, m));
  g.idler_reverse = pref * std::norm(at_idler.anomalous(m, j));
  return g;
}

Noise noise(const NambuMatrix& h, double omega, int site, int input_site) {
  return noise(green(h, omega), h, site, input_site);
}

Noise noise(const GreenFunction& g, const NambuMatrix& h, int site, int input_site) {
  check_site(h, site, "noise");
  check_site(h, input_site, "noise");
  Noise out;
  out.density = noise_density(g, h, site);
  const double gain = h.kappa(input_site) * h.kappa(site) * std::norm(g.normal(site, input_site));
  out.added = gain > 0.0 ? out.density / gain : kNoGain;
  return out;
}

double output_commutator(const GreenFunction& g, const NambuMatrix& h, int j) {
  check_site(h, j, "output_commutator");
  double normal = 0.0;
  for (int l = 0; l < h.n_sites(); ++l) {
    const cd t = (j == l ? 1.0 : 0.0) - I * std::sqrt(h.kappa(j) * h.kappa(l)) * g.normal(j, l);
    normal += std::norm(t);
  }
  return normal - noise_density(g, h, j);
}

double noise_asymmetry(const NambuMatrix& h, double omega) {
  const GreenFunction g = green(h, omega);
  return noise_density(g, h, 0) / noise_density(g, h, h.n_sites() - 1);
}

double bandwidth_20db(const NambuMatrix& h, std::span<const double> omega_grid,
                      double threshold_db) {
  const int last = h.n_sites() - 1;
  std::vector<double> db(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    const GreenFunction g = green(h, omega_grid[i]);
    db[i] = to_db(h.kappa(0) * h.kappa(last) * std::norm(g.normal(last, 0)));
  }
  double width = 0.0;
  for (std::size_t i = 0; i + 1 < omega_grid.size(); ++i) {
    const double a = db[i] - threshold_db, b = db[i + 1] - threshold_db;
    const double step = omega_grid[i + 1] - omega_grid[i];
    if (a >= 0.0 && b >= 0.0) {
      width += step;
    } else if (a >= 0.0 || b >= 0.0) {
      width += step * std::max(a, b) / std::abs(a - b);
    }
  }
  return width;
}

CoherentOutput coherent_output(const NambuMatrix& h, double phi, const SignalSpec& s,
                               cd alpha, int j) {
  const int m = s.input_site;
  check_site(h, m, "coherent_output");
  check_site(h, j, "coherent_output");
  const GreenFunction gs = green(h, s.omega_s);
  const GreenFunction gi = green(h, -s.omega_s);
  const double k = std::sqrt(h.kappa(j) * h.kappa(m));
  const double jj = j + 1, mm = m + 1;
  CoherentOutput out;
  out.signal = ((j == m ? 1.0 : 0.0) - I * k * gs.normal(j, m)) *
               std::exp(-I * (phi * (jj - mm))) * s.alpha_s;
  out.idler = -I * k * gi.anomalous(j, m) * std::exp(-I * (phi * (jj + mm))) *
              std::conj(s.alpha_s);
  out.pump = std::sqrt(h.kappa(j)) * alpha * std::exp(-I * (phi * jj));
  return out;
}

NoiseIntegral integrated_noise(const NambuMatrix& h, double J, const QuadratureOptions& o) {
  const int n = h.n_sites();
  const auto un = static_cast<std::size_t>(n);
  const double omega_max = o.omega_max_over_J * J;
  double step = o.step_over_J * J;
  auto intervals = static_cast<long>(std::ceil(2.0 * omega_max / step));
  step = 2.0 * omega_max / static_cast<double>(intervals);

  // Running sum of interior samples; the end points carry weight 1/2.
  std::vector<double> ends(un, 0.0), interior(un, 0.0), buf(un), lo_end(un), hi_end(un);
  densities(h, -omega_max, lo_end);
  densities(h, omega_max, hi_end);
  for (std::size_t j = 0; j < un; ++j) ends[j] = 0.5 * (lo_end[j] + hi_end[j]);
  for (long i = 1; i < intervals; ++i) {
    densities(h, -omega_max + step * static_cast<double>(i), buf);
    for (std::size_t j = 0; j < un; ++j) interior[j] += buf[j];
  }
  auto estimate = [&](double hstep) {
    std::vector<double> t(un);
    for (std::size_t j = 0; j < un; ++j) t[j] = hstep * (ends[j] + interior[j]);
    return t;
  };
  std::vector<double> current = estimate(step);
  bool converged = false;
  for (int halving = 0; halving < o.max_halvings; ++halving) {
    // Midpoints of the current grid.
    for (long i = 0; i < intervals; ++i) {
      densities(h, -omega_max + step * (static_cast<double>(i) + 0.5), buf);
      for (std::size_t j = 0; j < un; ++j) interior[j] += buf[j];
    }
    step *= 0.5;
    intervals *= 2;
    std::vector<double> next = estimate(step);
    double change = 0.0;
    for (std::size_t j = 0; j < un; ++j) {
      if (next[j] > 0.0) change = std::max(change, std::abs(next[j] - current[j]) / next[j]);
    }
    current = std::move(next);
    if (change < o.relative_tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw IntegrationNotConverged("integrated_noise: no convergence after " +
                                  std::to_string(o.max_halvings) + " halvings");
  }
  NoiseIntegral out;
  out.omega_max = omega_max;
  out.step = step;
  out.photons.resize(un);
  for (std::size_t j = 0; j < un; ++j) {
    const double tail = std::max(lo_end[j], hi_end[j]) * omega_max;
    if (current[j] > 0.0 && tail > o.tail_tolerance * current[j]) {
      throw IntegrationNotConverged("integrated_noise: tail at site " + std::to_string(j) +
                                    " exceeds tolerance; increase omega_max");
    }
    out.photons[j] = current[j] / (two_pi * h.kappa(static_cast<int>(j)));
  }
  return out;
}

std::vector<Occupation> max_occupation_profile(const NambuMatrix& h, double J,
                                               const SignalSpec& s, double alpha_sq,
                                               const QuadratureOptions& options) {
  const int m = s.input_site;
  check_site(h, m, "max_occupation");
  const GreenFunction gs = green(h, s.omega_s);
  const GreenFunction gi = green(h, -s.omega_s);
  const NoiseIntegral integral = integrated_noise(h, J, options);
  const double flux = std::norm(s.alpha_s);
  std::vector<Occupation> out;
  for (int j = 0; j < h.n_sites(); ++j) {
    Occupation o;
    o.site = j;
    const double amp = std::abs(gs.normal(j, m)) + std::abs(gi.anomalous(j, m));
    o.coherent = h.kappa(m) * flux * amp * amp;
    o.noise = integral.photons[static_cast<std::size_t>(j)];
    o.total = o.coherent + o.noise;
    if (alpha_sq > 0.0) o.saturation_ratio = o.total / alpha_sq;
    out.push_back(o);
  }
  return out;
}

Occupation max_occupation(const NambuMatrix& h, double J, const SignalSpec& s, int site,
                          double alpha_sq, const QuadratureOptions& options) {
  check_site(h, site, "max_occupation");
  return max_occupation_profile(h, J, s, alpha_sq, options)[static_cast<std::size_t>(site)];
}

double ResponseReport::db(double ratio) { return to_db(ratio); }

ResponseReport response_report(const NambuMatrix& h, double omega_s, int input_site) {
  check_site(h, input_site, "response_report");
  const GreenFunction gs = green(h, omega_s);
  const GreenFunction gi = green(h, -omega_s);
  ResponseReport r;
  r.omega_s = omega_s;
  for (int j = 0; j < h.n_sites(); ++j) {
    const Gains g = gains(gs, gi, h, input_site, j);
    const Noise nz = noise(gs, h, j, input_site);
    r.gain.push_back(g.forward);
    r.reverse_gain.push_back(g.reverse);
    r.idler_gain.push_back(g.idler);
    r.idler_reverse_gain.push_back(g.idler_reverse);
    r.noise_density.push_back(nz.density);
    r.added_noise.push_back(nz.added);
  }
  r.noise_asymmetry = r.noise_density.front() / r.noise_density.back();
  return r;
}

double gain_growth_rate(const ResponseReport& r, int first, int last) {
  if (first < 0 || last >= static_cast<int>(r.gain.size()) || last - first + 1 < 2) {
    throw DegenerateFit("gain_growth_rate: need at least 2 sites inside the chain");
  }
  double mx = 0.0, my = 0.0;
  const int n = last - first + 1;
  for (int j = first; j <= last; ++j) {
    mx += j;
    my += 0.5 * std::log(r.gain[static_cast<std::size_t>(j)]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int j = first; j <= last; ++j) {
    sxx += (j - mx) * (j - mx);
    sxy += (j - mx) * (0.5 * std::log(r.gain[static_cast<std::size_t>(j)]) - my);
  }
  return sxy / sxx;
}

}  // namespace topotwpa
