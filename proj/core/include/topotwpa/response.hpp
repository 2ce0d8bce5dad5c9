#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topotwpa/lattice.hpp"

namespace topotwpa {

/// G(omega) = (omega - H_nh)^{-1}. Sites are 0-based; the anomalous block
/// couples site j to the creation operator of site l.
class GreenFunction {
 public:
  GreenFunction(double omega, Eigen::MatrixXcd matrix);

  double omega() const { return omega_; }
  int n_sites() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return g_; }
  std::complex<double> normal(int j, int l) const { return g_(j, l); }
  std::complex<double> anomalous(int j, int l) const { return g_(j, n_ + l); }

 private:
  double omega_;
  int n_;
  Eigen::MatrixXcd g_;
};

/// Throws SingularMatrix when omega - H_nh is numerically singular.
GreenFunction green(const NambuMatrix& h, double omega);

/// Power ratios for a signal entering at site m and leaving at site j.
/// With site-dependent decay the prefactor is kappa_m kappa_j.
struct Gains {
  double forward = 0.0;        // kappa^2 |G_jm(w)|^2
  double reverse = 0.0;        // kappa^2 |G_mj(w)|^2
  double idler = 0.0;          // kappa^2 |G_{j,N+m}(-w)|^2
  double idler_reverse = 0.0;  // kappa^2 |G_{m,N+j}(-w)|^2
};

Gains gains(const NambuMatrix& h, double omega_s, int input_site, int output_site);
Gains gains(const GreenFunction& at_signal, const GreenFunction& at_idler,
            const NambuMatrix& h, int input_site, int output_site);

inline constexpr double kNoGain = std::numeric_limits<double>::infinity();

struct Noise {
  double density = 0.0;  // n_j(w) = kappa_j sum_l kappa_l |G_{j,N+l}|^2
  double added = 0.0;    // n_j / G_j, +inf when the gain vanishes
};

/// Noise at site j referred to the forward gain from `input_site`.
Noise noise(const NambuMatrix& h, double omega, int site, int input_site = 0);
Noise noise(const GreenFunction& g, const NambuMatrix& h, int site, int input_site = 0);

/// Output-mode commutator: sum_l |delta_jl - i sqrt(k_j k_l) G_jl|^2 - n_j,
/// which equals one for any stable H_nh.
double output_commutator(const GreenFunction& g, const NambuMatrix& h, int site);

/// n_1(w) / n_N(w): backward over forward output noise, both referred to the
/// forward gain G_N. Linear ratio; apply to_db for the usual figure.
double noise_asymmetry(const NambuMatrix& h, double omega);

/// Measure of the grid where G_N >= 20 dB, with linear interpolation of the
/// dB curve at crossings. rad/s.
double bandwidth_20db(const NambuMatrix& h, std::span<const double> omega_grid,
                      double threshold_db = 20.0);

struct SignalSpec {
  std::complex<double> alpha_s;  // |alpha_s|^2 is a photon flux (1/s)
  double omega_s = 0.0;          // rad/s relative to the pump
  int input_site = 0;
};

struct CoherentOutput {
  std::complex<double> signal;  // at +omega_s
  std::complex<double> idler;   // at -omega_s
  std::complex<double> pump;    // at 0
};

/// Coherent output amplitudes at site j for a uniform-phase pump with
/// displacement `alpha`. The pump phase per site is the hopping phase of the
/// first bond.
CoherentOutput coherent_output(const NambuMatrix& h, double phi, const SignalSpec& s,
                               std::complex<double> alpha, int site);

struct QuadratureOptions {
  double omega_max_over_J = 20.0;
  double step_over_J = 1.0 / 50.0;
  double relative_tolerance = 1e-3;
  double tail_tolerance = 1e-3;
  int max_halvings = 6;
};

/// (1 / 2 pi kappa) * integral of n_j(w) for every site j.
struct NoiseIntegral {
  std::vector<double> photons;  // per site
  double omega_max = 0.0;
  double step = 0.0;
};

/// Throws IntegrationNotConverged if refinement or the tail bound fails.
NoiseIntegral integrated_noise(const NambuMatrix& h, double J,
                               const QuadratureOptions& options = {});

struct Occupation {
  int site = 0;
  double coherent = 0.0;
  double noise = 0.0;
  double total = 0.0;
  double saturation_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// Peak occupation of the fluctuations at every site:
/// kappa |alpha_s|^2 (|G_j1(w_s)| + |G_{j,N+1}(-w_s)|)^2 + noise integral.
/// `alpha_sq` > 0 fills the saturation ratio total / |alpha|^2.
std::vector<Occupation> max_occupation_profile(const NambuMatrix& h, double J,
                                               const SignalSpec& s,
                                               double alpha_sq = 0.0,
                                               const QuadratureOptions& options = {});

Occupation max_occupation(const NambuMatrix& h, double J, const SignalSpec& s, int site,
                          double alpha_sq = 0.0, const QuadratureOptions& options = {});

/// Everything measurable at one signal frequency, for every output site.
struct ResponseReport {
  double omega_s = 0.0;
  std::vector<double> gain;
  std::vector<double> reverse_gain;
  std::vector<double> idler_gain;
  std::vector<double> idler_reverse_gain;
  std::vector<double> noise_density;
  std::vector<double> added_noise;
  double noise_asymmetry = 0.0;

  static double db(double ratio);
};

ResponseReport response_report(const NambuMatrix& h, double omega_s, int input_site = 0);

/// Slope of (1/2) ln G_j against j over `first..last` (0-based, inclusive).
double gain_growth_rate(const ResponseReport& r, int first, int last);

}  // namespace topotwpa
