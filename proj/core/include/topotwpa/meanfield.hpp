#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "topotwpa/circuit.hpp"
#include "topotwpa/effective_params.hpp"

namespace topotwpa {

/// Real root n >= 0 of n^3 + n/4 = xi, closed form. Throws NegativeDrive.
double duffing_analytic(double xi);

struct DuffingRoot {
  double intensity = 0.0;             // |alpha|^2
  std::complex<double> amplitude;     // alpha
  bool stable = true;                 // positive slope of the intensity cubic
};

/// Steady states of (kappa/2 - i[delta + K |alpha|^2]) alpha = Omega_a.
///
/// All non-negative real roots of x [(kappa/2)^2 + (delta + K x)^2] = Omega_a^2
/// in ascending order. The middle root of a bistable triple is marked
/// unstable. Throws SolverTolerance if a root cannot be polished to a
/// residual of 1e-10 Omega_a^2.
std::vector<DuffingRoot> duffing_numeric(double Omega_a, double kappa,
                                         double delta_pump, double kerr_sum);

/// Tridiagonal matrix I_jl of the auxiliary chain with boundary decay Gamma.
/// For N = 1 both boundary terms land on the single site.
Eigen::MatrixXcd aux_chain_matrix(double Gamma, double J_b, int N);

/// Closed-form inverse e^{-i pi |j-l| / 2} / (2 J_b) of the matched chain
/// (Gamma = 2 J_b).
Eigen::MatrixXcd matched_chain_inverse(double J_b, int N);

/// Steady-state auxiliary displacements beta_j (j = 1..N stored at j-1) of
/// the impedance-matched chain driven on site 1.
std::vector<std::complex<double>> aux_chain_steady_state(double Omega_b, double J_b,
                                                         double J_ab,
                                                         std::complex<double> alpha,
                                                         int N);

enum class MeanFieldMode {
  /// Pump detuning chosen as -2 kappa n so that Delta vanishes.
  zero_detuning,
  /// Pump detuning fixed by the circuit (omega_b - omega_a); solve the cubic.
  circuit_detuning,
};

struct MeanFieldSolution {
  std::complex<double> alpha;
  double alpha_sq = 0.0;
  double n = 0.0;
  double xi = 0.0;
  double detuning_pump = 0.0;  // omega_b - omega_a (rad/s)
  std::vector<std::complex<double>> beta;
  /// Every steady-state intensity found (circuit_detuning mode).
  std::vector<DuffingRoot> branches;
  std::size_t branch = 0;
};

/// xi = (Omega_a / kappa)^2 (K_s + K_c) / kappa.
double drive_parameter(const EffectiveCircuit& ec);

/// `branch` indexes `branches` in circuit_detuning mode; defaults to the
/// smallest stable root.
MeanFieldSolution solve_meanfield(const EffectiveCircuit& ec,
                                  MeanFieldMode mode = MeanFieldMode::zero_detuning,
                                  std::size_t branch = 0);

/// Pump-renormalized lattice parameters using the circuit detuning
/// omega_b - omega_a.
EffectiveParams effective_params_from_meanfield(const EffectiveCircuit& ec,
                                                double alpha_sq);

/// Same, with the detuning carried by a mean-field solution.
EffectiveParams effective_params_from_meanfield(const EffectiveCircuit& ec,
                                                const MeanFieldSolution& mf);

}  // namespace topotwpa
