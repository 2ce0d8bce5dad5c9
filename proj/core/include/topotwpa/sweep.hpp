#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topotwpa/dataset.hpp"
#include "topotwpa/effective_params.hpp"
#include "topotwpa/lattice.hpp"
#include "topotwpa/topology.hpp"

namespace topotwpa {

enum class DisorderFamily { delta, kappa, J, g_s, g_c, phi };

inline constexpr std::array<DisorderFamily, 6> kDisorderFamilies = {
    DisorderFamily::delta, DisorderFamily::kappa, DisorderFamily::J,
    DisorderFamily::g_s,   DisorderFamily::g_c,   DisorderFamily::phi};

/// "delta", "kappa", "J", "gs", "gc", "phi".
std::string_view to_string(DisorderFamily f);
/// Accepts the names above and "g_s", "g_c". Throws ValidationError.
DisorderFamily parse_disorder_family(std::string_view name);

/// Sigmas with only `family` set to `sigma`.
DisorderSigmas single_family(DisorderFamily family, double sigma);

/// Seed of one realization: a 64-bit mix of all four indices.
std::uint64_t realization_seed(std::uint64_t master_seed, DisorderFamily family,
                               std::size_t sigma_index, std::size_t realization);

struct RealizationRecord {
  std::uint64_t seed = 0;
  bool stable = false;
  double max_im_eigenvalue = 0.0;
  double gain = 0.0;  // linear
  double reverse_gain = 0.0;
  double w_top_over_J = 0.0;
  double added_noise = 0.0;
};

struct DisorderConfig {
  EffectiveParams base;
  DisorderFamily family = DisorderFamily::delta;
  std::vector<double> sigmas;
  int n_realizations = 500;
  std::uint64_t master_seed = 0;
  /// Frequency grid for w_top; empty selects default_frequency_grid(J).
  std::vector<double> omega_grid;
  bool compute_w_top = true;
  bool keep_records = false;
};

/// Averages over the stable realizations of one sigma point. Gains are
/// averaged in linear power and converted to dB; the mean of the dB values is
/// reported alongside.
struct DisorderSummary {
  double sigma = 0.0;
  int n_realizations = 0;
  int n_stable = 0;
  int n_unstable = 0;
  double p_unstable = 0.0;

  double mean_gain_db = std::numeric_limits<double>::quiet_NaN();
  double mean_rev_gain_db = std::numeric_limits<double>::quiet_NaN();
  double mean_w_top = std::numeric_limits<double>::quiet_NaN();  // units of J
  double mean_added_noise = std::numeric_limits<double>::quiet_NaN();
  double stderr_gain_db = std::numeric_limits<double>::quiet_NaN();
  double stderr_rev_gain_db = std::numeric_limits<double>::quiet_NaN();
  double stderr_w_top = std::numeric_limits<double>::quiet_NaN();
  double stderr_added_noise = std::numeric_limits<double>::quiet_NaN();

  double mean_gain_db_dbavg = std::numeric_limits<double>::quiet_NaN();
  double mean_rev_gain_db_dbavg = std::numeric_limits<double>::quiet_NaN();

  std::vector<RealizationRecord> records;
};

/// One realization at the given seed. Never throws for unstable draws.
RealizationRecord evaluate_realization(const EffectiveParams& base,
                                       const DisorderSigmas& sigmas, std::uint64_t seed,
                                       double omega_s, std::span<const double> omega_grid,
                                       bool compute_w_top);

/// Aggregates records; throws AllUnstable when none is stable.
DisorderSummary summarize(double sigma, std::vector<RealizationRecord> records,
                          bool keep_records);

/// One summary per entry of cfg.sigmas. A point where every draw is unstable
/// carries p_unstable = 1 and NaN means. Bit-identical for a fixed master
/// seed regardless of `workers`.
std::vector<DisorderSummary> disorder_sweep(const DisorderConfig& cfg, double omega_s,
                                            unsigned workers = 0);

/// Fraction of unstable realizations at one sigma point (stability only).
double unstable_fraction(const EffectiveParams& base, DisorderFamily family, double sigma,
                         std::size_t sigma_index, int n_realizations,
                         std::uint64_t master_seed, unsigned workers = 0);

struct OnsetConfig {
  EffectiveParams base;
  DisorderFamily family = DisorderFamily::delta;
  std::vector<double> schedule;  // ascending
  int n_realizations = 500;
  std::uint64_t master_seed = 0;
  double threshold = 0.01;
  /// Bisection steps between the last stable and first unstable schedule
  /// points; 0 keeps the schedule resolution.
  int bisection_steps = 0;
};

struct OnsetResult {
  DisorderFamily family = DisorderFamily::delta;
  double sigma_star = 0.0;
  double p_unstable_at_onset = 0.0;
  std::vector<double> p_unstable;  // per schedule entry evaluated
};

/// Smallest sigma with p_unstable > threshold. Throws NoOnset.
OnsetResult instability_onset(const OnsetConfig& cfg, unsigned workers = 0);

struct PhaseDiagramConfig {
  PhaseGrid grid;
  EffectiveParams base;
  double omega = 0.0;
};

/// FNV-1a of the canonical text of the configuration.
std::string config_hash(const PhaseDiagramConfig& cfg);

struct PhaseDiagramRun {
  std::vector<PhaseCell> cells;
  std::size_t computed = 0;
  std::size_t resumed = 0;
  std::string config_hash;
};

/// Computes the map row by row (one kappa value per row), appending finished
/// rows to `<stem>.partial`. A rerun with the same configuration hash skips
/// the rows found there. On completion emits the dataset at `stem` (see
/// emit_dataset) and removes the partial file.
PhaseDiagramRun run_phase_diagram(const PhaseDiagramConfig& cfg,
                                  const std::filesystem::path& stem,
                                  const EmitOptions& options, unsigned workers = 0);

Dataset to_dataset(const std::vector<PhaseCell>& cells);
Dataset to_dataset(const std::vector<DisorderSummary>& summaries);

}  // namespace topotwpa
