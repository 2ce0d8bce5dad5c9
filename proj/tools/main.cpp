// topotwpa: command-line front end for the topological amplifier model.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "topotwpa/circuit.hpp"
#include "topotwpa/config.hpp"
#include "topotwpa/dataset.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/meanfield.hpp"
#include "topotwpa/plot.hpp"
#include "topotwpa/presets.hpp"
#include "topotwpa/response.hpp"
#include "topotwpa/sweep.hpp"
#include "topotwpa/tables.hpp"
#include "topotwpa/topology.hpp"
#include "topotwpa/units.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace topotwpa;

namespace {

struct Globals {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<int> sites;
  std::string out_dir = ".";
  bool force = false;
  unsigned workers = 0;
};

struct Grid {
  double lo = -3.0;
  double hi = 3.0;
  int points = 301;
};

RunConfig load(const Globals& g) {
  if (!g.config.empty() && !g.preset.empty()) {
    throw ValidationError("--config and --preset are mutually exclusive");
  }
  RunConfig c = g.config.empty() ? preset_config(g.preset.empty() ? "P1" : g.preset)
                                 : load_config(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.sites) {
    // Re-parse so the override goes through the same validation as a file.
    c = parse_config(write_config(c) + "[lattice]\nN = " + std::to_string(*g.sites) + "\n",
                     "--sites");
    if (c.has_circuit) c.circuit.N = *g.sites;
  }
  return c;
}

fs::path stem(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

EmitOptions emit_options(const Globals& g, const RunConfig& c, const std::string& extra) {
  EmitOptions o;
  o.force = g.force;
  o.config_hash = fnv1a_hex(write_config(c) + "\n" + extra);
  o.seed = c.seed;
  o.started_utc = utc_timestamp();
  return o;
}

void emit(const Dataset& d, const Globals& g, const RunConfig& c, const std::string& name,
          const std::string& extra) {
  const fs::path s = stem(g, name);
  emit_dataset(d, s, emit_options(g, c, extra));
  std::cout << "wrote " << s.string() << ".{csv,json,manifest.json}\n";
}

void write_json(const json& j, const Globals& g, const std::string& name) {
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  const fs::path path = stem(g, name);
  write_text_file(path, text, g.force);
  std::cerr << "wrote " << path.string() << "\n";
}

std::vector<double> grid_values(const Grid& gr) { return frequency_grid(gr.lo, gr.hi, gr.points); }

std::string grid_text(const Grid& gr) {
  return "grid " + format_double(gr.lo) + " " + format_double(gr.hi) + " " +
         std::to_string(gr.points);
}

void add_grid(CLI::App* cmd, Grid& gr) {
  cmd->add_option("--omega-min", gr.lo, "Lowest frequency (units of J)")->capture_default_str();
  cmd->add_option("--omega-max", gr.hi, "Highest frequency (units of J)")->capture_default_str();
  cmd->add_option("--points", gr.points, "Grid points")->capture_default_str()->check(
      CLI::Range(3, 1000000));
}

/// "lo:hi" pair.
std::pair<double, double> parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ValidationError(std::string(flag) + ": expected lo:hi, got '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

const CircuitParams& need_circuit(const RunConfig& c) {
  if (!c.has_circuit) throw ValidationError("this command needs a [circuit] section or a preset");
  return c.circuit;
}

json circuit_json(const EffectiveCircuit& ec) {
  auto mhz = [](double w) { return w / two_pi / 1e6; };
  json j;
  j["omega_a_over_2pi_MHz"] = mhz(ec.omega_a);
  j["omega_b_over_2pi_MHz"] = mhz(ec.omega_b);
  j["J_a_over_2pi_MHz"] = mhz(ec.J_a);
  j["J_b_over_2pi_MHz"] = mhz(ec.J_b);
  j["J_ab_over_2pi_MHz"] = mhz(ec.J_ab);
  j["K_s_over_2pi_kHz"] = mhz(ec.K_s) * 1e3;
  j["K_c_over_2pi_kHz"] = mhz(ec.K_c) * 1e3;
  j["kappa_over_2pi_MHz"] = mhz(ec.kappa);
  j["Gamma_over_2pi_MHz"] = mhz(ec.Gamma);
  j["kappa_nl_over_2pi_MHz"] = mhz(ec.kappa_nl);
  j["Omega_a_over_2pi_MHz"] = mhz(ec.Omega_a);
  j["Omega_b_over_2pi_MHz"] = mhz(ec.Omega_b);
  j["E_C_over_h_MHz"] = ec.E_C / constants::h / 1e6;
  j["C_a_eq_fF"] = ec.C_a_eq * 1e15;
  j["C_b_eq_fF"] = ec.C_b_eq * 1e15;
  j["L_a_eq_pH"] = ec.L_a_eq * 1e12;
  j["L_J_pH"] = ec.L_J * 1e12;
  j["Z_a_ohm"] = ec.Z_a;
  j["Z_b_ohm"] = ec.Z_b;
  j["phi_zpf_Wb"] = ec.phi_zpf;
  j["impedance_mismatch"] = ec.impedance_mismatch;
  j["C_b_boundary_fF"] = ec.C_b_boundary * 1e15;
  j["warnings"] = ec.warnings;
  return j;
}

int run_circuit_map(const Globals& g) {
  const RunConfig c = load(g);
  const auto ec = derive_effective_circuit(need_circuit(c), c.circuit_options);
  json j;
  j["preset"] = c.preset;
  j["circuit"] = circuit_json(ec);
  for (const auto& w : ec.warnings) std::cerr << "warning: " << w << "\n";
  write_json(j, g, "circuit-map.json");
  return 0;
}

int run_meanfield(const Globals& g, bool table, std::size_t branch) {
  const RunConfig c = load(g);
  const auto ec = derive_effective_circuit(need_circuit(c), c.circuit_options);
  const auto mf = solve_meanfield(ec, c.meanfield_mode, branch);
  const auto p = effective_params_from_meanfield(ec, mf);
  const int m = c.circuit.M;
  const double margin = low_flux_margin(mf.alpha_sq, m, ec.phi_zpf);
  json j;
  j["preset"] = c.preset;
  j["mode"] = c.meanfield_mode == MeanFieldMode::zero_detuning ? "zero_detuning" : "circuit_detuning";
  j["xi"] = mf.xi;
  j["n"] = mf.n;
  j["alpha_sq"] = mf.alpha_sq;
  j["alpha"] = {mf.alpha.real(), mf.alpha.imag()};
  j["pump_detuning_over_2pi_MHz"] = mf.detuning_pump / two_pi / 1e6;
  json branches = json::array();
  for (const auto& b : mf.branches) branches.push_back({{"alpha_sq", b.intensity}, {"stable", b.stable}});
  j["branches"] = branches;
  j["branch"] = mf.branch;
  j["low_flux_margin"] = margin;
  j["effective"] = {{"N", p.N},
                    {"J_over_2pi_MHz", p.J / two_pi / 1e6},
                    {"phi", p.phi},
                    {"Delta_over_J", p.Delta / p.J},
                    {"kappa_over_J", p.kappa / p.J},
                    {"g_s_over_J", p.g_s / p.J},
                    {"g_c_over_J", p.g_c / p.J}};
  if (margin > kLowFluxWarningThreshold) {
    std::cerr << "warning: low-flux margin " << margin << " exceeds " << kLowFluxWarningThreshold
              << "\n";
  }
  if (table) {
    std::printf("%-22s %14s\n", "quantity", "value");
    std::printf("%-22s %14.6g\n", "xi", mf.xi);
    std::printf("%-22s %14.6g\n", "n", mf.n);
    std::printf("%-22s %14.6g\n", "|alpha|^2", mf.alpha_sq);
    std::printf("%-22s %14.6g\n", "pump detuning (MHz)", mf.detuning_pump / two_pi / 1e6);
    std::printf("%-22s %14.6g\n", "J/2pi (MHz)", p.J / two_pi / 1e6);
    std::printf("%-22s %14.6g\n", "Delta/J", p.Delta / p.J);
    std::printf("%-22s %14.6g\n", "kappa/J", p.kappa / p.J);
    std::printf("%-22s %14.6g\n", "g_s/J", p.g_s / p.J);
    std::printf("%-22s %14.6g\n", "g_c/J", p.g_c / p.J);
    std::printf("%-22s %14.6g\n", "low-flux margin", margin);
    write_text_file(stem(g, "meanfield.json"), j.dump(2) + "\n", g.force);
  } else {
    write_json(j, g, "meanfield.json");
  }
  return 0;
}

int run_spectrum(const Globals& g, const Grid& gr) {
  const RunConfig c = load(g);
  const auto p = resolve_effective_params(c);
  emit(spectrum_table(build_hnh(p), p.J, grid_values(gr)), g, c, "spectrum", grid_text(gr));
  return 0;
}

int run_response(const Globals& g, const Grid& gr) {
  const RunConfig c = load(g);
  const auto p = resolve_effective_params(c);
  const auto h = build_hnh(p);
  if (!stability(h).stable) throw NotTopological("response: the steady state is unstable");
  emit(response_table(h, p.J, grid_values(gr), c.signal.input_site), g, c, "response",
       grid_text(gr));
  return 0;
}

int run_occupation(const Globals& g) {
  const RunConfig c = load(g);
  const auto p = resolve_effective_params(c);
  const auto h = build_hnh(p);
  const SignalSpec s{std::complex<double>(std::sqrt(c.signal.alpha_s_sq), 0.0),
                     c.signal.omega_s_over_J * p.J, c.signal.input_site};
  double alpha_sq = 0.0;
  if (c.has_circuit) {
    const auto ec = derive_effective_circuit(c.circuit, c.circuit_options);
    alpha_sq = solve_meanfield(ec, c.meanfield_mode).alpha_sq;
  }
  const auto prof = max_occupation_profile(h, p.J, s, alpha_sq);
  if (alpha_sq > 0.0) {
    std::printf("pump |alpha|^2 = %.4g, saturation ratio at site %d = %.4g\n", alpha_sq, p.N,
                prof.back().saturation_ratio);
  }
  emit(occupation_table(prof), g, c, "occupation", "occupation");
  return 0;
}

int run_fit_zeta(const Globals& g, double omega_over_J) {
  const RunConfig c = load(g);
  const auto p = resolve_effective_params(c);
  const auto h = build_hnh(p);
  const auto fit = localization_length(h, omega_over_J * p.J);
  const auto point = classify_point(h, p.J, omega_over_J * p.J);
  json j;
  j["omega_over_J"] = omega_over_J;
  j["classification"] = std::string(to_string(point.classification));
  j["zeta"] = {fit.zeta.real(), fit.zeta.imag()};
  j["r2"] = {fit.r2_re, fit.r2_im};
  j["fit_sites"] = {fit.range.first + 1, fit.range.last + 1};
  j["E0_over_J"] = point.e0;
  write_json(j, g, "fit-zeta.json");
  return 0;
}

int run_phase_diagram(const Globals& g, const std::string& kr, const std::string& gr,
                      int resolution, double omega_over_J, double gs_over_gc) {
  const RunConfig c = load(g);
  const auto base = resolve_effective_params(c);
  const auto [k0, k1] = parse_range(kr, "--kappa-range");
  const auto [g0, g1] = parse_range(gr, "--gc-range");
  PhaseDiagramConfig cfg;
  cfg.grid.kappa_over_J = frequency_grid(k0, k1, resolution);
  cfg.grid.gc_over_J = frequency_grid(g0, g1, resolution);
  cfg.grid.gs_over_gc = gs_over_gc;
  cfg.base = base;
  cfg.omega = omega_over_J * base.J;
  const fs::path s = stem(g, "phase-diagram");
  const auto run = topotwpa::run_phase_diagram(cfg, s, emit_options(g, c, config_hash(cfg)), g.workers);
  std::size_t failed = 0;
  for (const auto& cell : run.cells) {
    if (cell.error.empty()) continue;
    if (failed++ < 5) {
      std::cerr << "cell kappa/J=" << cell.kappa_over_J << " g_c/J=" << cell.gc_over_J << ": "
                << cell.error << "\n";
    }
  }
  std::cout << "wrote " << s.string() << ".{csv,json,manifest.json} (" << run.computed
            << " computed, " << run.resumed << " resumed)\n";
  if (failed > 0) {
    std::cerr << failed << " cells failed numerically (NaN in the output)\n";
    return 1;
  }
  return 0;
}

int run_disorder(const Globals& g, const std::string& param, const std::string& sigma_list,
                 int realizations, std::optional<double> omega_s, bool skip_wtop) {
  const RunConfig c = load(g);
  const auto base = resolve_effective_params(c);
  std::vector<DisorderFamily> families;
  if (param == "all") {
    families.assign(kDisorderFamilies.begin(), kDisorderFamilies.end());
  } else {
    families.push_back(parse_disorder_family(param));
  }
  const auto sigmas = parse_list(sigma_list, "--sigma-list");
  const double ws = omega_s.value_or(c.signal.omega_s_over_J) * base.J;
  for (DisorderFamily f : families) {
    DisorderConfig cfg;
    cfg.base = base;
    cfg.family = f;
    cfg.sigmas = sigmas;
    cfg.n_realizations = realizations;
    cfg.master_seed = c.seed;
    cfg.compute_w_top = !skip_wtop;
    const auto summaries = disorder_sweep(cfg, ws, g.workers);
    const std::string name = "disorder-" + std::string(to_string(f));
    emit(to_dataset(summaries), g, c, name,
         name + " " + sigma_list + " " + std::to_string(realizations) + " " + format_double(ws) +
             (skip_wtop ? " no-wtop" : ""));
  }
  return 0;
}

int run_plot(const Globals& g, const std::string& input, const std::string& kind,
             const std::string& output) {
  const Dataset d = read_csv(input);
  PlotKind k;
  if (kind == "line") {
    k = PlotKind::line;
  } else if (kind == "heatmap") {
    k = PlotKind::heatmap;
  } else {
    throw ValidationError("--kind: expected line or heatmap");
  }
  fs::path out = output.empty() ? fs::path(input).replace_extension(".svg") : fs::path(output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  render_plot(d, k, out, g.force);
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int run_dump_matrix(const Globals& g) {
  const RunConfig c = load(g);
  const auto p = resolve_effective_params(c);
  emit(matrix_table(build_hnh(p), p.J), g, c, "matrix", "matrix");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological Josephson traveling-wave parametric amplifier model"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config, "Run configuration file");
  app.add_option("--preset", g.preset, "Operating point: P1, P1p, P2, P3 (default P1)");
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--sites", g.sites, "Override the chain length N")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_flag("--force", g.force, "Overwrite existing outputs");
  app.add_option("--workers", g.workers, "Worker threads (0: TOPOTWPA_WORKERS or all cores)");
  app.fallthrough();

  auto* circuit_map = app.add_subcommand("circuit-map", "Circuit parameters to effective model");

  bool table = false;
  std::size_t branch = 0;
  auto* meanfield = app.add_subcommand("meanfield", "Pump steady state and lattice handles");
  meanfield->add_flag("--table", table, "Human-readable table instead of JSON");
  meanfield->add_option("--branch", branch, "Steady-state branch (circuit_detuning mode)");

  Grid spectrum_grid, response_grid;
  auto* spectrum = app.add_subcommand("spectrum", "Singular values of omega - H_nh");
  add_grid(spectrum, spectrum_grid);
  auto* response = app.add_subcommand("response", "Gain, reverse gain, added noise");
  add_grid(response, response_grid);

  auto* occupation = app.add_subcommand("occupation", "Peak fluctuation occupation per site");

  double zeta_omega = -0.5;
  auto* fit_zeta = app.add_subcommand("fit-zeta", "Inverse localization length");
  fit_zeta->add_option("--omega", zeta_omega, "Frequency (units of J)")->capture_default_str();

  std::string kappa_range = "0.05:6", gc_range = "0:2.5";
  int resolution = 41;
  double pd_omega = -0.5, gs_over_gc = 1.0;
  auto* phase = app.add_subcommand("phase-diagram", "Phase map over (kappa/J, g_c/J)");
  phase->add_option("--kappa-range", kappa_range, "kappa/J range lo:hi")->capture_default_str();
  phase->add_option("--gc-range", gc_range, "g_c/J range lo:hi")->capture_default_str();
  phase->add_option("--resolution", resolution, "Points per axis")
      ->capture_default_str()
      ->check(CLI::Range(2, 1001));
  phase->add_option("--omega", pd_omega, "Frequency (units of J)")->capture_default_str();
  phase->add_option("--gs-over-gc", gs_over_gc, "g_s / g_c")->capture_default_str();

  std::string param = "all", sigma_list = "0,0.05,0.1,0.2";
  int realizations = 500;
  std::optional<double> omega_s;
  bool skip_wtop = false;
  auto* disorder = app.add_subcommand("disorder", "Disorder-averaged figures of merit");
  disorder->add_option("--param", param, "delta, kappa, J, gs, gc, phi or all")->capture_default_str();
  disorder->add_option("--sigma-list", sigma_list, "Comma-separated sigmas")->capture_default_str();
  disorder->add_option("--realizations", realizations, "Realizations per sigma")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  disorder->add_option("--omega-s", omega_s, "Signal frequency (units of J)");
  disorder->add_flag("--no-wtop", skip_wtop, "Skip the topological bandwidth");

  std::string plot_input, plot_kind = "line", plot_output;
  auto* plot = app.add_subcommand("plot", "Render a CSV dataset as SVG");
  plot->add_option("input", plot_input, "Dataset CSV")->required();
  plot->add_option("--kind", plot_kind, "line or heatmap")->capture_default_str();
  plot->add_option("-o,--output", plot_output, "SVG path (default: input with .svg)");

  auto* dump = app.add_subcommand("dump-matrix", "Write H_nh entries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*circuit_map) return run_circuit_map(g);
    if (*meanfield) return run_meanfield(g, table, branch);
    if (*spectrum) return run_spectrum(g, spectrum_grid);
    if (*response) return run_response(g, response_grid);
    if (*occupation) return run_occupation(g);
    if (*fit_zeta) return run_fit_zeta(g, zeta_omega);
    if (*phase) return run_phase_diagram(g, kappa_range, gc_range, resolution, pd_omega, gs_over_gc);
    if (*disorder) return run_disorder(g, param, sigma_list, realizations, omega_s, skip_wtop);
    if (*plot) return run_plot(g, plot_input, plot_kind, plot_output);
    if (*dump) return run_dump_matrix(g);
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
