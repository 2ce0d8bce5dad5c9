#include "topotwpa/sweep.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "topotwpa/errors.hpp"
#include "topotwpa/parallel.hpp"
#include "topotwpa/response.hpp"
#include "topotwpa/units.hpp"

namespace topotwpa {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const double n = static_cast<double>(v.size());
  for (double x : v) m.mean += x;
  m.mean /= n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

constexpr double kDbPerNeper = 10.0 / 2.302585092994046;

}  // namespace

std::string_view to_string(DisorderFamily f) {
  switch (f) {
    case DisorderFamily::delta: return "delta";
    case DisorderFamily::kappa: return "kappa";
    case DisorderFamily::J: return "J";
    case DisorderFamily::g_s: return "gs";
    case DisorderFamily::g_c: return "gc";
    case DisorderFamily::phi: return "phi";
  }
  return "unknown";
}

DisorderFamily parse_disorder_family(std::string_view name) {
  if (name == "delta") return DisorderFamily::delta;
  if (name == "kappa") return DisorderFamily::kappa;
  if (name == "J") return DisorderFamily::J;
  if (name == "gs" || name == "g_s") return DisorderFamily::g_s;
  if (name == "gc" || name == "g_c") return DisorderFamily::g_c;
  if (name == "phi") return DisorderFamily::phi;
  throw ValidationError("param: unknown disorder family '" + std::string(name) +
                        "' (expected delta, kappa, J, gs, gc or phi)");
}

DisorderSigmas single_family(DisorderFamily family, double sigma) {
  DisorderSigmas s;
  switch (family) {
    case DisorderFamily::delta: s.delta = sigma; break;
    case DisorderFamily::kappa: s.kappa = sigma; break;
    case DisorderFamily::J: s.J = sigma; break;
    case DisorderFamily::g_s: s.g_s = sigma; break;
    case DisorderFamily::g_c: s.g_c = sigma; break;
    case DisorderFamily::phi: s.phi = sigma; break;
  }
  return s;
}

std::uint64_t realization_seed(std::uint64_t master_seed, DisorderFamily family,
                               std::size_t sigma_index, std::size_t realization) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(family) + 1));
  h = splitmix64(h ^ static_cast<std::uint64_t>(sigma_index));
  return splitmix64(h ^ static_cast<std::uint64_t>(realization));
}

RealizationRecord evaluate_realization(const EffectiveParams& base,
                                       const DisorderSigmas& sigmas, std::uint64_t seed,
                                       double omega_s, std::span<const double> omega_grid,
                                       bool compute_w_top) {
  RealizationRecord r;
  r.seed = seed;
  const NambuMatrix h = build_hnh(base, sample_disorder(base, sigmas, seed));
  const StabilityReport st = stability(h);
  r.max_im_eigenvalue = st.max_im_eigenvalue;
  r.stable = st.stable;
  if (!r.stable) return r;
  const int last = base.N - 1;
  const GreenFunction gs = green(h, omega_s);
  const GreenFunction gi = green(h, -omega_s);
  const Gains g = gains(gs, gi, h, 0, last);
  r.gain = g.forward;
  r.reverse_gain = g.reverse;
  r.added_noise = noise(gs, h, last, 0).added;
  if (compute_w_top) {
    r.w_top_over_J = topological_window(h, base.J, omega_grid, false).w_top / base.J;
  }
  return r;
}

DisorderSummary summarize(double sigma, std::vector<RealizationRecord> records,
                          bool keep_records) {
  DisorderSummary s;
  s.sigma = sigma;
  s.n_realizations = static_cast<int>(records.size());
  std::vector<double> gain, rev, gain_db, rev_db, wtop, nadd;
  for (const auto& r : records) {
    if (!r.stable) {
      ++s.n_unstable;
      continue;
    }
    ++s.n_stable;
    gain.push_back(r.gain);
    rev.push_back(r.reverse_gain);
    gain_db.push_back(to_db(r.gain));
    rev_db.push_back(to_db(r.reverse_gain));
    wtop.push_back(r.w_top_over_J);
    nadd.push_back(r.added_noise);
  }
  s.p_unstable = s.n_realizations > 0
                     ? static_cast<double>(s.n_unstable) / static_cast<double>(s.n_realizations)
                     : 0.0;
  if (keep_records) s.records = std::move(records);
  if (s.n_stable == 0) {
    throw AllUnstable("disorder at sigma = " + std::to_string(sigma) +
                      ": every realization is unstable");
  }
  const Moments mg = moments(gain), mr = moments(rev);
  s.mean_gain_db = to_db(mg.mean);
  s.mean_rev_gain_db = to_db(mr.mean);
  s.stderr_gain_db = kDbPerNeper * mg.stderr_ / mg.mean;
  s.stderr_rev_gain_db = kDbPerNeper * mr.stderr_ / mr.mean;
  const Moments mw = moments(wtop), mn = moments(nadd);
  s.mean_w_top = mw.mean;
  s.stderr_w_top = mw.stderr_;
  s.mean_added_noise = mn.mean;
  s.stderr_added_noise = mn.stderr_;
  s.mean_gain_db_dbavg = moments(gain_db).mean;
  s.mean_rev_gain_db_dbavg = moments(rev_db).mean;
  return s;
}

std::vector<DisorderSummary> disorder_sweep(const DisorderConfig& cfg, double omega_s,
                                            unsigned workers) {
  validate(cfg.base);
  if (cfg.n_realizations < 1) throw ValidationError("realizations: must be >= 1");
  for (double s : cfg.sigmas) {
    if (!(s >= 0.0)) throw ValidationError("sigma: must be >= 0");
  }
  const std::vector<double> grid =
      cfg.omega_grid.empty() ? default_frequency_grid(cfg.base.J) : cfg.omega_grid;
  const auto n = static_cast<std::size_t>(cfg.n_realizations);
  std::vector<RealizationRecord> records(cfg.sigmas.size() * n);
  parallel_for(records.size(), workers, [&](std::size_t idx) {
    const std::size_t si = idx / n, r = idx % n;
    records[idx] = evaluate_realization(
        cfg.base, single_family(cfg.family, cfg.sigmas[si]),
        realization_seed(cfg.master_seed, cfg.family, si, r), omega_s, grid, cfg.compute_w_top);
  });
  std::vector<DisorderSummary> out;
  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    std::vector<RealizationRecord> slice(records.begin() + static_cast<std::ptrdiff_t>(si * n),
                                         records.begin() + static_cast<std::ptrdiff_t>((si + 1) * n));
    try {
      out.push_back(summarize(cfg.sigmas[si], std::move(slice), cfg.keep_records));
    } catch (const AllUnstable&) {
      DisorderSummary s;
      s.sigma = cfg.sigmas[si];
      s.n_realizations = cfg.n_realizations;
      s.n_unstable = cfg.n_realizations;
      s.p_unstable = 1.0;
      out.push_back(s);
    }
  }
  return out;
}

double unstable_fraction(const EffectiveParams& base, DisorderFamily family, double sigma,
                         std::size_t sigma_index, int n_realizations,
                         std::uint64_t master_seed, unsigned workers) {
  if (n_realizations < 1) throw ValidationError("realizations: must be >= 1");
  const DisorderSigmas sig = single_family(family, sigma);
  std::vector<char> unstable(static_cast<std::size_t>(n_realizations), 0);
  parallel_for(unstable.size(), workers, [&](std::size_t r) {
    const NambuMatrix h = build_hnh(
        base, sample_disorder(base, sig, realization_seed(master_seed, family, sigma_index, r)));
    unstable[r] = stability(h).stable ? 0 : 1;
  });
  std::size_t count = 0;
  for (char u : unstable) count += static_cast<std::size_t>(u);
  return static_cast<double>(count) / static_cast<double>(n_realizations);
}

OnsetResult instability_onset(const OnsetConfig& cfg, unsigned workers) {
  for (std::size_t i = 1; i < cfg.schedule.size(); ++i) {
    if (cfg.schedule[i] < cfg.schedule[i - 1]) {
      throw ValidationError("schedule: sigma values must be ascending");
    }
  }
  OnsetResult out;
  out.family = cfg.family;
  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const double p = unstable_fraction(cfg.base, cfg.family, cfg.schedule[i], i,
                                       cfg.n_realizations, cfg.master_seed, workers);
    out.p_unstable.push_back(p);
    if (p <= cfg.threshold) continue;
    out.sigma_star = cfg.schedule[i];
    out.p_unstable_at_onset = p;
    if (cfg.bisection_steps > 0 && i > 0) {
      double lo = cfg.schedule[i - 1], hi = cfg.schedule[i];
      for (int step = 0; step < cfg.bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        const double pm =
            unstable_fraction(cfg.base, cfg.family, mid, cfg.schedule.size() + step,
                              cfg.n_realizations, cfg.master_seed, workers);
        if (pm > cfg.threshold) {
          hi = mid;
          out.p_unstable_at_onset = pm;
        } else {
          lo = mid;
        }
      }
      out.sigma_star = hi;
    }
    return out;
  }
  throw NoOnset("no instability onset for " + std::string(to_string(cfg.family)) +
                " disorder within the schedule");
}

namespace {

Row phase_row(const PhaseCell& c) {
  return Row{c.kappa_over_J, c.gc_over_J, std::string(to_string(c.classification)),
             c.re_zeta, c.e0, c.gap};
}

PhaseClass parse_class(const std::string& s) {
  if (s == "topological") return PhaseClass::topological;
  if (s == "trivial") return PhaseClass::trivial;
  if (s == "unstable") return PhaseClass::unstable;
  throw SchemaMismatch("unknown phase class '" + s + "'");
}

std::string row_text(const Row& row) {
  std::string out;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (c) out += ',';
    if (const auto* d = std::get_if<double>(&row[c])) {
      out += format_double(*d);
    } else {
      out += std::get<std::string>(row[c]);
    }
  }
  return out;
}

}  // namespace

Dataset to_dataset(const std::vector<PhaseCell>& cells) {
  Dataset d{SchemaKind::phase_diagram, {}};
  for (const auto& c : cells) d.rows.push_back(phase_row(c));
  return d;
}

Dataset to_dataset(const std::vector<DisorderSummary>& summaries) {
  Dataset d{SchemaKind::disorder, {}};
  for (const auto& s : summaries) {
    d.rows.push_back(Row{s.sigma, s.mean_gain_db, s.mean_rev_gain_db, s.mean_w_top,
                         s.mean_added_noise, s.p_unstable, s.stderr_gain_db,
                         s.stderr_rev_gain_db, s.stderr_w_top, s.stderr_added_noise,
                         s.mean_gain_db_dbavg, s.mean_rev_gain_db_dbavg,
                         static_cast<std::int64_t>(s.n_stable),
                         static_cast<std::int64_t>(s.n_unstable)});
  }
  return d;
}

std::string config_hash(const PhaseDiagramConfig& cfg) {
  std::ostringstream ss;
  ss << "phase-diagram\nkappa_over_J";
  for (double k : cfg.grid.kappa_over_J) ss << ' ' << format_double(k);
  ss << "\ngc_over_J";
  for (double g : cfg.grid.gc_over_J) ss << ' ' << format_double(g);
  ss << "\ngs_over_gc " << format_double(cfg.grid.gs_over_gc) << "\nwindow_gap "
     << cfg.grid.window_gap << "\nN " << cfg.base.N << "\nDelta " << format_double(cfg.base.Delta)
     << "\nJ " << format_double(cfg.base.J) << "\nphi " << format_double(cfg.base.phi)
     << "\nkappa " << format_double(cfg.base.kappa) << "\ng_s " << format_double(cfg.base.g_s)
     << "\ng_c " << format_double(cfg.base.g_c) << "\nomega " << format_double(cfg.omega)
     << '\n';
  return fnv1a_hex(ss.str());
}

PhaseDiagramRun run_phase_diagram(const PhaseDiagramConfig& cfg,
                                  const std::filesystem::path& stem,
                                  const EmitOptions& options, unsigned workers) {
  validate(cfg.base);
  const std::size_t nk = cfg.grid.kappa_over_J.size();
  const std::size_t ng = cfg.grid.gc_over_J.size();
  if (nk < 1 || ng < 1) throw ValidationError("phase diagram: empty grid");
  if (!options.force) {
    for (const char* ext : {".csv", ".json", ".manifest.json"}) {
      const std::filesystem::path target = stem.string() + ext;
      if (std::filesystem::exists(target)) {
        throw IoError(target.string() + " exists (use --force to overwrite)");
      }
    }
  }
  PhaseDiagramRun run;
  run.config_hash = config_hash(cfg);
  run.cells.resize(nk * ng);
  std::vector<char> row_done(nk, 0);

  const std::filesystem::path partial = stem.string() + ".partial";
  const std::string header = "# config " + run.config_hash;
  bool reuse = false;
  if (std::ifstream in(partial); in) {
    std::string line;
    std::getline(in, line);
    reuse = line == header;
    // Row records are "<kappa index>" followed by one line per cell; a row
    // counts only when all of its cells were flushed.
    std::map<std::size_t, std::vector<PhaseCell>> pending;
    while (reuse && std::getline(in, line)) {
      if (line.empty()) continue;
      const std::size_t comma = line.find(',');
      if (comma == std::string::npos) continue;
      try {
        const std::size_t i = std::stoul(line.substr(0, comma));
        const Dataset d = parse_csv(
            "kappa_over_J,gc_over_J,class,re_zeta,e0,gap\n" + line.substr(comma + 1) + "\n");
        const Row& r = d.rows.at(0);
        PhaseCell c;
        c.kappa_over_J = std::get<double>(r[0]);
        c.gc_over_J = std::get<double>(r[1]);
        c.classification = parse_class(std::get<std::string>(r[2]));
        c.re_zeta = std::get<double>(r[3]);
        c.e0 = std::get<double>(r[4]);
        c.gap = std::get<double>(r[5]);
        if (i < nk) pending[i].push_back(c);
      } catch (const std::exception&) {
        break;  // truncated tail of an interrupted run
      }
    }
    for (auto& [i, cells] : pending) {
      if (cells.size() != ng) continue;
      for (std::size_t k = 0; k < ng; ++k) run.cells[i * ng + k] = cells[k];
      row_done[i] = 1;
      run.resumed += ng;
    }
  }
  if (!reuse) write_text_file(partial, header + "\n", true);

  std::ofstream out(partial, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open " + partial.string());
  if (reuse) {
    // Rewrite completed rows only, dropping any partially flushed row.
    out.close();
    std::string text = header + "\n";
    for (std::size_t i = 0; i < nk; ++i) {
      if (!row_done[i]) continue;
      for (std::size_t k = 0; k < ng; ++k) {
        text += std::to_string(i) + "," + row_text(phase_row(run.cells[i * ng + k])) + "\n";
      }
    }
    write_text_file(partial, text, true);
    out.open(partial, std::ios::app | std::ios::binary);
  }
  for (std::size_t i = 0; i < nk; ++i) {
    if (row_done[i]) continue;
    parallel_for(ng, workers, [&](std::size_t k) {
      run.cells[i * ng + k] = phase_cell(cfg.grid, cfg.base, cfg.omega, i, k);
    });
    std::string text;
    for (std::size_t k = 0; k < ng; ++k) {
      text += std::to_string(i) + "," + row_text(phase_row(run.cells[i * ng + k])) + "\n";
    }
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + partial.string());
    run.computed += ng;
  }
  out.close();
  EmitOptions opts = options;
  opts.force = true;
  if (opts.config_hash.empty()) opts.config_hash = run.config_hash;
  emit_dataset(to_dataset(run.cells), stem, opts);
  std::filesystem::remove(partial);
  return run;
}

}  // namespace topotwpa
