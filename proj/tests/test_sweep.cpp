#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "support.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/parallel.hpp"
#include "topotwpa/response.hpp"
#include "topotwpa/sweep.hpp"
#include "topotwpa/units.hpp"

using namespace topotwpa;

namespace {

EffectiveParams p1p() { return EffectiveParams::in_units_of_J(10, 1.0, 2.6, 0.6, 0.6); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(50, 3,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  CHECK(default_workers() >= 1);
}

TEST_CASE("realization seeds") {
  std::set<std::uint64_t> seen;
  for (auto f : kDisorderFamilies)
    for (std::size_t s = 0; s < 4; ++s)
      for (std::size_t r = 0; r < 50; ++r) seen.insert(realization_seed(9, f, s, r));
  CHECK(seen.size() == 6u * 4u * 50u);
  CHECK(realization_seed(9, DisorderFamily::J, 2, 3) == realization_seed(9, DisorderFamily::J, 2, 3));
  CHECK(realization_seed(9, DisorderFamily::J, 2, 3) != realization_seed(10, DisorderFamily::J, 2, 3));
}

TEST_CASE("family names") {
  for (auto f : kDisorderFamilies) CHECK(parse_disorder_family(to_string(f)) == f);
  CHECK(parse_disorder_family("g_c") == DisorderFamily::g_c);
  CHECK_THROWS_AS(parse_disorder_family("omega"), ValidationError);
}

TEST_CASE("zero disorder reproduces the clean chain") {
  DisorderConfig cfg;
  cfg.base = p1p();
  cfg.family = DisorderFamily::g_c;
  cfg.sigmas = {0.0};
  cfg.n_realizations = 20;
  const auto s = disorder_sweep(cfg, -0.5).at(0);
  const auto h = build_hnh(cfg.base);
  const auto g = gains(h, -0.5, 0, 9);
  const auto w = topological_window(h, 1.0, default_frequency_grid(1.0), false);
  CHECK(s.p_unstable == 0.0);
  CHECK(s.n_stable == 20);
  CHECK(std::abs(s.mean_gain_db - to_db(g.forward)) < 1e-12);
  CHECK(std::abs(s.mean_rev_gain_db - to_db(g.reverse)) < 1e-12);
  CHECK(std::abs(s.mean_w_top - w.w_top) < 1e-12);
  CHECK(std::abs(s.mean_added_noise - noise(h, -0.5, 9).added) < 1e-12);
  CHECK(s.stderr_gain_db == doctest::Approx(0.0));
}

TEST_CASE("results do not depend on the worker count") {
  DisorderConfig cfg;
  cfg.base = p1p();
  cfg.family = DisorderFamily::J;
  cfg.sigmas = {0.05, 0.2};
  cfg.n_realizations = 60;
  cfg.master_seed = 1234;
  cfg.keep_records = true;
  const auto a = disorder_sweep(cfg, -0.5, 1);
  const auto b = disorder_sweep(cfg, -0.5, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_bits(a[i].mean_gain_db, b[i].mean_gain_db));
    CHECK(same_bits(a[i].mean_w_top, b[i].mean_w_top));
    CHECK(same_bits(a[i].stderr_added_noise, b[i].stderr_added_noise));
    CHECK(a[i].n_stable + a[i].n_unstable == 60);
    REQUIRE(a[i].records.size() == 60);
    for (std::size_t r = 0; r < 60; ++r) CHECK(a[i].records[r].seed == b[i].records[r].seed);
  }
  CHECK(to_csv(to_dataset(a)) == to_csv(to_dataset(b)));
}

TEST_CASE("standard error shrinks as one over the square root of the sample") {
  DisorderConfig cfg;
  cfg.base = p1p();
  cfg.family = DisorderFamily::kappa;
  cfg.sigmas = {0.2};
  cfg.compute_w_top = false;
  cfg.master_seed = 5;
  cfg.n_realizations = 100;
  const double small = disorder_sweep(cfg, -0.5).at(0).stderr_gain_db;
  cfg.n_realizations = 1600;
  const double large = disorder_sweep(cfg, -0.5).at(0).stderr_gain_db;
  CHECK(small / large == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("unstable draws") {
  const auto hot = EffectiveParams::in_units_of_J(20, 1.0, 2.6, 2.0, 2.0);
  DisorderConfig cfg;
  cfg.base = hot;
  cfg.family = DisorderFamily::delta;
  cfg.sigmas = {0.01};
  cfg.n_realizations = 10;
  const auto s = disorder_sweep(cfg, -0.5).at(0);
  CHECK(s.p_unstable == 1.0);
  CHECK(std::isnan(s.mean_gain_db));
  std::vector<RealizationRecord> recs(3);
  CHECK_THROWS_AS(summarize(0.1, recs, false), AllUnstable);
}

TEST_CASE("instability onset") {
  OnsetConfig cfg;
  cfg.base = p1p();
  cfg.family = DisorderFamily::g_c;
  cfg.schedule = {0.0, 0.0, 0.0};
  cfg.n_realizations = 50;
  CHECK_THROWS_AS(instability_onset(cfg), NoOnset);

  cfg.schedule = {0.2, 0.3, 0.4, 0.6, 0.8};
  cfg.n_realizations = 200;
  const auto r = instability_onset(cfg);
  CHECK(r.sigma_star > 0.2);
  CHECK(r.p_unstable_at_onset > 0.01);
  CHECK(r.p_unstable.back() > 0.01);
}

TEST_CASE("P3 phase-disorder onset") {
  OnsetConfig cfg;
  cfg.base = EffectiveParams::in_units_of_J(4, 1.0, 2.8, 0.95, 0.95);
  cfg.family = DisorderFamily::phi;
  for (int k = 1; k <= 40; ++k) cfg.schedule.push_back(0.025 * k);
  cfg.n_realizations = 500;
  cfg.master_seed = 3;
  const auto r = instability_onset(cfg);
  MESSAGE("P3 phase onset sigma* = " << r.sigma_star);
  CHECK(std::abs(r.sigma_star - 0.5) <= 0.15);
}

TEST_CASE("phase diagram run: deterministic, resumable, refuses to overwrite") {
  const auto dir = testing::scratch_dir("phase_diagram");
  PhaseDiagramConfig cfg;
  cfg.grid = PhaseGrid{{0.9, 2.6, 2.8}, {0.25, 0.6, 0.95}};
  cfg.base = EffectiveParams::in_units_of_J(20, 1.0, 2.6, 0.6, 0.6);
  cfg.omega = -0.5;
  EmitOptions opts;

  const auto first = run_phase_diagram(cfg, dir / "a", opts);
  CHECK(first.computed == 9);
  CHECK(first.resumed == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "a.partial"));
  CHECK(first.cells[0 * 3 + 0].classification == PhaseClass::topological);
  CHECK(first.cells[1 * 3 + 1].classification == PhaseClass::topological);
  CHECK(first.cells[2 * 3 + 2].classification == PhaseClass::topological);

  CHECK_THROWS_AS(run_phase_diagram(cfg, dir / "a", opts), IoError);

  const auto second = run_phase_diagram(cfg, dir / "b", opts);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  // Interrupted after the first kappa row: the partial file holds its cells.
  std::istringstream csv(slurp(dir / "a.csv"));
  std::string line;
  std::getline(csv, line);
  std::string partial = "# config " + config_hash(cfg) + "\n";
  for (int k = 0; k < 3 && std::getline(csv, line); ++k) partial += "0," + line + "\n";
  partial += "1,0.5,0.25";  // torn write of the next row
  write_text_file(dir / "c.partial", partial, true);
  const auto resumed = run_phase_diagram(cfg, dir / "c", opts);
  CHECK(resumed.resumed == 3);
  CHECK(resumed.computed == 6);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "c.csv"));

  // A stale partial from another configuration is discarded.
  write_text_file(dir / "d.partial", "# config 0000000000000000\n0,1,2,3\n", true);
  const auto fresh = run_phase_diagram(cfg, dir / "d", opts);
  CHECK(fresh.resumed == 0);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "d.csv"));

  PhaseDiagramConfig other = cfg;
  other.omega = 0.0;
  CHECK(config_hash(other) != config_hash(cfg));
}

}
