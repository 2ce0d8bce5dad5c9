#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"
#include "topotwpa/config.hpp"
#include "topotwpa/dataset.hpp"
#include "topotwpa/errors.hpp"
#include "topotwpa/plot.hpp"
#include "topotwpa/presets.hpp"
#include "topotwpa/sweep.hpp"
#include "topotwpa/tables.hpp"
#include "topotwpa/topology.hpp"
#include "topotwpa/units.hpp"

using namespace topotwpa;
using testing::rel_err;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("presets") {
  CHECK(presets().size() == 4);
  CHECK(&preset("P1'") == &preset("P1p"));
  CHECK_THROWS_AS(preset("P9"), ValidationError);
  for (const Preset& p : presets()) {
    CAPTURE(p.name);
    const auto e = circuit_effective_params(p);
    CHECK(rel_err(e.g_c / e.J, p.table.gc_over_J) < 0.05);
    CHECK(rel_err(e.kappa / e.J, p.table.kappa_over_J) < 0.05);
    CHECK(rel_err(e.J / two_pi / 1e6, p.table.J_MHz) < 0.05);
    CHECK(e.N == p.table.N);
  }
}

TEST_CASE("preset configuration") {
  const RunConfig c = parse_config("preset = P1\n");
  const auto e = resolve_effective_params(c);
  CHECK(rel_err(e.g_c / e.J, 0.6) < 0.05);
  CHECK(rel_err(e.kappa / e.J, 2.6) < 0.05);
  CHECK(c == preset_config("P1"));

  const RunConfig big = parse_config("preset = P1\n[lattice]\nN = 20\n");
  const auto f = resolve_effective_params(big);
  CHECK(f.N == 20);
  CHECK(f.J == e.J);
  CHECK(f.Delta == 0.0);
  CHECK(f.phi == doctest::Approx(std::numbers::pi / 2));

  RunConfig circ = parse_config("preset = P1\n[lattice]\nsource = circuit\n");
  const auto g = resolve_effective_params(circ);
  CHECK(rel_err(g.g_c / g.J, 0.6) < 0.05);
}

TEST_CASE("units and overrides") {
  const RunConfig c = parse_config(
      "seed = 17\n"
      "[circuit]\n"
      "C_a = 1790 fF\nC_a_prime = 1.02 pF\nC_ab = 6.26 fF\nC_aw = 386 fF\n"
      "C_b = 388 fF\nC_b_prime = 1.99 fF\nC_bw = 39.8 fF\nL_b = 0.995 nH\n"
      "E_J = 1.00 THz\nE_J_prime = 0.5 THz\nM = 1\nN = 8\nZ_0 = 50 Ohm\nP_b = -74.8 dBm\n"
      "[lattice]\nJ = 156 MHz\nkappa_over_J = 2.6\ngc_over_J = 0.6\ngs_over_J = 0.6\nphi = 90 deg\n"
      "[signal]\ninput_site = 2\nalpha_s_sq = 5 MHz\n");
  CHECK(c.seed == 17);
  CHECK(rel_err(c.circuit.C_a_prime, 1020e-15) < 1e-12);
  CHECK(rel_err(c.circuit.E_J, constants::h * 1e12) < 1e-12);
  CHECK(rel_err(c.circuit.P_b, dbm_to_watt(-74.8)) < 1e-12);
  CHECK(rel_err(c.lattice.J, two_pi * 156e6) < 1e-12);
  CHECK(rel_err(c.lattice.kappa, 2.6 * two_pi * 156e6) < 1e-12);
  CHECK(c.lattice.N == 8);
  CHECK(c.signal.input_site == 1);
  CHECK(rel_err(c.signal.alpha_s_sq, two_pi * 5e6) < 1e-12);
  const auto ec = derive_effective_circuit(c.circuit);
  CHECK(rel_err(ec.C_a_eq, 4216e-15) < 0.01);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_config("preset = P1\n[circuit]\nC_a = 12 furlongs\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_config("[circuit]\nC_a = 12\n"), ParseError);
  CHECK_THROWS_AS(parse_config("preset = P1\n[lattice]\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("preset = P1\n[lattice]\nN = 2.5\n"), ParseError);
  CHECK_THROWS_AS(parse_config("preset = P1\njust words\n"), ParseError);
  CHECK_THROWS_AS(parse_config("preset = P7\n"), ParseError);
}

TEST_CASE("validation errors name the field") {
  try {
    parse_config("preset = P1\n[circuit]\nC_a = -3 fF\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("C_a") != std::string::npos);
  }
  try {
    parse_config("preset = P1\n[lattice]\nkappa_over_J = 0\n");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("kappa") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("preset = P1\n[signal]\ninput_site = 99\n"), ValidationError);
}

TEST_CASE("canonical text round-trips exactly") {
  for (const Preset& p : presets()) {
    const RunConfig c = preset_config(p.name);
    CHECK(parse_config(write_config(c)) == c);
  }
  RunConfig c = parse_config(
      "preset = P2\nseed = 99\n[options]\napply_kerr_shifts = false\n"
      "[meanfield]\nmode = circuit_detuning\n[lattice]\nN = 13\ndelta_over_J = 0.1\nphi = 1.234567\n"
      "[signal]\nomega_s_over_J = 0.3\ninput_site = 3\n");
  CHECK(parse_config(write_config(c)) == c);
  CHECK(write_config(parse_config(write_config(c))) == write_config(c));
}

TEST_CASE("config files") {
  const auto dir = testing::scratch_dir("config");
  write_text_file(dir / "run.cfg", "preset = P3\n", false);
  CHECK(load_config(dir / "run.cfg") == preset_config("P3"));
  CHECK_THROWS_AS(load_config(dir / "missing.cfg"), IoError);
  CHECK_THROWS_AS(write_text_file(dir / "run.cfg", "x", false), IoError);
}

TEST_CASE("datasets") {
  const auto dir = testing::scratch_dir("dataset");
  SUBCASE("empty dataset is a header plus manifest") {
    const Dataset d{SchemaKind::phase_diagram, {}};
    emit_dataset(d, dir / "empty", {});
    CHECK(slurp(dir / "empty.csv") == "kappa_over_J,gc_over_J,class,re_zeta,e0,gap\n");
    CHECK(std::filesystem::exists(dir / "empty.manifest.json"));
    CHECK(std::filesystem::exists(dir / "empty.json"));
  }
  SUBCASE("response columns and byte-stable re-emission") {
    const auto h = build_hnh(EffectiveParams::in_units_of_J(10, 1.0, 2.6, 0.6, 0.6));
    const auto grid = frequency_grid(-2.0, 2.0, 41);
    const Dataset d = response_table(h, 1.0, grid);
    const std::string csv = to_csv(d);
    CHECK(csv.substr(0, csv.find('\n')) == "omega_over_J,gain_N_db,rev_gain_N_db,n_add_N,asym_db");
    CHECK(to_csv(response_table(h, 1.0, grid)) == csv);
    emit_dataset(d, dir / "r1", {});
    emit_dataset(response_table(h, 1.0, grid), dir / "r2", {});
    CHECK(slurp(dir / "r1.csv") == slurp(dir / "r2.csv"));
    CHECK(slurp(dir / "r1.json") == slurp(dir / "r2.json"));
    CHECK_THROWS_AS(emit_dataset(d, dir / "r1", {}), IoError);
    EmitOptions force;
    force.force = true;
    CHECK_NOTHROW(emit_dataset(d, dir / "r1", force));
    const Dataset back = parse_csv(csv);
    CHECK(back.kind == SchemaKind::response);
    REQUIRE(back.rows.size() == d.rows.size());
    for (std::size_t r = 0; r < d.rows.size(); ++r)
      for (std::size_t c = 0; c < d.rows[r].size(); ++c)
        CHECK(std::get<double>(back.rows[r][c]) == std::get<double>(d.rows[r][c]));
  }
  SUBCASE("float formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(std::stod(format_double(2.0 / 3.0)) == 2.0 / 3.0);
  }
  SUBCASE("schema checks") {
    Dataset bad{SchemaKind::response, {{1.0, 2.0}}};
    CHECK_THROWS_AS(check_rows(bad), SchemaMismatch);
    CHECK_THROWS_AS(parse_csv("a,b\n1,2\n"), SchemaMismatch);
    CHECK(schema_for_columns(schema(SchemaKind::disorder).columns).kind == SchemaKind::disorder);
  }
  SUBCASE("manifest") {
    EmitOptions o;
    o.config_hash = "abc";
    o.seed = 5;
    const auto m = emit_dataset(Dataset{SchemaKind::matrix, {}}, dir / "m", o);
    CHECK(m.config_hash == "abc");
    CHECK(m.outputs.size() == 2);
    const std::string text = slurp(dir / "m.manifest.json");
    CHECK(text.find("\"seed\": 5") != std::string::npos);
    CHECK(text.find(library_version()) != std::string::npos);
  }
}

TEST_CASE("plots") {
  const auto dir = testing::scratch_dir("plot");
  SUBCASE("phase-diagram heatmap") {
    PhaseDiagramConfig cfg;
    cfg.grid = PhaseGrid{{0.9, 2.6, 6.0}, {0.1, 0.6, 2.0}};
    cfg.base = EffectiveParams::in_units_of_J(20, 1.0, 2.6, 0.6, 0.6);
    cfg.omega = -0.5;
    const Dataset d = to_dataset(phase_map(cfg.grid, cfg.base, cfg.omega));
    const std::string svg = render_svg(d, PlotKind::heatmap);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<rect") >= 9);
    CHECK(svg.find("#d9d9d9") != std::string::npos);
    CHECK(svg.find("#404040") != std::string::npos);
    CHECK(svg.find("Re") != std::string::npos);
    CHECK(render_svg(d, PlotKind::heatmap) == svg);
  }
  SUBCASE("dual-axis response plot") {
    const auto h = build_hnh(EffectiveParams::in_units_of_J(10, 1.0, 2.6, 0.6, 0.6));
    const Dataset d = response_table(h, 1.0, frequency_grid(-2.0, 2.0, 21));
    const std::string svg = render_svg(d, PlotKind::line);
    CHECK(count(svg, "<polyline") >= 3);
    CHECK(svg.find("n_add") != std::string::npos);
    render_plot(d, PlotKind::line, dir / "r.svg");
    CHECK(slurp(dir / "r.svg") == svg);
    CHECK_THROWS_AS(render_plot(d, PlotKind::line, dir / "r.svg"), IoError);
  }
  SUBCASE("empty dataset draws axes only") {
    const std::string svg = render_svg(Dataset{SchemaKind::response, {}}, PlotKind::line);
    CHECK(count(svg, "<polyline") == 0);
    CHECK(count(svg, "<line") >= 2);
  }
  SUBCASE("unsupported combinations") {
    CHECK_THROWS_AS(render_svg(Dataset{SchemaKind::matrix, {}}, PlotKind::line), UnsupportedSchema);
    CHECK_THROWS_AS(render_svg(Dataset{SchemaKind::response, {}}, PlotKind::heatmap),
                    UnsupportedSchema);
  }
}

}
