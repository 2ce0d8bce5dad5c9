#include "topotwpa/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "topotwpa/errors.hpp"

namespace topotwpa {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 80, kTop = 40, kBottom = 60;
constexpr double kPlotW = kWidth - kLeft - kRight, kPlotH = kHeight - kTop - kBottom;

const std::array<const char*, 7> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#17becf", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Range finished() const {
    Range r = *this;
    if (!(r.lo <= r.hi)) return Range{0.0, 1.0};
    if (r.hi - r.lo < 1e-12 * std::max(1.0, std::abs(r.hi))) {
      r.lo -= 0.5;
      r.hi += 0.5;
    }
    return r;
  }
};

double number(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return std::numeric_limits<double>::quiet_NaN();
}

std::size_t column(const Schema& s, const std::string& name) {
  return static_cast<std::size_t>(
      std::find(s.columns.begin(), s.columns.end(), name) - s.columns.begin());
}

class Svg {
 public:
  Svg() {
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
            "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
            fmt(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke, double width = 1) {
    out_ += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" + fmt(x2) + "\" y2=\"" +
            fmt(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) + "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const char* anchor = "middle",
            double rotate = 0) {
    out_ += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor + "\"";
    if (rotate != 0) {
      out_ += " transform=\"rotate(" + fmt(rotate) + " " + fmt(x) + " " + fmt(y) + ")\"";
    }
    out_ += ">" + escape(s) + "</text>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    out_ += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(w) +
            "\" height=\"" + fmt(h) + "\" fill=\"" + fill + "\"/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke,
                bool dashed) {
    if (pts.size() < 2) return;
    out_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
            "\" stroke-width=\"1.5\"" + (dashed ? " stroke-dasharray=\"6 3\"" : "") +
            " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out_ += (i ? " " : "") + fmt(pts[i].first) + "," + fmt(pts[i].second);
    }
    out_ += "\"/>\n";
  }
  std::string finish() { return out_ + "</svg>\n"; }

 private:
  std::string out_;
};

double map_x(double v, const Range& r) { return kLeft + (v - r.lo) / (r.hi - r.lo) * kPlotW; }
double map_y(double v, const Range& r) {
  return kTop + kPlotH - (v - r.lo) / (r.hi - r.lo) * kPlotH;
}

void axes(Svg& svg, const Range& x, const Range& y, const std::string& xlabel,
          const std::string& ylabel, const std::optional<Range>& y2 = std::nullopt,
          const std::string& y2label = "") {
  svg.line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH, "black");
  svg.line(kLeft, kTop, kLeft, kTop + kPlotH, "black");
  for (int i = 0; i <= 5; ++i) {
    const double fx = x.lo + (x.hi - x.lo) * i / 5.0;
    const double px = map_x(fx, x);
    svg.line(px, kTop + kPlotH, px, kTop + kPlotH + 5, "black");
    svg.text(px, kTop + kPlotH + 18, tick_label(fx));
    const double fy = y.lo + (y.hi - y.lo) * i / 5.0;
    const double py = map_y(fy, y);
    svg.line(kLeft - 5, py, kLeft, py, "black");
    svg.text(kLeft - 8, py + 4, tick_label(fy), "end");
  }
  svg.text(kLeft + kPlotW / 2, kHeight - 15, xlabel);
  svg.text(20, kTop + kPlotH / 2, ylabel, "middle", -90);
  if (y2) {
    svg.line(kLeft + kPlotW, kTop, kLeft + kPlotW, kTop + kPlotH, "black");
    for (int i = 0; i <= 5; ++i) {
      const double fy = y2->lo + (y2->hi - y2->lo) * i / 5.0;
      const double py = map_y(fy, *y2);
      svg.line(kLeft + kPlotW, py, kLeft + kPlotW + 5, py, "black");
      svg.text(kLeft + kPlotW + 8, py + 4, tick_label(fy), "start");
    }
    svg.text(kWidth - 15, kTop + kPlotH / 2, y2label, "middle", 90);
  }
}

struct LineSpec {
  std::string x;
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::string xlabel, ylabel, y2label;
};

std::optional<LineSpec> line_spec(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::response:
      return LineSpec{"omega_over_J", {"gain_N_db", "rev_gain_N_db", "asym_db"}, {"n_add_N"},
                      "omega / J", "dB", "added noise (photons)"};
    case SchemaKind::spectrum:
      return LineSpec{"omega_over_J", {"E0", "E1", "E2", "E3", "E4", "E5"}, {},
                      "omega / J", "E_n / J", ""};
    case SchemaKind::occupation:
      return LineSpec{"site", {"max_occ", "coherent_part", "noise_part"}, {},
                      "site", "photons", ""};
    case SchemaKind::disorder:
      return LineSpec{"sigma", {"mean_gain_db", "mean_rev_db"}, {"mean_wtop", "mean_nadd"},
                      "sigma", "dB", "w_top / J, added noise"};
    default:
      return std::nullopt;
  }
}

std::string line_plot(const Dataset& d, const LineSpec& spec) {
  const Schema& s = schema(d.kind);
  const std::size_t xc = column(s, spec.x);
  Range xr, yl, yr;
  for (const Row& row : d.rows) {
    xr.add(number(row[xc]));
    for (const auto& c : spec.left) yl.add(number(row[column(s, c)]));
    for (const auto& c : spec.right) yr.add(number(row[column(s, c)]));
  }
  xr = xr.finished();
  yl = yl.finished();
  yr = yr.finished();
  Svg svg;
  std::optional<Range> y2;
  if (!spec.right.empty()) y2 = yr;
  axes(svg, xr, yl, spec.xlabel, spec.ylabel, y2, spec.y2label);
  std::size_t colour = 0;
  auto draw = [&](const std::string& name, const Range& y, bool dashed) {
    const std::size_t c = column(s, name);
    std::vector<std::pair<double, double>> pts;
    const char* stroke = kPalette[colour % kPalette.size()];
    for (const Row& row : d.rows) {
      const double xv = number(row[xc]), yv = number(row[c]);
      if (!std::isfinite(xv) || !std::isfinite(yv)) {
        svg.polyline(pts, stroke, dashed);
        pts.clear();
        continue;
      }
      pts.emplace_back(map_x(xv, xr), map_y(yv, y));
    }
    svg.polyline(pts, stroke, dashed);
    const double ly = kTop + 14.0 * static_cast<double>(colour) + 10;
    svg.line(kLeft + 10, ly - 4, kLeft + 30, ly - 4, stroke, 2);
    svg.text(kLeft + 35, ly, name, "start");
    ++colour;
  };
  for (const auto& c : spec.left) draw(c, yl, false);
  for (const auto& c : spec.right) draw(c, yr, true);
  return svg.finish();
}

std::string colour_scale(double t) {
  // Dark blue to yellow.
  t = std::clamp(t, 0.0, 1.0);
  const std::array<std::array<double, 3>, 4> stops = {
      {{0.27, 0.00, 0.33}, {0.23, 0.32, 0.55}, {0.13, 0.66, 0.52}, {0.99, 0.91, 0.14}}};
  const double pos = t * 3.0;
  const auto i = std::min<std::size_t>(2, static_cast<std::size_t>(pos));
  const double f = pos - static_cast<double>(i);
  char buf[8];
  std::array<int, 3> rgb{};
  for (int k = 0; k < 3; ++k) {
    rgb[static_cast<std::size_t>(k)] = static_cast<int>(std::lround(
        255.0 * (stops[i][static_cast<std::size_t>(k)] * (1 - f) +
                 stops[i + 1][static_cast<std::size_t>(k)] * f)));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string heatmap(const Dataset& d) {
  const Schema& s = schema(d.kind);
  const std::size_t kc = column(s, "kappa_over_J"), gc = column(s, "gc_over_J"),
                    cc = column(s, "class"), zc = column(s, "re_zeta");
  std::set<double> ks, gs;
  Range kr, gr, zr;
  for (const Row& row : d.rows) {
    ks.insert(number(row[kc]));
    gs.insert(number(row[gc]));
    kr.add(number(row[kc]));
    gr.add(number(row[gc]));
    if (std::get<std::string>(row[cc]) == "topological") zr.add(number(row[zc]));
  }
  zr = zr.finished();
  // Cells are centred on the grid values.
  auto half_step = [](const std::set<double>& v) {
    return v.size() > 1 ? (*v.rbegin() - *v.begin()) / (2.0 * static_cast<double>(v.size() - 1))
                        : 0.5;
  };
  const double hk = half_step(ks), hg = half_step(gs);
  Range xr = kr, yr = gr;
  if (!d.rows.empty()) {
    xr.lo -= hk;
    xr.hi += hk;
    yr.lo -= hg;
    yr.hi += hg;
  }
  xr = xr.finished();
  yr = yr.finished();
  Svg svg;
  for (const Row& row : d.rows) {
    const double k = number(row[kc]), g = number(row[gc]);
    const std::string& cls = std::get<std::string>(row[cc]);
    std::string fill = "#d9d9d9";
    if (cls == "unstable") fill = "#404040";
    if (cls == "topological") {
      const double z = number(row[zc]);
      fill = std::isfinite(z) ? colour_scale((z - zr.lo) / (zr.hi - zr.lo)) : "#ffffff";
    }
    const double x0 = map_x(k - hk, xr), x1 = map_x(k + hk, xr);
    const double y0 = map_y(g + hg, yr), y1 = map_y(g - hg, yr);
    svg.rect(x0, y0, x1 - x0, y1 - y0, fill);
  }
  axes(svg, xr, yr, "kappa / J", "g_c / J");
  // Colour bar for Re zeta.
  const double bx = kLeft + kPlotW + 20;
  for (int i = 0; i < 50; ++i) {
    const double t = i / 49.0;
    svg.rect(bx, kTop + kPlotH * (1 - t) - kPlotH / 50.0, 15, kPlotH / 50.0 + 0.5,
             colour_scale(t));
  }
  svg.text(bx + 7, kTop - 8, "Re zeta");
  svg.text(bx + 20, kTop + 10, tick_label(zr.hi), "start");
  svg.text(bx + 20, kTop + kPlotH, tick_label(zr.lo), "start");
  return svg.finish();
}

}  // namespace

std::string render_svg(const Dataset& d, PlotKind kind) {
  check_rows(d);
  if (kind == PlotKind::heatmap) {
    if (d.kind != SchemaKind::phase_diagram) {
      throw UnsupportedSchema("heatmap plots need a phase-diagram dataset, got " +
                              schema(d.kind).name);
    }
    return heatmap(d);
  }
  const auto spec = line_spec(d.kind);
  if (!spec) {
    throw UnsupportedSchema("line plots do not support " + schema(d.kind).name + " datasets");
  }
  return line_plot(d, *spec);
}

void render_plot(const Dataset& d, PlotKind kind, const std::filesystem::path& path,
                 bool force) {
  write_text_file(path, render_svg(d, kind), force);
}

}  // namespace topotwpa
