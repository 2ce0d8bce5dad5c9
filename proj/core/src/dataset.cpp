#include "topotwpa/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "topotwpa/errors.hpp"

#ifndef TOPOTWPA_VERSION
#define TOPOTWPA_VERSION "0.0.0"
#endif

namespace topotwpa {

namespace {

const std::vector<Schema>& all_schemas() {
  static const std::vector<Schema> s = {
      {SchemaKind::response,
       "response",
       {"omega_over_J", "gain_N_db", "rev_gain_N_db", "n_add_N", "asym_db"}},
      {SchemaKind::occupation, "occupation", {"site", "max_occ", "coherent_part", "noise_part"}},
      {SchemaKind::phase_diagram,
       "phase-diagram",
       {"kappa_over_J", "gc_over_J", "class", "re_zeta", "e0", "gap"}},
      {SchemaKind::disorder,
       "disorder",
       {"sigma", "mean_gain_db", "mean_rev_db", "mean_wtop", "mean_nadd", "p_unstable",
        "stderr_gain_db", "stderr_rev_db", "stderr_wtop", "stderr_nadd", "mean_gain_db_dbavg",
        "mean_rev_db_dbavg", "n_stable", "n_unstable"}},
      {SchemaKind::spectrum,
       "spectrum",
       {"omega_over_J", "E0", "E1", "E2", "E3", "E4", "E5"}},
      {SchemaKind::matrix, "matrix", {"row", "col", "re", "im"}},
  };
  return s;
}

bool is_text_column(const std::string& name) { return name == "class"; }

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return HUGE_VAL;
  if (text == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw SchemaMismatch("parse_csv: '" + text + "' is not a number");
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const Schema& schema(SchemaKind kind) {
  for (const Schema& s : all_schemas()) {
    if (s.kind == kind) return s;
  }
  throw SchemaMismatch("unknown schema kind");
}

const Schema& schema_for_columns(const std::vector<std::string>& columns) {
  for (const Schema& s : all_schemas()) {
    if (s.columns == columns) return s;
  }
  std::string joined;
  for (const auto& c : columns) joined += (joined.empty() ? "" : ",") + c;
  throw SchemaMismatch("no schema has columns: " + joined);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_rows(const Dataset& d) {
  const Schema& s = schema(d.kind);
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    const Row& row = d.rows[r];
    if (row.size() != s.columns.size()) {
      throw SchemaMismatch(s.name + ": row " + std::to_string(r) + " has " +
                           std::to_string(row.size()) + " cells, expected " +
                           std::to_string(s.columns.size()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool text = std::holds_alternative<std::string>(row[c]);
      if (text != is_text_column(s.columns[c])) {
        throw SchemaMismatch(s.name + ": column " + s.columns[c] + " has the wrong type");
      }
      if (text && std::get<std::string>(row[c]).find_first_of(",\"\n\r") != std::string::npos) {
        throw SchemaMismatch(s.name + ": text cell contains a separator");
      }
    }
  }
}

std::string to_csv(const Dataset& d) {
  check_rows(d);
  const Schema& s = schema(d.kind);
  std::string out;
  for (std::size_t c = 0; c < s.columns.size(); ++c) out += (c ? "," : "") + s.columns[c];
  out += '\n';
  for (const Row& row : d.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_text(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Dataset& d) {
  check_rows(d);
  const Schema& s = schema(d.kind);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const Row& row : d.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      if (const auto* v = std::get_if<double>(&cell)) {
        if (std::isfinite(*v)) {
          obj[s.columns[c]] = *v;
        } else {
          obj[s.columns[c]] = format_double(*v);
        }
      } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        obj[s.columns[c]] = *i;
      } else {
        obj[s.columns[c]] = std::get<std::string>(cell);
      }
    }
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc = {{"schema", s.name}, {"columns", s.columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

Dataset parse_csv(std::string_view text) {
  std::vector<std::string> lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw SchemaMismatch("parse_csv: missing header");
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
  }
  const Schema& s = schema_for_columns(split(lines[0], ','));
  Dataset d{s.kind, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> cells = split(lines[i], ',');
    if (cells.size() != s.columns.size()) {
      throw SchemaMismatch("parse_csv: line " + std::to_string(i + 1) + " has " +
                           std::to_string(cells.size()) + " cells");
    }
    Row row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (is_text_column(s.columns[c])) {
        row.emplace_back(cells[c]);
      } else {
        row.emplace_back(parse_number(cells[c]));
      }
    }
    d.rows.push_back(std::move(row));
  }
  return d;
}

Dataset read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_json(const RunManifest& m) {
  nlohmann::ordered_json doc = {{"config_hash", m.config_hash},
                                {"tool_version", m.tool_version},
                                {"seed", m.seed},
                                {"started_utc", m.started_utc},
                                {"finished_utc", m.finished_utc},
                                {"outputs", m.outputs}};
  return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string library_version() { return TOPOTWPA_VERSION; }

void write_text_file(const std::filesystem::path& path, std::string_view text, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw IoError(path.string() + " exists (use --force to overwrite)");
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

RunManifest emit_dataset(const Dataset& d, const std::filesystem::path& stem,
                         const EmitOptions& options) {
  const std::string csv_text = to_csv(d);
  const std::string json_text = to_json(d);
  const std::filesystem::path csv = stem.string() + ".csv";
  const std::filesystem::path json = stem.string() + ".json";
  const std::filesystem::path manifest = stem.string() + ".manifest.json";
  if (!options.force) {
    for (const auto& p : {csv, json, manifest}) {
      if (std::filesystem::exists(p)) {
        throw IoError(p.string() + " exists (use --force to overwrite)");
      }
    }
  }
  RunManifest m;
  m.config_hash = options.config_hash;
  m.tool_version = library_version();
  m.seed = options.seed;
  m.started_utc = options.started_utc.empty() ? utc_timestamp() : options.started_utc;
  write_text_file(csv, csv_text, true);
  write_text_file(json, json_text, true);
  m.outputs = {csv.filename().string(), json.filename().string()};
  m.finished_utc = utc_timestamp();
  write_text_file(manifest, to_json(m), true);
  return m;
}

}  // namespace topotwpa
