#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace topotwpa {

enum class SchemaKind { response, occupation, phase_diagram, disorder, spectrum, matrix };

struct Schema {
  SchemaKind kind;
  std::string name;
  std::vector<std::string> columns;
};

const Schema& schema(SchemaKind kind);
/// The schema whose columns equal `columns` exactly. Throws SchemaMismatch.
const Schema& schema_for_columns(const std::vector<std::string>& columns);

using Cell = std::variant<double, std::int64_t, std::string>;
using Row = std::vector<Cell>;

struct Dataset {
  SchemaKind kind;
  std::vector<Row> rows;
};

/// %.17g, which reads back to the same double; nan, inf and -inf spelled out.
std::string format_double(double v);

/// Throws SchemaMismatch if a row has the wrong width.
void check_rows(const Dataset& d);

std::string to_csv(const Dataset& d);
/// Array of objects keyed by column name.
std::string to_json(const Dataset& d);

/// Parses a CSV written by to_csv; numeric cells become doubles.
Dataset parse_csv(std::string_view text);
Dataset read_csv(const std::filesystem::path& path);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
};

std::string to_json(const RunManifest& m);
std::string utc_timestamp();
std::string library_version();

struct EmitOptions {
  bool force = false;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string started_utc;
};

/// Writes `<stem>.csv`, `<stem>.json` and `<stem>.manifest.json` next to
/// each other. Returns the manifest. Throws IoError if any target exists and
/// `force` is false, or if writing fails.
RunManifest emit_dataset(const Dataset& d, const std::filesystem::path& stem,
                         const EmitOptions& options);

/// Writes a text file, refusing to overwrite unless `force`.
void write_text_file(const std::filesystem::path& path, std::string_view text, bool force);

}  // namespace topotwpa
