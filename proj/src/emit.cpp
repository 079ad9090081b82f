#include "triwave/emit.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "triwave/errors.hpp"

namespace triwave {

namespace {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string cell(double v, ColumnType type) {
  switch (type) {
    case ColumnType::flag:
    case ColumnType::integer:
      return std::isnan(v) ? "nan" : std::to_string(static_cast<long>(v));
    case ColumnType::real:
      return shortest(v);
  }
  return {};
}

// The emitted names/numbers never need quoting, but keep the escape path
// for completeness of the CSV rules.
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string json_cell(double v, ColumnType type) {
  if (std::isnan(v)) return "null";
  switch (type) {
    case ColumnType::flag:
      return v != 0.0 ? "true" : "false";
    case ColumnType::integer:
      return std::to_string(static_cast<long>(v));
    case ColumnType::real:
      return shortest(v);
  }
  return {};
}

}  // namespace

std::string emit_csv(const Table& table) {
  if (table.rows.empty()) throw ContractError("emit: empty table");
  const auto& cols = record_columns();

  std::string out;
  if (table.swept_key) {
    out += csv_escape(*table.swept_key);
    out += ',';
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out += cols[c].name;
    out += c + 1 < cols.size() ? ',' : '\n';
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.swept_key) {
      out += shortest(table.swept_values[i]);
      out += ',';
    }
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out += cell(cols[c].get(table.rows[i]), cols[c].type);
      out += c + 1 < cols.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string emit_json(const Table& table) {
  if (table.rows.empty()) throw ContractError("emit: empty table");
  const auto& cols = record_columns();

  std::string out = "[\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += "  {";
    bool first = true;
    if (table.swept_key) {
      out += "\"" + *table.swept_key + "\": " + shortest(table.swept_values[i]);
      first = false;
    }
    for (const auto& col : cols) {
      if (!first) out += ", ";
      first = false;
      out += "\"";
      out += col.name;
      out += "\": ";
      out += json_cell(col.get(table.rows[i]), col.type);
    }
    out += i + 1 < table.rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

void emit_file(const Table& table, EmitFormat format, const std::string& path) {
  const std::string body = format == EmitFormat::csv ? emit_csv(table) : emit_json(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("emit: cannot write '" + path + "'");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw ValidationError("emit: short write to '" + path + "'");
}

}  // namespace triwave
