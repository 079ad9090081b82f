#pragma once

#include <string>

#include "triwave/scenario.hpp"

// Deterministic table emission. Floats are written as the shortest decimal
// that round-trips (std::to_chars), line endings are LF, and the column
// order is fixed, so identical inputs give byte-identical files on any
// platform with the same floating-point results.

namespace triwave {

enum class EmitFormat { csv, json };

// CSV: RFC-4180 quoting, header row of stable column names; flags 0/1 and
// gate-blocked values as "nan". JSON: array of flat objects with the same
// keys; NaN becomes null.
std::string emit_csv(const Table& table);
std::string emit_json(const Table& table);

void emit_file(const Table& table, EmitFormat format, const std::string& path);

}  // namespace triwave
