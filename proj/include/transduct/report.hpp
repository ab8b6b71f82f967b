#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "transduct/scenario.hpp"

namespace transduct::report {

// Cell that renders as `inf` (CSV, JSON) or `∞` (markdown).
struct Infinity {
  friend bool operator==(Infinity, Infinity) = default;
};
// Cell with no value, e.g. an undefined ratio. `undefined` in text, null in JSON.
struct Missing {
  friend bool operator==(Missing, Missing) = default;
};

// Doubles are rounded to the requested significant digits; integers and text print verbatim.
using Cell = std::variant<std::string, std::int64_t, double, Infinity, Missing>;

struct Table {
  std::string title;
  std::vector<std::string> columns;  // machine names: CSV header and JSON keys
  std::vector<std::string> labels;   // markdown header; falls back to columns when empty
  std::vector<std::vector<Cell>> rows;
};

// `value` rounded half-to-even to `digits` significant digits, in plain
// positional notation (no exponent). Zero prints as "0".
[[nodiscard]] std::string format_significant(double value, int digits);

// One table. CSV: header + rows. Markdown: GitHub table, preceded by a
// "### title" heading when the title is set. JSON: array of records.
// Output always ends in exactly one newline.
[[nodiscard]] std::string render(const Table& table, scenario::OutputFormat format, int precision);

// Several tables as one report. CSV sections are separated by a blank line and
// introduced by a "# title" line; JSON becomes an object keyed by title.
[[nodiscard]] std::string render(std::span<const Table> tables, scenario::OutputFormat format,
                                 int precision);

}  // namespace transduct::report
