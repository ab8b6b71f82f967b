#include "transduct/report.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace transduct::report {

using scenario::OutputFormat;
using ordered_json = nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string cell_text(const Cell& cell, OutputFormat format, int precision) {
  return std::visit(overloaded{
                        [](const std::string& s) { return s; },
                        [](std::int64_t v) { return std::to_string(v); },
                        [&](double v) { return format_significant(v, precision); },
                        [&](Infinity) -> std::string {
                          return format == OutputFormat::markdown ? "∞" : "inf";
                        },
                        [](Missing) -> std::string { return "undefined"; },
                    },
                    cell);
}

ordered_json cell_json(const Cell& cell, int precision) {
  return std::visit(overloaded{
                        [](const std::string& s) -> ordered_json { return s; },
                        [](std::int64_t v) -> ordered_json { return v; },
                        [&](double v) -> ordered_json {
                          if (!std::isfinite(v)) return format_significant(v, precision);
                          // The rounded decimal text is what gets stored, so a
                          // reparse sees exactly the printed digits.
                          const auto text = format_significant(v, precision);
                          double parsed = 0.0;
                          std::from_chars(text.data(), text.data() + text.size(), parsed);
                          return parsed;
                        },
                        [](Infinity) -> ordered_json { return "inf"; },
                        [](Missing) -> ordered_json { return nullptr; },
                    },
                    cell);
}

void check_shape(const Table& table) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("table '" + table.title + "' has a ragged row");
    }
  }
  if (!table.labels.empty() && table.labels.size() != table.columns.size()) {
    throw std::invalid_argument("table '" + table.title + "' label count mismatch");
  }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Table& table, int precision) {
  std::vector<std::string> header;
  for (const auto& c : table.columns) header.push_back(csv_field(c));
  std::string out = join(header, ",") + "\n";
  for (const auto& row : table.rows) {
    std::vector<std::string> fields;
    for (const auto& cell : row) fields.push_back(csv_field(cell_text(cell, OutputFormat::csv, precision)));
    out += join(fields, ",") + "\n";
  }
  return out;
}

std::string render_markdown(const Table& table, int precision) {
  std::string out;
  if (!table.title.empty()) out += "### " + table.title + "\n\n";
  const auto& header = table.labels.empty() ? table.columns : table.labels;
  out += "| " + join(header, " | ") + " |\n";
  std::vector<std::string> rule(header.size(), "---");
  out += "|" + join(rule, "|") + "|\n";
  for (const auto& row : table.rows) {
    std::vector<std::string> fields;
    for (const auto& cell : row) fields.push_back(cell_text(cell, OutputFormat::markdown, precision));
    out += "| " + join(fields, " | ") + " |\n";
  }
  return out;
}

ordered_json records(const Table& table, int precision) {
  auto out = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json record = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) record[table.columns[i]] = cell_json(row[i], precision);
    out.push_back(std::move(record));
  }
  return out;
}

}  // namespace

std::string format_significant(double value, int digits) {
  if (digits < 1 || digits > 17) throw std::invalid_argument("significant digits must be 1..17");
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";

  // to_chars rounds the exact binary value correctly, ties to even.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific,
                                 digits - 1);
  const std::string sci(buf, res.ptr);
  const auto e_pos = sci.find('e');
  const int exponent = std::stoi(sci.substr(e_pos + 1));
  std::string mantissa = sci.substr(0, e_pos);
  std::string sign;
  if (mantissa.front() == '-') {
    sign = "-";
    mantissa.erase(0, 1);
  }
  std::string significand;
  for (char c : mantissa) {
    if (c != '.') significand += c;
  }
  const int n = static_cast<int>(significand.size());

  std::string out;
  if (exponent >= n - 1) {
    out = significand + std::string(static_cast<std::size_t>(exponent - (n - 1)), '0');
  } else if (exponent >= 0) {
    const auto point = static_cast<std::size_t>(exponent + 1);
    out = significand.substr(0, point) + "." + significand.substr(point);
  } else {
    out = "0." + std::string(static_cast<std::size_t>(-exponent - 1), '0') + significand;
  }
  return sign + out;
}

std::string render(const Table& table, OutputFormat format, int precision) {
  check_shape(table);
  switch (format) {
    case OutputFormat::csv:
      return render_csv(table, precision);
    case OutputFormat::markdown:
      return render_markdown(table, precision);
    case OutputFormat::json:
      return records(table, precision).dump(2) + "\n";
  }
  throw std::invalid_argument("unknown output format");
}

std::string render(std::span<const Table> tables, OutputFormat format, int precision) {
  if (tables.size() == 1) return render(tables.front(), format, precision);
  for (const auto& t : tables) check_shape(t);
  std::string out;
  switch (format) {
    case OutputFormat::csv:
      for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) out += "\n";
        out += "# " + tables[i].title + "\n" + render_csv(tables[i], precision);
      }
      return out;
    case OutputFormat::markdown:
      for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) out += "\n";
        out += render_markdown(tables[i], precision);
      }
      return out;
    case OutputFormat::json: {
      ordered_json doc = ordered_json::object();
      for (const auto& t : tables) doc[t.title] = records(t, precision);
      return doc.dump(2) + "\n";
    }
  }
  throw std::invalid_argument("unknown output format");
}

}  // namespace transduct::report
