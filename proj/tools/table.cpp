#include "table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace selfnorm::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // Shortest round-trip form; never more than 17 significant digits.
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

Cell::Cell(double v) : kind_(Kind::number), text_(format_number(v)), number_(v) {}
Cell::Cell(std::uint64_t v) : kind_(Kind::integer), text_(std::to_string(v)) {}
Cell::Cell(bool v) : kind_(Kind::boolean), text_(v ? "true" : "false") {}
Cell::Cell(std::string v) : kind_(Kind::text), text_(std::move(v)) {}
Cell::Cell(std::optional<double> v) {
  if (v) *this = Cell(*v);
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("row width does not match header");
  rows_.push_back(std::move(row));
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const Table& table, std::ostream& out) {
  const auto& cols = table.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << csv_field(cols[i]);
  out << '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i].text());
    out << '\n';
  }
}

void write_ndjson(const Table& table, std::ostream& out) {
  const auto& cols = table.columns();
  for (const auto& row : table.rows()) {
    out << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << nlohmann::json(cols[i]).dump() << ':';
      const Cell& c = row[i];
      switch (c.kind()) {
        case Cell::Kind::number:
          out << (std::isfinite(c.number()) ? c.text() : "null");
          break;
        case Cell::Kind::integer:
        case Cell::Kind::boolean:
          out << c.text();
          break;
        case Cell::Kind::text:
          out << nlohmann::json(c.text()).dump();
          break;
        case Cell::Kind::empty:
          out << "null";
          break;
      }
    }
    out << "}\n";
  }
}

void write_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::csv) {
    write_csv(table, out);
  } else {
    write_ndjson(table, out);
  }
}

}  // namespace selfnorm::cli
