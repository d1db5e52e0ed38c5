#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace selfnorm::cli {

enum class Format { csv, json };

/// Shortest decimal text that round-trips, with at most 17 significant
/// digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

class Cell {
 public:
  enum class Kind { number, integer, boolean, text, empty };

  Cell() = default;
  Cell(double v);                      // NOLINT(google-explicit-constructor)
  Cell(std::uint64_t v);               // NOLINT
  Cell(bool v);                        // NOLINT
  Cell(std::string v);                 // NOLINT
  Cell(const char* v) : Cell(std::string(v)) {}  // NOLINT
  Cell(std::optional<double> v);       // NOLINT

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& text() const noexcept { return text_; }
  [[nodiscard]] double number() const noexcept { return number_; }

 private:
  Kind kind_ = Kind::empty;
  std::string text_;
  double number_ = 0.0;
};

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// Throws std::logic_error when the row width does not match the header.
  void add_row(std::vector<Cell> row);

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Header plus one line per row; fields quoted as RFC 4180 requires.
void write_csv(const Table& table, std::ostream& out);
/// One JSON object per row, newline-delimited. Non-finite numbers become null.
void write_ndjson(const Table& table, std::ostream& out);
void write_table(const Table& table, Format format, std::ostream& out);

std::string csv_field(std::string_view text);

}  // namespace selfnorm::cli
