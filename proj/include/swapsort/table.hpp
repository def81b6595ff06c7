#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace swapsort {

/// Empty cells are monostate; CSV writes them as empty fields, JSON as null.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// A tidy table of named columns. Doubles are serialized with 12 significant digits
/// and always carry a decimal point or exponent, so integer and real cells survive
/// a round trip with their types intact. JSON writes non-finite doubles as the strings
/// "nan", "inf" and "-inf", so string cells with exactly those values read back as doubles.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
  double number(std::size_t row, const std::string& name) const;

  friend bool operator==(const Table&, const Table&) = default;
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& name);
std::string format_extension(Format format);

/// Rounds a double to the 12 significant digits used on output.
double round_to_output(double value);
/// The same table with every double rounded as it would be written.
Table rounded(Table table);

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);
void write_json(std::ostream& out, const Table& table);
Table read_json(std::istream& in);

void write_table(std::ostream& out, const Table& table, Format format);
Table read_table(std::istream& in, Format format);

std::string format_double(double value);

}  // namespace swapsort
