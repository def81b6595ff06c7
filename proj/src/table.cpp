#include "swapsort/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace swapsort {

using ordered_json = nlohmann::ordered_json;

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column named " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
  const auto& cell = at(row, name);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  return std::numeric_limits<double>::quiet_NaN();
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw std::invalid_argument("format must be csv or json, got " + name);
}

std::string format_extension(Format format) { return format == Format::kCsv ? "csv" : "json"; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

double round_to_output(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_double(value).c_str(), nullptr);
}

Table rounded(Table table) {
  for (auto& row : table.rows)
    for (auto& cell : row)
      if (auto* d = std::get_if<double>(&cell)) *d = round_to_output(*d);
  return table;
}

namespace {

Cell parse_csv_cell(const std::string& text, bool quoted);

std::string quote(const std::string& v) {
  std::string quoted = "\"";
  for (char c : v) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string csv_text(const std::string& v) {
  const bool plain = !v.empty() && v.find_first_of(",\"\n\r") == std::string::npos &&
                     std::holds_alternative<std::string>(parse_csv_cell(v, false));
  return plain ? v : quote(v);
}

std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return csv_text(v); }
  };
  return std::visit(Visitor{}, cell);
}

std::vector<std::pair<std::string, bool>> split_csv_line(std::istream& in, bool& ok) {
  std::vector<std::pair<std::string, bool>> fields;  // (text, was quoted)
  std::string field;
  bool quoted = false, in_quotes = false, any = false;
  char c;
  ok = false;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      in_quotes = quoted = true;
    } else if (c == ',') {
      fields.emplace_back(std::move(field), quoted);
      field.clear();
      quoted = false;
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return fields;
  if (in_quotes) throw std::runtime_error("CSV input ends inside a quoted field");
  fields.emplace_back(std::move(field), quoted);
  ok = true;
  return fields;
}

Cell parse_csv_cell(const std::string& text, bool quoted) {
  if (quoted) return text;
  if (text.empty()) return std::monostate{};
  char* end = nullptr;
  if (text.find_first_of(".eEn") == std::string::npos || text == "nan") {
    if (text != "nan") {
      const long long v = std::strtoll(text.c_str(), &end, 10);
      if (end && *end == '\0') return static_cast<std::int64_t>(v);
    }
  }
  const double d = std::strtod(text.c_str(), &end);
  if (end && *end == '\0') return d;
  return text;
}

ordered_json cell_to_json(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return round_to_output(v);
    }
    ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

Cell json_to_cell(const ordered_json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return s;
  }
  throw std::invalid_argument("unsupported JSON cell: " + j.dump());
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_text(table.columns[i]);
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

Table read_csv(std::istream& in) {
  Table table;
  bool ok = false;
  for (auto& [name, quoted] : split_csv_line(in, ok)) table.columns.push_back(name);
  if (!ok) throw std::runtime_error("CSV input has no header");
  while (true) {
    auto fields = split_csv_line(in, ok);
    if (!ok) break;
    if (fields.size() != table.columns.size()) throw std::runtime_error("CSV row width does not match the header");
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (auto& [text, quoted] : fields) row.push_back(parse_csv_cell(text, quoted));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(std::ostream& out, const Table& table) {
  ordered_json doc;
  doc["columns"] = table.columns;
  doc["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_to_json(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

Table read_json(std::istream& in) {
  const auto doc = ordered_json::parse(in);
  Table table;
  table.columns = doc.at("columns").get<std::vector<std::string>>();
  for (const auto& obj : doc.at("rows")) {
    std::vector<Cell> row;
    row.reserve(table.columns.size());
    for (const auto& name : table.columns) row.push_back(json_to_cell(obj.at(name)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::kCsv) write_csv(out, table);
  else write_json(out, table);
}

Table read_table(std::istream& in, Format format) {
  return format == Format::kCsv ? read_csv(in) : read_json(in);
}

}  // namespace swapsort
