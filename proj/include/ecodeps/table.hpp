#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace ecodeps {

/// Output cell; doubles are written in shortest round-trip form.
using Cell = std::variant<std::monostate, std::string, std::int64_t, std::uint64_t, double, bool>;

/// Column-oriented result table rendered as CSV (header + rows) or JSON
/// (array of objects keyed by column).
struct Table {
  std::string metric;  // used for <metric>__<ecosystem> file names
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class OutputFormat { csv, json };

std::string format_double(double v);
void write_csv(std::ostream& out, const Table& table);
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

}  // namespace ecodeps
