#pragma once

// Minimal RFC 4180 reader/writer: quoted fields, doubled quotes, embedded
// separators and newlines. Line numbers count physical lines (1-based).

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ecodeps::csv {

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  /// Throws std::runtime_error on an unterminated quoted field.
  bool next(std::vector<std::string>& fields);

  /// Physical line on which the most recently returned record started.
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

void write_field(std::ostream& out, std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string_view>& fields);

}  // namespace ecodeps::csv
