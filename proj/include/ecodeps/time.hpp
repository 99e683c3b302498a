#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecodeps {

/// UTC instant with one-second resolution.
using Timestamp = std::chrono::sys_seconds;
/// Calendar month; snapshots are anchored on month boundaries.
using Month = std::chrono::year_month;

/// Parses ISO-8601 dates and date-times. Accepted forms:
///   YYYY-MM-DD
///   YYYY-MM-DD[T| ]HH:MM[:SS[.fraction]][Z| UTC|+HH:MM|-HH:MM|+HHMM]
/// Fractional seconds are truncated. Returns nullopt on malformed input.
std::optional<Timestamp> try_parse_timestamp(std::string_view text);

/// Same as try_parse_timestamp but throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);

/// `YYYY-MM-DD` or `YYYY-MM` (expanded to the first instant of the month).
Timestamp parse_date_arg(std::string_view text);

/// `YYYY-MM`; throws std::invalid_argument.
Month parse_month(std::string_view text);

std::string format_timestamp(Timestamp t);  // YYYY-MM-DDTHH:MM:SSZ
std::string format_date(Timestamp t);       // YYYY-MM-DD
std::string format_month(Month m);          // YYYY-MM

Month month_of(Timestamp t);
Timestamp month_start(Month m);

/// Inclusive list of consecutive months; throws std::invalid_argument when from > to.
std::vector<Month> month_range(Month from, Month to);

/// Elapsed time from `from` to `to` in (fractional) days.
inline double days_between(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count()) / 86400.0;
}

inline Timestamp days_before(Timestamp t, long days) {
  return t - std::chrono::days{days};
}

}  // namespace ecodeps
