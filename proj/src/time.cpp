#include "ecodeps/time.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace ecodeps {

namespace {

using namespace std::chrono;

// Reads exactly `width` digits starting at `pos`.
bool read_digits(std::string_view s, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > s.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  std::from_chars(s.data() + pos, s.data() + pos + width, out);
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<sys_days> parse_ymd(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, m) || !read_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

}  // namespace

std::optional<Timestamp> try_parse_timestamp(std::string_view text) {
  auto s = trim(text);
  auto date = parse_ymd(s);
  if (!date) return std::nullopt;
  if (s.size() == 10) return Timestamp{*date};

  std::size_t pos = 10;
  if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
  ++pos;
  int hh = 0, mm = 0, ss = 0;
  if (!read_digits(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !read_digits(s, pos + 3, 2, mm)) {
    return std::nullopt;
  }
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!read_digits(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      std::size_t digits = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos, ++digits;
      if (digits == 0) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

  seconds offset{0};
  auto zone = trim(s.substr(pos));
  if (zone.empty() || zone == "Z" || zone == "UTC" || zone == "+00:00") {
    // UTC
  } else if (zone[0] == '+' || zone[0] == '-') {
    int oh = 0, om = 0;
    if (!read_digits(zone, 1, 2, oh)) return std::nullopt;
    if (zone.size() == 6 && zone[3] == ':') {
      if (!read_digits(zone, 4, 2, om)) return std::nullopt;
    } else if (zone.size() == 5) {
      if (!read_digits(zone, 3, 2, om)) return std::nullopt;
    } else if (zone.size() != 3) {
      return std::nullopt;
    }
    offset = hours{oh} + minutes{om};
    if (zone[0] == '-') offset = -offset;
  } else {
    return std::nullopt;
  }
  return Timestamp{*date} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

Timestamp parse_timestamp(std::string_view text) {
  auto t = try_parse_timestamp(text);
  if (!t) throw std::invalid_argument("invalid timestamp '" + std::string(text) + "'");
  return *t;
}

Month parse_month(std::string_view text) {
  auto s = trim(text);
  int y = 0, m = 0;
  if (s.size() != 7 || s[4] != '-' || !read_digits(s, 0, 4, y) || !read_digits(s, 5, 2, m) ||
      m < 1 || m > 12) {
    throw std::invalid_argument("invalid month '" + std::string(text) + "' (expected YYYY-MM)");
  }
  return year{y} / month{static_cast<unsigned>(m)};
}

Timestamp parse_date_arg(std::string_view text) {
  auto s = trim(text);
  if (s.size() == 7) return month_start(parse_month(s));
  return parse_timestamp(s);
}

std::string format_timestamp(Timestamp t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_date(Timestamp t) {
  year_month_day ymd{floor<days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_month(Month m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(m.year()),
                static_cast<unsigned>(m.month()));
  return buf;
}

Month month_of(Timestamp t) {
  year_month_day ymd{floor<days>(t)};
  return ymd.year() / ymd.month();
}

Timestamp month_start(Month m) { return Timestamp{sys_days{m / 1}}; }

std::vector<Month> month_range(Month from, Month to) {
  if (from > to) {
    throw std::invalid_argument("month range " + format_month(from) + ".." + format_month(to) +
                                " is inverted");
  }
  std::vector<Month> out;
  for (auto m = from; m <= to; m += months{1}) out.push_back(m);
  return out;
}

}  // namespace ecodeps
