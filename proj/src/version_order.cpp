#include "ecodeps/version_order.hpp"

#include <algorithm>

namespace ecodeps {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int sign(int v) { return (v > 0) - (v < 0); }

int compare_numeric(std::string_view a, std::string_view b) {
  auto strip = [](std::string_view s) {
    auto first = s.find_first_not_of('0');
    return first == std::string_view::npos ? std::string_view{} : s.substr(first);
  };
  a = strip(a);
  b = strip(b);
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return sign(a.compare(b));
}

}  // namespace

int compare_versions(std::string_view lhs, std::string_view rhs) {
  std::string_view a = lhs, b = rhs;
  while (!a.empty() && !b.empty()) {
    auto ea = a.find('.'), eb = b.find('.');
    auto sa = a.substr(0, ea), sb = b.substr(0, eb);
    int c = (all_digits(sa) && all_digits(sb)) ? compare_numeric(sa, sb) : sign(sa.compare(sb));
    if (c != 0) return c;
    a = ea == std::string_view::npos ? std::string_view{} : a.substr(ea + 1);
    b = eb == std::string_view::npos ? std::string_view{} : b.substr(eb + 1);
    if (ea == std::string_view::npos || eb == std::string_view::npos) {
      if ((ea == std::string_view::npos) != (eb == std::string_view::npos)) {
        return ea == std::string_view::npos ? -1 : 1;
      }
      break;
    }
  }
  if (a.empty() != b.empty()) return a.empty() ? -1 : 1;
  return sign(lhs.compare(rhs));
}

}  // namespace ecodeps
