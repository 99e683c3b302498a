#pragma once

#include <string_view>

namespace ecodeps {

/// Total order on opaque version strings. Dot-separated segments are compared
/// pairwise, numerically when both segments are all digits and byte-wise
/// otherwise; a version that is a strict segment prefix of another sorts first.
/// Versions that tie segment-wise (e.g. "1.0" vs "1.00") fall back to a plain
/// lexicographic comparison so the order stays total.
int compare_versions(std::string_view lhs, std::string_view rhs);

inline bool version_less(std::string_view lhs, std::string_view rhs) {
  return compare_versions(lhs, rhs) < 0;
}

}  // namespace ecodeps
