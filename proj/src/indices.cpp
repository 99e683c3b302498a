#include "ecodeps/indices.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ecodeps/graphops.hpp"

namespace ecodeps {

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::changeability:
      return "changeability";
    case IndexKind::reusability:
      return "reusability";
    case IndexKind::p_impact:
      return "p_impact";
  }
  return "unknown";
}

IndexKind parse_index_kind(std::string_view name) {
  if (name == "changeability") return IndexKind::changeability;
  if (name == "reusability") return IndexKind::reusability;
  if (name == "p_impact" || name == "impact" || name == "p-impact") return IndexKind::p_impact;
  throw std::invalid_argument("unknown index '" + std::string(name) + "'");
}

std::uint64_t h_index(std::span<const std::uint64_t> counts) {
  // counting sort: buckets[k] = entries equal to k, with everything >= n in buckets[n]
  const std::size_t n = counts.size();
  std::vector<std::uint64_t> buckets(n + 1, 0);
  for (auto c : counts) ++buckets[std::min<std::uint64_t>(c, n)];
  std::uint64_t at_least = 0;
  for (std::size_t k = n; k > 0; --k) {
    at_least += buckets[k];
    if (at_least >= k) return k;
  }
  return 0;
}

IndexReport changeability_index(const Timeline& timeline, Timestamp t, int window_days) {
  if (window_days < 1) throw std::invalid_argument("changeability: window must be >= 1 day");
  if (t > timeline.cutoff()) throw std::invalid_argument("changeability: instant after cutoff");
  const Timestamp window_start = days_before(t, window_days);
  std::vector<std::uint64_t> counts;
  for (PackageId p = 0; p < timeline.package_count(); ++p) {
    std::uint64_t updates = 0;
    for (auto r : timeline.releases_of(p)) {
      const auto ts = timeline.release(r).timestamp;
      if (timeline.is_update(r) && ts > window_start && ts <= t) ++updates;
    }
    if (updates > 0) counts.push_back(updates);
  }
  return {timeline.ecosystem(), t, IndexKind::changeability, h_index(counts),
          static_cast<double>(window_days)};
}

IndexReport changeability_index(const Dataset& d, Timestamp t, int window_days) {
  return changeability_index(Timeline(d), t, window_days);
}

IndexReport reusability_index(const SnapshotGraph& g, ReuseCount count, unsigned jobs) {
  std::vector<std::uint64_t> counts;
  if (count == ReuseCount::direct) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.in_degree(v) > 0) counts.push_back(g.in_degree(v));
    }
  } else {
    for (auto c : transitive_counts(g, Direction::dependents, jobs)) {
      if (c > 0) counts.push_back(c);
    }
  }
  return {g.ecosystem(), g.at(), IndexKind::reusability, h_index(counts), std::nullopt};
}

std::uint64_t p_impact_value(std::span<const std::uint32_t> dependent_counts, std::size_t nodes,
                             double p_percent) {
  if (!(p_percent > 0.0 && p_percent <= 100.0)) {
    throw std::invalid_argument("p_impact: P must be in (0, 100]");
  }
  const double threshold = p_percent / 100.0 * static_cast<double>(nodes);
  return static_cast<std::uint64_t>(std::count_if(
      dependent_counts.begin(), dependent_counts.end(),
      [threshold](std::uint32_t c) { return static_cast<double>(c) >= threshold; }));
}

IndexReport p_impact_index(const SnapshotGraph& g, double p_percent, unsigned jobs) {
  if (!(p_percent > 0.0 && p_percent <= 100.0)) {
    throw std::invalid_argument("p_impact: P must be in (0, 100]");
  }
  auto counts = transitive_counts(g, Direction::dependents, jobs);
  return {g.ecosystem(), g.at(), IndexKind::p_impact,
          p_impact_value(counts, g.node_count(), p_percent), p_percent};
}

}  // namespace ecodeps
