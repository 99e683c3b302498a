#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ecodeps/ingest.hpp"
#include "ecodeps/snapshot.hpp"

namespace ecodeps {

enum class IndexKind { changeability, reusability, p_impact };

std::string to_string(IndexKind kind);
/// Accepts changeability, reusability, p_impact (also "impact"/"p-impact").
/// Throws std::invalid_argument otherwise.
IndexKind parse_index_kind(std::string_view name);

struct IndexReport {
  std::string ecosystem;
  Timestamp at{};
  IndexKind index = IndexKind::changeability;
  std::uint64_t value = 0;
  /// Window length in days (changeability) or percentage P (p_impact).
  std::optional<double> parameter;
};

/// Largest n such that at least n entries are >= n.
std::uint64_t h_index(std::span<const std::uint64_t> counts);

/// h-index of per-package update counts in the window (t - window_days, t].
/// First releases are not updates. Throws std::invalid_argument for
/// window_days < 1 or t after the cutoff.
IndexReport changeability_index(const Dataset& d, Timestamp t, int window_days = 30);
IndexReport changeability_index(const Timeline& timeline, Timestamp t, int window_days = 30);

enum class ReuseCount {
  direct,      // in-degree
  transitive,  // transitive dependents
};

/// h-index over the dependent counts of required packages.
IndexReport reusability_index(const SnapshotGraph& g, ReuseCount count = ReuseCount::direct,
                              unsigned jobs = 1);

/// Number of packages whose transitive dependents reach p_percent % of all
/// packages in the snapshot (real-valued threshold). p_percent in (0, 100].
IndexReport p_impact_index(const SnapshotGraph& g, double p_percent, unsigned jobs = 1);
/// Same, from precomputed transitive dependent counts.
std::uint64_t p_impact_value(std::span<const std::uint32_t> dependent_counts, std::size_t nodes,
                             double p_percent);

}  // namespace ecodeps
