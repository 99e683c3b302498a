#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecodeps/ingest.hpp"
#include "ecodeps/time.hpp"

namespace ecodeps {

using PackageId = std::uint32_t;
using ReleaseId = std::uint32_t;
using NodeId = std::uint32_t;

/// Compiled, read-only view of a Dataset: packages interned in name order,
/// releases grouped per package in chronological order, and per-release
/// resolved dependency targets. Built once and shared by every snapshot.
class Timeline {
 public:
  explicit Timeline(const Dataset& d);

  const std::string& ecosystem() const { return ecosystem_; }
  Timestamp cutoff() const { return cutoff_; }

  std::size_t package_count() const { return names_->size(); }
  std::size_t release_count() const { return releases_.size(); }
  const std::string& package_name(PackageId p) const { return (*names_)[p]; }
  std::optional<PackageId> find_package(std::string_view name) const;
  const std::shared_ptr<const std::vector<std::string>>& names() const { return names_; }

  /// Releases of `p`, ordered by timestamp then version order.
  std::span<const ReleaseId> releases_of(PackageId p) const {
    return {by_package_.data() + package_offsets_[p], by_package_.data() + package_offsets_[p + 1]};
  }
  const ReleaseRecord& release(ReleaseId r) const { return releases_[r]; }
  PackageId release_package(ReleaseId r) const { return release_package_[r]; }
  /// Position of the release within its package's history; 0 is the first release.
  std::uint32_t release_rank(ReleaseId r) const { return release_rank_[r]; }
  bool is_update(ReleaseId r) const { return release_rank_[r] > 0; }

  /// Distinct declared targets with a known package, excluding the source itself.
  std::span<const PackageId> targets(ReleaseId r) const {
    return {targets_.data() + target_offsets_[r], targets_.data() + target_offsets_[r + 1]};
  }
  /// Distinct declared targets that name no known package.
  std::uint32_t unresolved_targets(ReleaseId r) const { return unresolved_[r]; }

  /// Latest release of `p` with timestamp <= t, if any.
  std::optional<ReleaseId> latest_at(PackageId p, Timestamp t) const;

  /// All releases ordered by (timestamp, package id, version order).
  const std::vector<ReleaseId>& chronological() const { return chronological_; }

 private:
  std::string ecosystem_;
  Timestamp cutoff_{};
  std::shared_ptr<const std::vector<std::string>> names_;
  std::vector<ReleaseRecord> releases_;
  std::vector<PackageId> release_package_;
  std::vector<std::uint32_t> release_rank_;
  std::vector<std::size_t> package_offsets_;
  std::vector<ReleaseId> by_package_;
  std::vector<std::size_t> target_offsets_;
  std::vector<PackageId> targets_;
  std::vector<std::uint32_t> unresolved_;
  std::vector<ReleaseId> chronological_;
};

/// Package-level dependency network at one instant. Nodes are numbered
/// 0..n-1 in package-name order; adjacency is stored in CSR form in both
/// directions. Immutable after construction.
class SnapshotGraph {
 public:
  SnapshotGraph() = default;

  /// Builds an ad-hoc graph from names and edges (no release information).
  /// Self-loops and duplicate edges are dropped; every endpoint must be listed
  /// in `nodes`.
  static SnapshotGraph from_edges(std::vector<std::string> nodes,
                                  const std::vector<std::pair<std::string, std::string>>& edges,
                                  Timestamp at = {});

  Timestamp at() const { return at_; }
  /// Ecosystem of the source dataset; empty for ad-hoc graphs.
  const std::string& ecosystem() const { return ecosystem_; }
  std::size_t node_count() const { return node_package_.size(); }
  std::size_t edge_count() const { return out_targets_.size(); }

  const std::string& name(NodeId v) const { return (*names_)[node_package_[v]]; }
  std::optional<NodeId> find(std::string_view name) const;
  /// Throws std::out_of_range for names that are not nodes.
  NodeId node(std::string_view name) const;

  std::span<const NodeId> out(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> in(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

  /// Release chosen for the node; nullptr for graphs built with from_edges.
  const ReleaseRecord* latest_release(NodeId v) const;

  /// Dependency targets of the chosen releases that are not nodes at `at`.
  std::size_t dropped_dependencies() const { return dropped_; }

  std::vector<std::string> node_names() const;
  std::vector<std::pair<std::string, std::string>> edge_list() const;

 private:
  friend SnapshotGraph build_snapshot(std::shared_ptr<const Timeline>, Timestamp);

  void finish_csr(std::vector<std::pair<NodeId, NodeId>>& edges);

  Timestamp at_{};
  std::string ecosystem_;
  std::shared_ptr<const std::vector<std::string>> names_;
  std::shared_ptr<const Timeline> timeline_;
  std::vector<PackageId> node_package_;
  std::vector<ReleaseId> latest_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<NodeId> in_sources_;
  std::size_t dropped_ = 0;
};

/// Where a monthly snapshot is taken.
enum class MonthAnchor {
  start,  // first instant of the month
  end,    // last second of the month (clamped to the cutoff)
};

Timestamp anchor_instant(Month m, MonthAnchor anchor, Timestamp cutoff);

struct SnapshotSeries {
  std::vector<Month> months;
  std::vector<SnapshotGraph> snapshots;
};

/// package -> latest release at t. Throws std::invalid_argument when t > cutoff.
std::map<std::string, ReleaseRecord> latest_releases_at(const Dataset& d, Timestamp t);

SnapshotGraph build_snapshot(const Dataset& d, Timestamp t);
SnapshotGraph build_snapshot(std::shared_ptr<const Timeline> timeline, Timestamp t);

struct SeriesOptions {
  MonthAnchor anchor = MonthAnchor::start;
  unsigned jobs = 1;
};

/// One snapshot per month in [from, to]. Throws std::invalid_argument for an
/// inverted range or a range past the cutoff month.
SnapshotSeries monthly_snapshots(const Dataset& d, Month from, Month to,
                                 const SeriesOptions& options = {});
SnapshotSeries monthly_snapshots(std::shared_ptr<const Timeline> timeline, Month from, Month to,
                                 const SeriesOptions& options = {});

/// Checks from <= to <= month(cutoff) and returns the months.
std::vector<Month> checked_months(Month from, Month to, Timestamp cutoff);

}  // namespace ecodeps
