#include "ecodeps/snapshot.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "ecodeps/parallel.hpp"
#include "ecodeps/version_order.hpp"

namespace ecodeps {

namespace {

constexpr std::uint32_t kAbsent = UINT32_MAX;

struct PairHash {
  std::size_t operator()(const std::pair<std::string_view, std::string_view>& p) const noexcept {
    auto h = std::hash<std::string_view>{}(p.first);
    return h ^ (std::hash<std::string_view>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

}  // namespace

Timeline::Timeline(const Dataset& d) : ecosystem_(d.ecosystem), cutoff_(d.cutoff) {
  std::vector<std::string> names;
  names.reserve(d.packages.size());
  for (const auto& p : d.packages) names.push_back(p.name);
  for (const auto& r : d.releases) names.push_back(r.package);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));

  std::unordered_map<std::string_view, PackageId> package_id;
  package_id.reserve(names_->size());
  for (PackageId i = 0; i < names_->size(); ++i) package_id.emplace((*names_)[i], i);

  releases_ = d.releases;
  const auto release_total = releases_.size();
  release_package_.resize(release_total);
  std::unordered_map<std::pair<std::string_view, std::string_view>, ReleaseId, PairHash> release_id;
  release_id.reserve(release_total);
  for (ReleaseId r = 0; r < release_total; ++r) {
    release_package_[r] = package_id.at(releases_[r].package);
    release_id.emplace(std::pair<std::string_view, std::string_view>{releases_[r].package,
                                                                     releases_[r].version},
                       r);
  }

  auto chrono_less = [this](ReleaseId a, ReleaseId b) {
    const auto& ra = releases_[a];
    const auto& rb = releases_[b];
    if (ra.timestamp != rb.timestamp) return ra.timestamp < rb.timestamp;
    return compare_versions(ra.version, rb.version) < 0;
  };

  package_offsets_.assign(names_->size() + 1, 0);
  for (auto p : release_package_) ++package_offsets_[p + 1];
  std::partial_sum(package_offsets_.begin(), package_offsets_.end(), package_offsets_.begin());
  by_package_.resize(release_total);
  {
    auto cursor = package_offsets_;
    for (ReleaseId r = 0; r < release_total; ++r) by_package_[cursor[release_package_[r]]++] = r;
  }
  release_rank_.resize(release_total);
  for (PackageId p = 0; p < names_->size(); ++p) {
    auto first = by_package_.begin() + static_cast<std::ptrdiff_t>(package_offsets_[p]);
    auto last = by_package_.begin() + static_cast<std::ptrdiff_t>(package_offsets_[p + 1]);
    std::sort(first, last, chrono_less);
    std::uint32_t rank = 0;
    for (auto it = first; it != last; ++it) release_rank_[*it] = rank++;
  }

  std::vector<std::pair<ReleaseId, PackageId>> resolved;
  std::vector<std::pair<ReleaseId, std::string_view>> unresolved;
  resolved.reserve(d.dependencies.size());
  for (const auto& dep : d.dependencies) {
    auto rit = release_id.find({dep.source_package, dep.source_version});
    if (rit == release_id.end()) continue;  // orphan rows are reported by validate_dataset
    auto tit = package_id.find(dep.target_package);
    if (tit == package_id.end()) {
      unresolved.emplace_back(rit->second, dep.target_package);
      continue;
    }
    if (tit->second == release_package_[rit->second]) continue;  // self-reference
    resolved.emplace_back(rit->second, tit->second);
  }
  std::sort(resolved.begin(), resolved.end());
  resolved.erase(std::unique(resolved.begin(), resolved.end()), resolved.end());
  target_offsets_.assign(release_total + 1, 0);
  targets_.reserve(resolved.size());
  for (const auto& [r, t] : resolved) {
    ++target_offsets_[r + 1];
    targets_.push_back(t);
  }
  std::partial_sum(target_offsets_.begin(), target_offsets_.end(), target_offsets_.begin());

  std::sort(unresolved.begin(), unresolved.end());
  unresolved.erase(std::unique(unresolved.begin(), unresolved.end()), unresolved.end());
  unresolved_.assign(release_total, 0);
  for (const auto& u : unresolved) ++unresolved_[u.first];

  chronological_.resize(release_total);
  std::iota(chronological_.begin(), chronological_.end(), ReleaseId{0});
  std::sort(chronological_.begin(), chronological_.end(), [this](ReleaseId a, ReleaseId b) {
    const auto& ra = releases_[a];
    const auto& rb = releases_[b];
    if (ra.timestamp != rb.timestamp) return ra.timestamp < rb.timestamp;
    if (release_package_[a] != release_package_[b]) return release_package_[a] < release_package_[b];
    return release_rank_[a] < release_rank_[b];
  });
}

std::optional<PackageId> Timeline::find_package(std::string_view name) const {
  auto it = std::lower_bound(names_->begin(), names_->end(), name);
  if (it == names_->end() || *it != name) return std::nullopt;
  return static_cast<PackageId>(it - names_->begin());
}

std::optional<ReleaseId> Timeline::latest_at(PackageId p, Timestamp t) const {
  auto list = releases_of(p);
  auto it = std::upper_bound(list.begin(), list.end(), t,
                             [this](Timestamp value, ReleaseId r) { return value < releases_[r].timestamp; });
  if (it == list.begin()) return std::nullopt;
  return *(it - 1);
}

void SnapshotGraph::finish_csr(std::vector<std::pair<NodeId, NodeId>>& edges) {
  const auto n = node_package_.size();
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  out_targets_.resize(edges.size());
  in_sources_.resize(edges.size());
  for (const auto& [s, t] : edges) {
    ++out_offsets_[s + 1];
    ++in_offsets_[t + 1];
  }
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  std::partial_sum(in_offsets_.begin(), in_offsets_.end(), in_offsets_.begin());
  auto in_cursor = in_offsets_;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out_targets_[i] = edges[i].second;
    in_sources_[in_cursor[edges[i].second]++] = edges[i].first;
  }
}

SnapshotGraph SnapshotGraph::from_edges(std::vector<std::string> nodes,
                                        const std::vector<std::pair<std::string, std::string>>& edges,
                                        Timestamp at) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  SnapshotGraph g;
  g.at_ = at;
  g.node_package_.resize(nodes.size());
  std::iota(g.node_package_.begin(), g.node_package_.end(), PackageId{0});
  g.names_ = std::make_shared<const std::vector<std::string>>(std::move(nodes));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges.size());
  for (const auto& [s, t] : edges) {
    auto a = g.find(s);
    auto b = g.find(t);
    if (!a || !b) throw std::invalid_argument("edge " + s + " -> " + t + " names an unlisted node");
    if (*a != *b) pairs.emplace_back(*a, *b);
  }
  g.finish_csr(pairs);
  return g;
}

std::optional<NodeId> SnapshotGraph::find(std::string_view name) const {
  auto it = std::lower_bound(node_package_.begin(), node_package_.end(), name,
                             [this](PackageId p, std::string_view value) { return (*names_)[p] < value; });
  if (it == node_package_.end() || (*names_)[*it] != name) return std::nullopt;
  return static_cast<NodeId>(it - node_package_.begin());
}

NodeId SnapshotGraph::node(std::string_view name) const {
  auto v = find(name);
  if (!v) throw std::out_of_range("package '" + std::string(name) + "' is not in the snapshot");
  return *v;
}

const ReleaseRecord* SnapshotGraph::latest_release(NodeId v) const {
  if (!timeline_) return nullptr;
  return &timeline_->release(latest_[v]);
}

std::vector<std::string> SnapshotGraph::node_names() const {
  std::vector<std::string> out;
  out.reserve(node_count());
  for (NodeId v = 0; v < node_count(); ++v) out.push_back(name(v));
  return out;
}

std::vector<std::pair<std::string, std::string>> SnapshotGraph::edge_list() const {
  std::vector<std::pair<std::string, std::string>> result;
  result.reserve(edge_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    for (auto w : out(v)) result.emplace_back(name(v), name(w));
  }
  return result;
}

SnapshotGraph build_snapshot(std::shared_ptr<const Timeline> timeline, Timestamp t) {
  if (t > timeline->cutoff()) {
    throw std::invalid_argument("snapshot instant " + format_timestamp(t) + " is after the cutoff " +
                                format_timestamp(timeline->cutoff()));
  }
  SnapshotGraph g;
  g.at_ = t;
  g.ecosystem_ = timeline->ecosystem();
  g.names_ = timeline->names();
  const auto package_total = timeline->package_count();
  std::vector<NodeId> local(package_total, kAbsent);
  for (PackageId p = 0; p < package_total; ++p) {
    if (auto r = timeline->latest_at(p, t)) {
      local[p] = static_cast<NodeId>(g.node_package_.size());
      g.node_package_.push_back(p);
      g.latest_.push_back(*r);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < g.node_package_.size(); ++v) {
    ReleaseId r = g.latest_[v];
    g.dropped_ += timeline->unresolved_targets(r);
    for (auto target : timeline->targets(r)) {
      if (local[target] == kAbsent) {
        ++g.dropped_;
      } else {
        edges.emplace_back(v, local[target]);
      }
    }
  }
  g.finish_csr(edges);
  g.timeline_ = std::move(timeline);
  return g;
}

SnapshotGraph build_snapshot(const Dataset& d, Timestamp t) {
  return build_snapshot(std::make_shared<const Timeline>(d), t);
}

std::map<std::string, ReleaseRecord> latest_releases_at(const Dataset& d, Timestamp t) {
  if (t > d.cutoff) {
    throw std::invalid_argument("instant " + format_timestamp(t) + " is after the cutoff");
  }
  Timeline timeline(d);
  std::map<std::string, ReleaseRecord> out;
  for (PackageId p = 0; p < timeline.package_count(); ++p) {
    if (auto r = timeline.latest_at(p, t)) out.emplace(timeline.package_name(p), timeline.release(*r));
  }
  return out;
}

Timestamp anchor_instant(Month m, MonthAnchor anchor, Timestamp cutoff) {
  if (anchor == MonthAnchor::start) return month_start(m);
  auto end = month_start(m + std::chrono::months{1}) - std::chrono::seconds{1};
  return std::min(end, cutoff);
}

std::vector<Month> checked_months(Month from, Month to, Timestamp cutoff) {
  auto months = month_range(from, to);
  if (to > month_of(cutoff)) {
    throw std::invalid_argument("month " + format_month(to) + " is after the cutoff month " +
                                format_month(month_of(cutoff)));
  }
  return months;
}

SnapshotSeries monthly_snapshots(std::shared_ptr<const Timeline> timeline, Month from, Month to,
                                 const SeriesOptions& options) {
  SnapshotSeries series;
  series.months = checked_months(from, to, timeline->cutoff());
  series.snapshots.resize(series.months.size());
  parallel_for(series.months.size(), options.jobs, [&](std::size_t i) {
    series.snapshots[i] =
        build_snapshot(timeline, anchor_instant(series.months[i], options.anchor, timeline->cutoff()));
  });
  return series;
}

SnapshotSeries monthly_snapshots(const Dataset& d, Month from, Month to, const SeriesOptions& options) {
  return monthly_snapshots(std::make_shared<const Timeline>(d), from, to, options);
}

}  // namespace ecodeps
