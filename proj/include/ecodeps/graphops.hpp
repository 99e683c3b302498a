#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ecodeps/snapshot.hpp"

namespace ecodeps {

enum class Direction {
  dependencies,  // follow edges forward
  dependents,    // follow edges backward
};

struct RoleFlags {
  bool dependent = false;  // has an outgoing edge
  bool required = false;   // has an incoming edge
  bool connected = false;  // dependent or required
  bool top_level = false;  // dependent and not required

  friend bool operator==(const RoleFlags&, const RoleFlags&) = default;
};

struct RoleSummary {
  std::vector<RoleFlags> flags;  // indexed by NodeId
  std::size_t nodes = 0;
  std::size_t dependent = 0;
  std::size_t required = 0;
  std::size_t connected = 0;
  std::size_t top_level = 0;

  double fraction(std::size_t count) const {
    return nodes == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(nodes);
  }
};

struct ComponentPartition {
  /// Members of each component, sorted; components ordered by smallest member.
  std::vector<std::vector<NodeId>> components;
  std::vector<std::uint32_t> component_of;  // indexed by NodeId
  std::size_t connected_packages = 0;
  std::size_t largest_connected_component = 0;  // 0 when nothing is connected

  /// Largest multi-node component relative to all connected packages.
  double largest_connected_fraction() const {
    return connected_packages == 0 ? 0.0
                                   : static_cast<double>(largest_connected_component) /
                                         static_cast<double>(connected_packages);
  }
};

// Node-level queries. Results are sorted by NodeId (equivalently by name).
std::vector<NodeId> direct_dependencies(const SnapshotGraph& g, NodeId p);
/// Every node reachable through one or more edges in `dir`; never contains p.
std::vector<NodeId> reachable(const SnapshotGraph& g, NodeId p, Direction dir);
/// Maximum BFS level over nodes reachable from p; 0 when p has no dependencies.
std::size_t dependency_depth(const SnapshotGraph& g, NodeId p);

// Name-level wrappers; unknown names throw std::out_of_range.
std::vector<std::string> direct_dependencies(const SnapshotGraph& g, std::string_view p);
std::vector<std::string> transitive_dependencies(const SnapshotGraph& g, std::string_view p);
std::vector<std::string> transitive_dependents(const SnapshotGraph& g, std::string_view p);
std::size_t dependency_depth(const SnapshotGraph& g, std::string_view p);

std::vector<std::string> top_level_packages(const SnapshotGraph& g);
std::vector<std::string> connected_packages(const SnapshotGraph& g);
RoleSummary classify(const SnapshotGraph& g);
ComponentPartition weakly_connected_components(const SnapshotGraph& g);

std::vector<std::string> names_of(const SnapshotGraph& g, const std::vector<NodeId>& nodes);

/// Size of the transitive dependency (or dependent) set of every node, for
/// all nodes at once. Cycles are collapsed into strongly connected components
/// internally; a node on a cycle never counts itself. `jobs` bounds the worker
/// threads; the result does not depend on it.
std::vector<std::uint32_t> transitive_counts(const SnapshotGraph& g, Direction dir,
                                             unsigned jobs = 1);

/// dependency_depth for each listed node, evaluated concurrently.
std::vector<std::size_t> dependency_depths(const SnapshotGraph& g, const std::vector<NodeId>& nodes,
                                           unsigned jobs = 1);

}  // namespace ecodeps
