#include "ecodeps/graphops.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>

#include "ecodeps/parallel.hpp"

namespace ecodeps {

namespace {

std::span<const NodeId> neighbors(const SnapshotGraph& g, NodeId v, Direction dir) {
  return dir == Direction::dependencies ? g.out(v) : g.in(v);
}

// Strongly connected components (iterative Tarjan). Components are numbered in
// the order Tarjan completes them, so every edge between two different
// components goes from a higher number to a lower one.
struct Condensation {
  std::vector<std::uint32_t> component_of;
  std::vector<std::uint32_t> size;
};

Condensation strongly_connected(const SnapshotGraph& g) {
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  const auto n = static_cast<std::uint32_t>(g.node_count());
  Condensation c;
  c.component_of.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<NodeId> stack;
  std::vector<bool> on_stack(n, false);
  std::vector<std::pair<NodeId, std::size_t>> frames;  // node, next edge offset
  std::uint32_t counter = 0;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      auto edges = g.out(v);
      if (next < edges.size()) {
        NodeId w = edges[next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      NodeId done = v;
      frames.pop_back();
      if (!frames.empty()) {
        NodeId parent = frames.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        auto id = static_cast<std::uint32_t>(c.size.size());
        std::uint32_t members = 0;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.component_of[w] = id;
          ++members;
        } while (w != done);
        c.size.push_back(members);
      }
    }
  }
  return c;
}

// For a DAG whose edges all go from a higher vertex number to a lower one,
// computes for every vertex v the total weight of the other vertices that
// reach v. Targets are processed in blocks of kBlockBits; each block needs a
// single ascending sweep because reach sets only flow upward.
constexpr std::size_t kWords = 8;
constexpr std::size_t kBlockBits = kWords * 64;
using Bits = std::array<std::uint64_t, kWords>;

std::vector<std::uint64_t> ancestor_weights(const std::vector<std::size_t>& offsets,
                                            const std::vector<std::uint32_t>& adjacency,
                                            const std::vector<std::uint32_t>& weight,
                                            unsigned jobs) {
  const std::size_t k = weight.size();
  std::vector<std::uint64_t> result(k, 0);
  const std::size_t blocks = (k + kBlockBits - 1) / kBlockBits;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), blocks));
  std::vector<std::vector<Bits>> buffers(workers);
  std::atomic<std::size_t> next_block{0};

  parallel_for(workers, workers, [&](std::size_t worker) {
    auto& reach = buffers[worker];
    reach.resize(k);
    for (;;) {
      std::size_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      const std::size_t lo = b * kBlockBits;
      const std::size_t hi = std::min(k, lo + kBlockBits);
      for (std::size_t u = lo; u < k; ++u) {
        Bits acc{};
        bool any = false;
        // adjacency is sorted descending, so stop at the first target below lo
        for (std::size_t e = offsets[u]; e < offsets[u + 1]; ++e) {
          const std::uint32_t v = adjacency[e];
          if (v < lo) break;
          const Bits& rv = reach[v];
          for (std::size_t w = 0; w < kWords; ++w) acc[w] |= rv[w];
          if (v < hi) acc[(v - lo) >> 6] |= std::uint64_t{1} << ((v - lo) & 63);
          any = true;
        }
        reach[u] = acc;
        if (!any) continue;
        const std::uint64_t wu = weight[u];
        for (std::size_t w = 0; w < kWords; ++w) {
          std::uint64_t bits = acc[w];
          while (bits) {
            const auto j = static_cast<std::size_t>(std::countr_zero(bits));
            result[lo + w * 64 + j] += wu;
            bits &= bits - 1;
          }
        }
      }
    }
  });
  return result;
}

}  // namespace

std::vector<NodeId> direct_dependencies(const SnapshotGraph& g, NodeId p) {
  auto out = g.out(p);
  return {out.begin(), out.end()};
}

std::vector<NodeId> reachable(const SnapshotGraph& g, NodeId p, Direction dir) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> frontier{p}, result;
  seen[p] = true;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    for (auto w : neighbors(g, frontier[i], dir)) {
      if (!seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
        result.push_back(w);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

std::size_t bfs_depth(const SnapshotGraph& g, NodeId p, std::vector<std::uint32_t>& stamp,
                      std::uint32_t mark, std::vector<NodeId>& queue) {
  queue.clear();
  queue.push_back(p);
  stamp[p] = mark;
  std::size_t depth = 0, level_end = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (i == level_end) {
      ++depth;
      level_end = queue.size();
    }
    for (auto w : g.out(queue[i])) {
      if (stamp[w] != mark) {
        stamp[w] = mark;
        queue.push_back(w);
      }
    }
  }
  // the last level processed holds the deepest nodes; queue.size() > 1 means
  // at least one dependency exists
  return queue.size() > 1 ? depth : 0;
}

}  // namespace

std::size_t dependency_depth(const SnapshotGraph& g, NodeId p) {
  std::vector<std::uint32_t> stamp(g.node_count(), 0);
  std::vector<NodeId> queue;
  return bfs_depth(g, p, stamp, 1, queue);
}

std::vector<std::size_t> dependency_depths(const SnapshotGraph& g, const std::vector<NodeId>& nodes,
                                           unsigned jobs) {
  std::vector<std::size_t> depths(nodes.size(), 0);
  const std::size_t chunk = 256;
  const std::size_t chunks = (nodes.size() + chunk - 1) / chunk;
  parallel_for(chunks, jobs, [&](std::size_t c) {
    std::vector<std::uint32_t> stamp(g.node_count(), 0);
    std::vector<NodeId> queue;
    std::uint32_t mark = 0;
    for (std::size_t i = c * chunk; i < std::min(nodes.size(), (c + 1) * chunk); ++i) {
      depths[i] = bfs_depth(g, nodes[i], stamp, ++mark, queue);
    }
  });
  return depths;
}

std::vector<std::string> names_of(const SnapshotGraph& g, const std::vector<NodeId>& nodes) {
  std::vector<std::string> out;
  out.reserve(nodes.size());
  for (auto v : nodes) out.push_back(g.name(v));
  return out;
}

std::vector<std::string> direct_dependencies(const SnapshotGraph& g, std::string_view p) {
  return names_of(g, direct_dependencies(g, g.node(p)));
}

std::vector<std::string> transitive_dependencies(const SnapshotGraph& g, std::string_view p) {
  return names_of(g, reachable(g, g.node(p), Direction::dependencies));
}

std::vector<std::string> transitive_dependents(const SnapshotGraph& g, std::string_view p) {
  return names_of(g, reachable(g, g.node(p), Direction::dependents));
}

std::size_t dependency_depth(const SnapshotGraph& g, std::string_view p) {
  return dependency_depth(g, g.node(p));
}

RoleSummary classify(const SnapshotGraph& g) {
  RoleSummary s;
  s.nodes = g.node_count();
  s.flags.resize(s.nodes);
  for (NodeId v = 0; v < s.nodes; ++v) {
    auto& f = s.flags[v];
    f.dependent = g.out_degree(v) > 0;
    f.required = g.in_degree(v) > 0;
    f.connected = f.dependent || f.required;
    f.top_level = f.dependent && !f.required;
    s.dependent += f.dependent;
    s.required += f.required;
    s.connected += f.connected;
    s.top_level += f.top_level;
  }
  return s;
}

std::vector<std::string> top_level_packages(const SnapshotGraph& g) {
  std::vector<std::string> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) > 0 && g.in_degree(v) == 0) out.push_back(g.name(v));
  }
  return out;
}

std::vector<std::string> connected_packages(const SnapshotGraph& g) {
  std::vector<std::string> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.out_degree(v) > 0 || g.in_degree(v) > 0) out.push_back(g.name(v));
  }
  return out;
}

ComponentPartition weakly_connected_components(const SnapshotGraph& g) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  ComponentPartition part;
  const auto n = g.node_count();
  part.component_of.assign(n, kNone);
  std::vector<NodeId> queue;
  for (NodeId root = 0; root < n; ++root) {
    if (part.component_of[root] != kNone) continue;
    auto id = static_cast<std::uint32_t>(part.components.size());
    queue.assign(1, root);
    part.component_of[root] = id;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      auto visit = [&](NodeId w) {
        if (part.component_of[w] == kNone) {
          part.component_of[w] = id;
          queue.push_back(w);
        }
      };
      for (auto w : g.out(queue[i])) visit(w);
      for (auto w : g.in(queue[i])) visit(w);
    }
    std::sort(queue.begin(), queue.end());
    if (queue.size() > 1) {
      part.connected_packages += queue.size();
      part.largest_connected_component = std::max(part.largest_connected_component, queue.size());
    }
    part.components.push_back(queue);
  }
  return part;
}

std::vector<std::uint32_t> transitive_counts(const SnapshotGraph& g, Direction dir, unsigned jobs) {
  const auto n = g.node_count();
  if (n == 0) return {};
  const auto scc = strongly_connected(g);
  const std::size_t k = scc.size.size();

  // Relabel so that edges in the traversal direction run from high to low.
  // Tarjan numbering already satisfies that for dependents (sources reach
  // their targets); dependencies use the reversed order.
  auto label = [&](std::uint32_t comp) -> std::uint32_t {
    return dir == Direction::dependents ? comp : static_cast<std::uint32_t>(k - 1 - comp);
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // (from, to) with from > to
  edges.reserve(g.edge_count());
  for (NodeId v = 0; v < n; ++v) {
    for (auto w : g.out(v)) {
      auto cv = scc.component_of[v], cw = scc.component_of[w];
      if (cv == cw) continue;
      if (dir == Direction::dependents) {
        edges.emplace_back(label(cv), label(cw));
      } else {
        edges.emplace_back(label(cw), label(cv));
      }
    }
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::size_t> offsets(k + 1, 0);
  std::vector<std::uint32_t> adjacency;
  adjacency.reserve(edges.size());
  for (const auto& [from, to] : edges) {
    ++offsets[from + 1];
    adjacency.push_back(to);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::uint32_t> weight(k);
  for (std::uint32_t c = 0; c < k; ++c) weight[label(c)] = scc.size[c];

  auto totals = ancestor_weights(offsets, adjacency, weight, jobs);
  std::vector<std::uint32_t> counts(n);
  for (NodeId v = 0; v < n; ++v) {
    auto c = scc.component_of[v];
    counts[v] = static_cast<std::uint32_t>(totals[label(c)] + scc.size[c] - 1);
  }
  return counts;
}

}  // namespace ecodeps
