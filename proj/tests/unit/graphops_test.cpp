#include <gtest/gtest.h>

#include <random>

#include "ecodeps/fixtures.hpp"
#include "ecodeps/graphops.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ecodeps;
using namespace testing_support;

namespace {

using Names = std::vector<std::string>;

SnapshotGraph tiny_at(const char* when) { return build_snapshot(tiny_dataset(), ts(when)); }

SnapshotGraph chain(std::size_t n) {
  Names nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 1; i <= n; ++i) nodes.push_back("p" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(nodes[i], nodes[i + 1]);
  return SnapshotGraph::from_edges(nodes, edges);
}

}  // namespace

TEST(DirectDependencies, Tiny) {
  auto g = tiny_at("2020-04-01");
  EXPECT_EQ(direct_dependencies(g, "c"), (Names{"a", "b"}));
  EXPECT_TRUE(direct_dependencies(g, "e").empty());
  EXPECT_EQ(direct_dependencies(g, "d"), (Names{"c"}));
  EXPECT_THROW(direct_dependencies(g, "zzz"), std::out_of_range);
}

TEST(TransitiveDependencies, TinyAndCycles) {
  auto g = tiny_at("2020-04-01");
  EXPECT_EQ(transitive_dependencies(g, "d"), (Names{"a", "b", "c"}));
  EXPECT_TRUE(transitive_dependencies(g, "b").empty());
  auto cycle = SnapshotGraph::from_edges({"x", "y"}, {{"x", "y"}, {"y", "x"}});
  EXPECT_EQ(transitive_dependencies(cycle, "x"), (Names{"y"}));
  EXPECT_THROW(transitive_dependencies(g, "zzz"), std::out_of_range);
}

TEST(TransitiveDependents, Tiny) {
  auto g = tiny_at("2020-04-01");
  EXPECT_EQ(transitive_dependents(g, "b"), (Names{"a", "c", "d"}));
  EXPECT_TRUE(transitive_dependents(g, "d").empty());
  EXPECT_EQ(transitive_dependents(g, "a"), (Names{"c", "d"}));
}

TEST(DependencyDepth, Examples) {
  auto g = tiny_at("2020-04-01");
  EXPECT_EQ(dependency_depth(g, "d"), 2u);
  EXPECT_EQ(dependency_depth(g, "e"), 0u);
  EXPECT_EQ(dependency_depth(chain(6), "p1"), 5u);
  // Shortest-path levels: a shortcut edge lowers the depth.
  auto diamond = SnapshotGraph::from_edges({"s", "m", "t"}, {{"s", "m"}, {"m", "t"}, {"s", "t"}});
  EXPECT_EQ(dependency_depth(diamond, "s"), 1u);
  auto cycle = SnapshotGraph::from_edges({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}, {"z", "x"}});
  EXPECT_EQ(dependency_depth(cycle, "x"), 2u);
}

TEST(Roles, TopLevelAndConnected) {
  auto g = tiny_at("2020-04-01");
  EXPECT_EQ(top_level_packages(g), (Names{"d"}));
  EXPECT_EQ(connected_packages(g), (Names{"a", "b", "c", "d"}));
  EXPECT_EQ(connected_packages(tiny_at("2020-03-01")), (Names{"a", "b", "c"}));
  auto edgeless = SnapshotGraph::from_edges({"x", "y", "z"}, {});
  EXPECT_TRUE(top_level_packages(edgeless).empty());
  EXPECT_TRUE(connected_packages(edgeless).empty());
  EXPECT_EQ(top_level_packages(chain(3)), (Names{"p1"}));
}

TEST(Roles, ClassifyTiny) {
  auto g = tiny_at("2020-04-01");
  auto roles = classify(g);
  EXPECT_EQ(roles.nodes, 5u);
  EXPECT_EQ(roles.dependent, 3u);
  EXPECT_EQ(roles.required, 3u);
  EXPECT_EQ(roles.top_level, 1u);
  EXPECT_EQ(roles.connected, 4u);
  EXPECT_DOUBLE_EQ(roles.fraction(roles.dependent), 0.6);
  EXPECT_DOUBLE_EQ(roles.fraction(roles.required), 0.6);
  EXPECT_DOUBLE_EQ(roles.fraction(roles.top_level), 0.2);
  EXPECT_DOUBLE_EQ(roles.fraction(roles.connected), 0.8);
  EXPECT_TRUE(roles.flags[g.node("d")].top_level);
  EXPECT_FALSE(roles.flags[g.node("e")].connected);

  auto edgeless = classify(SnapshotGraph::from_edges({"x", "y"}, {}));
  for (const auto& f : edgeless.flags) EXPECT_EQ(f, RoleFlags{});
}

TEST(Components, Examples) {
  auto g = tiny_at("2020-04-01");
  auto parts = weakly_connected_components(g);
  ASSERT_EQ(parts.components.size(), 2u);
  EXPECT_EQ(names_of(g, parts.components[0]), (Names{"a", "b", "c", "d"}));
  EXPECT_EQ(names_of(g, parts.components[1]), (Names{"e"}));
  EXPECT_DOUBLE_EQ(parts.largest_connected_fraction(), 1.0);

  auto edgeless = weakly_connected_components(SnapshotGraph::from_edges({"x", "y", "z"}, {}));
  EXPECT_EQ(edgeless.components.size(), 3u);
  EXPECT_DOUBLE_EQ(edgeless.largest_connected_fraction(), 0.0);

  auto pairs = SnapshotGraph::from_edges({"w", "x", "y", "z"}, {{"w", "x"}, {"y", "z"}});
  auto pp = weakly_connected_components(pairs);
  ASSERT_EQ(pp.components.size(), 2u);
  EXPECT_EQ(names_of(pairs, pp.components[0]), (Names{"w", "x"}));
  EXPECT_EQ(names_of(pairs, pp.components[1]), (Names{"y", "z"}));
  EXPECT_DOUBLE_EQ(pp.largest_connected_fraction(), 0.5);
}

TEST(Properties, RandomGraphsAgainstOracles) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const double density = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
    auto rg = oracle::random_graph(rng, n, density);
    auto g = SnapshotGraph::from_edges(rg.names, rg.edges);
    auto reach = oracle::closure(rg.adj);
    auto fwd = transitive_counts(g, Direction::dependencies, 1 + trial % 3);
    auto back = transitive_counts(g, Direction::dependents, 1 + trial % 3);
    std::uint64_t sum_fwd = 0, sum_back = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& name = rg.names[i];
      Names expected_deps, expected_rdeps;
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && reach[i][j]) expected_deps.push_back(rg.names[j]);
        if (i != j && reach[j][i]) expected_rdeps.push_back(rg.names[j]);
      }
      std::sort(expected_deps.begin(), expected_deps.end());
      std::sort(expected_rdeps.begin(), expected_rdeps.end());
      auto deps = transitive_dependencies(g, name);
      ASSERT_EQ(deps, expected_deps);
      ASSERT_EQ(transitive_dependents(g, name), expected_rdeps);
      const NodeId v = g.node(name);
      ASSERT_EQ(fwd[v], expected_deps.size());
      ASSERT_EQ(back[v], expected_rdeps.size());
      sum_fwd += fwd[v];
      sum_back += back[v];

      auto direct = direct_dependencies(g, std::string_view(name));
      EXPECT_TRUE(std::includes(deps.begin(), deps.end(), direct.begin(), direct.end()));
      const auto depth = dependency_depth(g, std::string_view(name));
      EXPECT_LE(depth, n - 1);
      EXPECT_EQ(depth == 0, g.out_degree(v) == 0);
    }
    EXPECT_EQ(sum_fwd, sum_back);

    std::set<std::set<std::string>> got;
    for (const auto& c : weakly_connected_components(g).components) {
      auto names = names_of(g, c);
      got.emplace(names.begin(), names.end());
    }
    ASSERT_EQ(got, oracle::components(rg));
  }
}

TEST(Properties, BatchDepthsMatchSingleQueries) {
  GeneratorConfig cfg;
  cfg.n_packages = 800;
  cfg.months = 12;
  auto g = build_snapshot(generate(cfg), month_start(ym(2011, 1)));
  std::vector<NodeId> all(g.node_count());
  std::iota(all.begin(), all.end(), 0);
  auto depths = dependency_depths(g, all, 3);
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_EQ(depths[v], dependency_depth(g, v));
  EXPECT_EQ(transitive_counts(g, Direction::dependents, 1), transitive_counts(g, Direction::dependents, 4));
}

TEST(Properties, LargeBlockBoundaries) {
  // Long chains cross several 512-node blocks of the closure kernel.
  auto g = chain(1500);
  auto fwd = transitive_counts(g, Direction::dependencies, 2);
  auto back = transitive_counts(g, Direction::dependents, 2);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto pos = std::stoul(g.name(v).substr(1)) - 1;
    EXPECT_EQ(fwd[v], 1500 - 1 - pos);
    EXPECT_EQ(back[v], pos);
  }
}
