#include <gtest/gtest.h>

#include <random>

#include "ecodeps/fixtures.hpp"
#include "ecodeps/graphops.hpp"
#include "ecodeps/indices.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace ecodeps;
using namespace testing_support;

namespace {

SnapshotGraph tiny_final() { return build_snapshot(tiny_dataset(), ts("2020-04-01")); }

std::uint64_t h(std::vector<std::uint64_t> v) { return h_index(v); }

}  // namespace

TEST(HIndex, Examples) {
  EXPECT_EQ(h({}), 0u);
  EXPECT_EQ(h({5, 3, 2, 1}), 2u);
  EXPECT_EQ(h({1, 1, 1}), 1u);
  EXPECT_EQ(h({0, 0}), 0u);
  EXPECT_EQ(h({100, 100, 100}), 3u);
}

TEST(HIndex, RandomVectorsMatchOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::uint64_t> v(rng() % 201);
    for (auto& x : v) x = rng() % 1001;
    const auto got = h_index(v);
    ASSERT_EQ(got, oracle::h_index(v));
    const auto max = v.empty() ? 0 : *std::max_element(v.begin(), v.end());
    EXPECT_LE(got, std::min<std::uint64_t>(v.size(), max));
    v.push_back(rng() % 1001);
    EXPECT_GE(h_index(v), got);
  }
}

TEST(Changeability, TinyExamples) {
  const auto d = tiny_dataset();
  auto r = changeability_index(d, ts("2020-03-31"), 30);
  EXPECT_EQ(r.value, 1u);
  EXPECT_EQ(r.index, IndexKind::changeability);
  EXPECT_EQ(r.ecosystem, "tiny");
  EXPECT_EQ(r.parameter, std::optional<double>(30));
  EXPECT_EQ(changeability_index(d, ts("2020-01-31"), 30).value, 0u);
  EXPECT_EQ(changeability_index(d, ts("2019-06-01"), 30).value, 0u);
  EXPECT_THROW(changeability_index(d, ts("2020-03-31"), 0), std::invalid_argument);
  EXPECT_THROW(changeability_index(d, ts("2021-01-01"), 30), std::invalid_argument);
}

TEST(Changeability, WindowIsHalfOpenOnTheLeft) {
  Dataset d;
  d.ecosystem = "w";
  d.packages = {{"p", ""}};
  d.releases = {{"p", "1", ts("2020-01-01")}, {"p", "2", ts("2020-01-02")}};
  d.cutoff = ts("2020-03-01");
  // update at 2020-01-02; window (t-1d, t]
  EXPECT_EQ(changeability_index(d, ts("2020-01-02"), 1).value, 1u);
  EXPECT_EQ(changeability_index(d, ts("2020-01-03"), 1).value, 0u);
}

TEST(Changeability, NonDecreasingInWindowLength) {
  GeneratorConfig cfg;
  cfg.n_packages = 400;
  cfg.months = 12;
  cfg.update_rate = 1.5;
  auto d = generate(cfg);
  Timeline timeline(d);
  for (auto m : month_range(ym(2010, 2), ym(2011, 1))) {
    std::uint64_t prev = 0;
    for (int w : {1, 7, 30, 90, 365}) {
      auto v = changeability_index(timeline, month_start(m), w).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
    EXPECT_EQ(changeability_index(timeline, month_start(m), 30).value,
              changeability_index(d, month_start(m), 30).value);
  }
}

TEST(Reusability, Examples) {
  auto r = reusability_index(tiny_final());
  EXPECT_EQ(r.value, 1u);
  EXPECT_FALSE(r.parameter.has_value());
  EXPECT_EQ(reusability_index(SnapshotGraph::from_edges({"x", "y"}, {})).value, 0u);
  auto star = SnapshotGraph::from_edges({"h", "s1", "s2", "s3"}, {{"s1", "h"}, {"s2", "h"}, {"s3", "h"}});
  EXPECT_EQ(reusability_index(star).value, 1u);
  auto hubs = SnapshotGraph::from_edges({"h1", "h2", "s1", "s2"},
                                        {{"s1", "h1"}, {"s2", "h1"}, {"s1", "h2"}, {"s2", "h2"}});
  EXPECT_EQ(reusability_index(hubs).value, 2u);
  // transitive variant: b has 3 transitive dependents, a 2, c 1
  EXPECT_EQ(reusability_index(tiny_final(), ReuseCount::transitive).value, 2u);
}

TEST(PImpact, Examples) {
  auto g = tiny_final();
  EXPECT_EQ(p_impact_index(g, 50).value, 1u);
  EXPECT_EQ(p_impact_index(g, 80).value, 0u);
  EXPECT_EQ(p_impact_index(g, 5).value, 3u);
  EXPECT_EQ(p_impact_index(g, 60).value, 1u);
  EXPECT_EQ(p_impact_index(g, 5).parameter, std::optional<double>(5));
  EXPECT_THROW(p_impact_index(g, 0), std::invalid_argument);
  EXPECT_THROW(p_impact_index(g, 100.5), std::invalid_argument);
}

TEST(Properties, IndicesOnRandomGraphs) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 45;
    auto rg = oracle::random_graph(rng, n, std::uniform_real_distribution<double>(0, 0.3)(rng));
    auto g = SnapshotGraph::from_edges(rg.names, rg.edges);
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    auto reach = oracle::closure(rg.adj);
    for (double p : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
      const auto v = p_impact_index(g, p).value;
      EXPECT_LE(v, prev);
      prev = v;
      std::uint64_t expected = 0;
      for (std::size_t j = 0; j < n; ++j) {
        std::size_t dependents = 0;
        for (std::size_t i = 0; i < n; ++i) dependents += (i != j && reach[i][j]);
        expected += dependents >= p / 100.0 * static_cast<double>(n);
      }
      EXPECT_EQ(v, expected);
    }
    std::vector<std::uint64_t> indegrees;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.in_degree(v) > 0) indegrees.push_back(g.in_degree(v));
    }
    const auto reuse = reusability_index(g).value;
    EXPECT_EQ(reuse, oracle::h_index(indegrees));
    EXPECT_LE(reuse, classify(g).required);

    // relabeling invariance
    std::vector<std::string> renamed;
    std::map<std::string, std::string> rename;
    for (const auto& name : rg.names) rename[name] = renamed.emplace_back("z" + std::to_string(rng()));
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [a, b] : rg.edges) edges.emplace_back(rename[a], rename[b]);
    auto relabeled = SnapshotGraph::from_edges(renamed, edges);
    EXPECT_EQ(reusability_index(relabeled).value, reuse);
    EXPECT_EQ(p_impact_index(relabeled, 10).value, p_impact_index(g, 10).value);
  }
}

TEST(IndexNames, ParseAndPrint) {
  EXPECT_EQ(parse_index_kind("impact"), IndexKind::p_impact);
  EXPECT_EQ(parse_index_kind("p-impact"), IndexKind::p_impact);
  EXPECT_EQ(parse_index_kind("changeability"), IndexKind::changeability);
  EXPECT_EQ(to_string(IndexKind::reusability), "reusability");
  EXPECT_THROW(parse_index_kind("popularity"), std::invalid_argument);
}
