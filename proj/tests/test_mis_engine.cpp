#include <gtest/gtest.h>

#include <random>

#include "setpack/mis_engine.hpp"
#include "support/brute_force.hpp"

using namespace setpack;

namespace {

UnweightedGraph make_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  UnweightedGraph g;
  g.adjacency.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    g.origin.push_back(static_cast<Vertex>(v));
    g.ids.push_back("v" + std::to_string(v));
    g.elements.push_back({});
  }
  for (auto [a, b] : edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& nb : g.adjacency) normalize(nb);
  return g;
}

UnweightedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return make_graph(n, edges);
}

}  // namespace

TEST(MisEngines, EmptyGraph) {
  UnweightedGraph g = make_graph(0, {});
  for (const char* spec : {"greedy", "swap:2", "exact"}) {
    EXPECT_TRUE(make_mis_engine(spec)->solve(g).empty()) << spec;
  }
}

TEST(MisEngines, TriangleGivesOneVertex) {
  UnweightedGraph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  for (const char* spec : {"greedy", "swap:1", "swap:2", "exact"}) {
    EXPECT_EQ(make_mis_engine(spec)->solve(g).size(), 1u) << spec;
  }
}

TEST(MisEngines, PathGivesEnds) {
  UnweightedGraph g = make_graph(3, {{0, 1}, {1, 2}});
  for (const char* spec : {"swap:1", "swap:2", "exact"}) {
    EXPECT_EQ(make_mis_engine(spec)->solve(g), (VertexSet{0, 2})) << spec;
  }
  EXPECT_EQ(brute::max_independent_size(g.adjacency), 2u);
}

TEST(MisEngines, SwapRepairsBadSeed) {
  // Star centre first would be a bad choice; swap:1 trades it for two leaves.
  SwapLocalSearch swap(1);
  UnweightedGraph g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  EXPECT_EQ(swap.improve(g, {0}), (VertexSet{1, 2, 3}));
}

TEST(MisEngines, OutputsAreIndependentAndSwapBeatsGreedy) {
  GreedyMinDegree greedy;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    UnweightedGraph g = random_graph(18, 0.2 + 0.01 * static_cast<double>(seed % 20), seed);
    VertexSet base = greedy.solve(g);
    ASSERT_TRUE(g.is_independent(base));
    for (int t : {1, 2, 3}) {
      SwapLocalSearch swap(t);
      VertexSet s = swap.solve(g);
      EXPECT_TRUE(g.is_independent(s));
      EXPECT_GE(s.size(), base.size());
      EXPECT_GE(swap.improve(g, base).size(), base.size());
    }
  }
}

TEST(MisEngines, ExactMatchesBruteForce) {
  ExactMis exact;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    std::size_t n = 5 + seed % 16;  // up to 20 vertices
    UnweightedGraph g = random_graph(n, 0.25, seed + 1000);
    VertexSet s = exact.solve(g);
    EXPECT_TRUE(g.is_independent(s));
    EXPECT_EQ(s.size(), brute::max_independent_size(g.adjacency)) << "seed=" << seed;
  }
}

TEST(MisEngines, ExactRefusesLargeGraphs) {
  ExactMis exact(5);
  EXPECT_THROW(exact.solve(make_graph(6, {})), CapacityError);
}

TEST(MisEngines, PlantedAndFixedEngines) {
  UnweightedGraph g = make_graph(4, {{0, 1}});
  g.origin = {10, 11, 12, 13};
  PlantedMis planted({"v1", "v3", "missing"});
  EXPECT_EQ(planted.solve(g), (VertexSet{1, 3}));
  FixedOriginMis fixed({11, 12, 99});
  EXPECT_EQ(fixed.solve(g), (VertexSet{1, 2}));
}

TEST(MisEngines, FactoryParsesSpecs) {
  EXPECT_EQ(make_mis_engine("greedy")->name(), "greedy");
  EXPECT_EQ(make_mis_engine("swap:3")->name(), "swap:3");
  EXPECT_EQ(make_mis_engine("exact")->name(), "exact");
  EXPECT_EQ(make_mis_engine("planted", std::vector<std::string>{"a"})->name(), "planted");
  EXPECT_THROW(make_mis_engine("planted"), std::invalid_argument);
  EXPECT_THROW(make_mis_engine("swap:"), std::invalid_argument);
  EXPECT_THROW(make_mis_engine("swap:x"), std::invalid_argument);
  EXPECT_THROW(make_mis_engine("furer-yu"), std::invalid_argument);
}
