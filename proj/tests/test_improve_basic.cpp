#include <gtest/gtest.h>

#include <numeric>

#include "setpack/improve_basic.hpp"
#include "setpack/instance.hpp"
#include "setpack/oracle.hpp"
#include "support/brute_force.hpp"

using namespace setpack;

namespace {

// A terminal-ish solution: greedy by weight, then claw improvements until none.
Solution claw_terminal(const ConflictGraph& g) {
  Solution a(g);
  while (auto c = find_claw_shaped_improvement(g, a)) a.apply(c->vertices);
  return a;
}

Instance random_instance(int k, int num_sets, std::uint64_t seed) {
  RandomInstanceConfig cfg;
  cfg.k = k;
  cfg.num_sets = num_sets;
  cfg.universe_size = 3 * k;
  cfg.seed = seed;
  return generate_random(cfg);
}

}  // namespace

TEST(LocalImprovement, SingleHeavierVertex) {
  Instance inst(2, {{"v", {"a", "b"}, Weight(1)}, {"x", {"a"}, Weight(2)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0});
  ImprovementCandidate c = evaluate(g, a, {1});
  EXPECT_TRUE(c.improves());
  EXPECT_EQ(c.gain, Weight(3));
  EXPECT_EQ(c.displaced, (VertexSet{0}));
}

TEST(LocalImprovement, EmptySetNeverImproves) {
  Instance inst(2, {{"v", {"a"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g);
  EXPECT_FALSE(is_local_improvement(g, a, {}));
}

TEST(LocalImprovement, DependentSetThrows) {
  Instance inst(2, {{"v", {"a"}, Weight(1)}, {"x", {"a", "b"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g);
  EXPECT_THROW(evaluate(g, a, {0, 1}), std::invalid_argument);
}

TEST(LocalImprovement, TightExampleTalonSubsetsNeverImprove) {
  LabeledInstance li = generate_tight_example(4, 8);
  ConflictGraph g = ConflictGraph::build(li.instance);
  Solution a(g, g.vertices_of(*li.adversarial_start));
  VertexSet a_star = g.vertices_of(*li.planted_solution);
  for (Vertex v : a.members()) {
    VertexSet talons = neighbors_in(g, v, a_star);
    for (std::uint32_t mask = 1; mask < (1u << talons.size()); ++mask) {
      VertexSet t;
      for (std::size_t i = 0; i < talons.size(); ++i) {
        if (mask >> i & 1u) t.push_back(talons[i]);
      }
      EXPECT_GE(neighborhood(g, t, a).size(), t.size());
      EXPECT_FALSE(is_local_improvement(g, a, t));
    }
  }
}

TEST(SmallImprovement, FreeVertexIsFound) {
  Instance inst(2, {{"v", {"a"}, Weight(1)}, {"x", {"b"}, Weight(1, 3)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0});
  auto c = find_small_improvement(g, a);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->vertices, (VertexSet{1}));
  EXPECT_TRUE(c->displaced.empty());
}

TEST(SmallImprovement, NoneOnK3Hard) {
  for (int m : {1, 2, 3}) {
    LabeledInstance li = generate_k3_hard(m, Weight(1, 10));
    ConflictGraph g = ConflictGraph::build(li.instance);
    Solution a(g, g.vertices_of(*li.adversarial_start));
    EXPECT_FALSE(find_small_improvement(g, a, 3).has_value());
    EXPECT_FALSE(brute::small_improvement(g, a, 3).has_value());
  }
}

TEST(SmallImprovement, TightExampleK3HasImprovingTriple) {
  LabeledInstance li = generate_tight_example(3, 4);
  ConflictGraph g = ConflictGraph::build(li.instance);
  Solution a(g, g.vertices_of(*li.adversarial_start));
  auto ours = find_small_improvement(g, a, 3);
  auto theirs = brute::small_improvement(g, a, 3);
  ASSERT_TRUE(ours.has_value());
  ASSERT_TRUE(theirs.has_value());
  EXPECT_EQ(ours->vertices.size(), 3u);
  EXPECT_EQ(ours->displaced.size(), 2u);
  EXPECT_TRUE(brute::improves(g, a, ours->vertices));
  EXPECT_FALSE(find_small_improvement(g, a, 2).has_value());
  EXPECT_FALSE(brute::small_improvement(g, a, 2).has_value());
}

TEST(SmallImprovement, AgreesWithBruteForce) {
  int checked = 0;
  for (int k : {2, 3, 4}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      Instance inst = random_instance(k, 14, seed);
      ConflictGraph g = ConflictGraph::build(inst);
      // Several solutions per instance: greedy prefix states and a claw-terminal one.
      std::vector<Solution> states;
      states.push_back(claw_terminal(g));
      Solution partial(g);
      for (Vertex v = 0; v < static_cast<Vertex>(g.size()); v += 2) {
        if (neighborhood(g, v, partial).empty()) partial.insert(v);
      }
      states.push_back(partial);
      for (const Solution& a : states) {
        for (std::size_t s = 1; s <= 3; ++s) {
          auto ours = find_small_improvement(g, a, s);
          auto theirs = brute::small_improvement(g, a, s);
          EXPECT_EQ(ours.has_value(), theirs.has_value()) << "k=" << k << " seed=" << seed << " s=" << s;
          if (ours) {
            EXPECT_LE(ours->vertices.size(), s);
            EXPECT_TRUE(brute::improves(g, a, ours->vertices));
            EXPECT_TRUE(g.is_independent(ours->vertices));
          }
          ++checked;
        }
      }
    }
  }
  EXPECT_EQ(checked, 3 * 40 * 2 * 3);
}

TEST(ClawImprovement, TwoTalonsBeatOneCentre) {
  Instance inst(3, {{"v", {"a", "b"}, Weight(1)}, {"u1", {"a"}, Weight(1)}, {"u2", {"b"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0});
  auto c = find_claw_shaped_improvement(g, a);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->vertices, (VertexSet{1, 2}));
  EXPECT_EQ(c->gain, Weight(1));
}

TEST(ClawImprovement, NoneOnTightExamples) {
  for (auto [k, n] : {std::pair{3, 4}, std::pair{4, 8}, std::pair{5, 6}, std::pair{6, 6}}) {
    LabeledInstance li = generate_tight_example(k, n);
    ConflictGraph g = ConflictGraph::build(li.instance);
    Solution a(g, g.vertices_of(*li.adversarial_start));
    EXPECT_FALSE(find_claw_shaped_improvement(g, a).has_value()) << k << "," << n;
    EXPECT_FALSE(brute::claw_improvement(g, a).has_value()) << k << "," << n;
  }
}

TEST(ClawImprovement, AgreesWithBruteForce) {
  for (int k : {3, 4, 5}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      Instance inst = random_instance(k, 14, seed + 100);
      ConflictGraph g = ConflictGraph::build(inst);
      // Greedy by decreasing weight, as a typical starting point.
      std::vector<Vertex> order(g.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](Vertex x, Vertex y) { return g.weight(x) > g.weight(y); });
      Solution a(g);
      for (Vertex v : order) {
        if (neighborhood(g, v, a).empty()) a.insert(v);
      }
      for (int round = 0; round < 20; ++round) {
        auto ours = find_claw_shaped_improvement(g, a);
        auto theirs = brute::claw_improvement(g, a);
        ASSERT_EQ(ours.has_value(), theirs.has_value()) << "k=" << k << " seed=" << seed;
        if (!ours) break;
        EXPECT_TRUE(brute::improves(g, a, ours->vertices));
        // Talons share a centre in A or form a lone free vertex.
        if (ours->vertices.size() > 1 || !ours->displaced.empty()) {
          bool has_centre = false;
          for (Vertex v : a.members()) {
            bool all = true;
            for (Vertex t : ours->vertices) all = all && g.adjacent(t, v);
            has_centre = has_centre || all;
          }
          EXPECT_TRUE(has_centre);
        }
        Weight before = a.weight_sq();
        a.apply(ours->vertices);
        EXPECT_EQ(a.weight_sq() - before, ours->gain);
      }
    }
  }
}

TEST(Contribution, Examples) {
  Instance inst(3, {{"v", {"a"}, Weight(1)},
                    {"z", {"b"}, Weight(1)},
                    {"u", {"a", "b"}, Weight(1)},
                    {"w", {"c"}, Weight(1)},
                    {"y", {"c", "d"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0, 1, 3});
  EXPECT_EQ(contribution(g, a, 2, 0), Weight(0));  // N(u,A) = {v, z}
  EXPECT_EQ(contribution(g, a, 4, 3), Weight(1));  // N(y,A) = {w}
  EXPECT_EQ(contribution(g, a, 4, 0), Weight(0));  // v not a neighbour of y
}

TEST(Charges, Examples) {
  Weight eps(1, 10);
  Instance inst(3, {{"v", {"a"}, Weight(1)},
                    {"u", {"a", "x"}, Weight(1)},
                    {"v1", {"b"}, Weight(1)},
                    {"v2", {"c"}, Weight(1)},
                    {"u2", {"b", "c"}, Weight(1)},
                    {"v3", {"d"}, Weight(1)},
                    {"u3", {"d"}, 1 - 2 * eps}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0, 2, 3, 5});
  ChargeMap charges = compute_charges(g, a, {1, 4, 6});
  EXPECT_EQ(charges.charge(1, 0), Weight(1, 2));
  EXPECT_EQ(charges.charge(4, 2), Weight(0));
  EXPECT_EQ(charges.charge(4, 3), Weight(0));
  Weight total_contr = contribution(g, a, 6, 5);
  EXPECT_EQ(total_contr - 2 * charges.charge(6, 5), 4 * eps * eps);
}

TEST(Charges, TiesGoToSmallerIndex) {
  Instance inst(3, {{"p", {"a"}, Weight(2)}, {"q", {"b"}, Weight(2)}, {"u", {"a", "b"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0, 1});
  ChargeMap charges = compute_charges(g, a, {2});
  EXPECT_EQ(charges.at(2).target, 0);
  EXPECT_EQ(charges.charge(2, 1), Weight(0));
  EXPECT_EQ(charges.charge(2, 0), Weight(-1));
}

TEST(Charges, NonMaximalSolutionThrows) {
  Instance inst(3, {{"p", {"a"}, Weight(1)}, {"u", {"b"}, Weight(1)}});
  ConflictGraph g = ConflictGraph::build(inst);
  Solution a(g, {0});
  EXPECT_THROW(compute_charges(g, a, {1}), std::invalid_argument);
}

// Once no claw improves A: sum_u contr(u, v) <= w(v) for every v in A and
// 2 charge(u, v) <= contr(u, v) everywhere, with A* from the oracle.
TEST(ChargeCalculus, HoldsOnClawTerminalSolutions) {
  for (int k : {3, 4, 5}) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      Instance inst = random_instance(k, 14, seed + 500);
      ConflictGraph g = ConflictGraph::build(inst);
      Solution a = claw_terminal(g);
      ASSERT_FALSE(brute::claw_improvement(g, a).has_value());
      VertexSet opt = solve_exact(inst).vertices;
      ChargeMap charges = compute_charges(g, a, opt);
      for (Vertex v : a.members()) {
        Weight sum = 0;
        for (Vertex u : opt) sum += contribution(g, a, u, v);
        EXPECT_LE(sum, g.weight(v));
      }
      for (Vertex u : opt) {
        for (Vertex v : a.members()) {
          EXPECT_LE(2 * charges.charge(u, v), contribution(g, a, u, v));
        }
      }
    }
  }
}
