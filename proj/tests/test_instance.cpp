#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "setpack/conflict.hpp"
#include "setpack/instance.hpp"
#include "support/brute_force.hpp"

using namespace setpack;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto dir = std::filesystem::temp_directory_path() / "setpack_tests";
  std::filesystem::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(InstanceLoad, TwoSetFile) {
  auto path = temp_file("two.json", R"({"k":3,"sets":[
      {"id":"x","elements":["a","b"],"weight":"1"},
      {"id":"y","elements":["b","c"],"weight":"2/1"}]})");
  Instance inst = load(path.string());
  EXPECT_EQ(inst.k(), 3);
  ASSERT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst[1].weight, Weight(2));
  EXPECT_EQ(inst[0].elements, (std::vector<std::string>{"a", "b"}));
}

TEST(InstanceLoad, OversizedSetIsValidationError) {
  auto path = temp_file("big.json", R"({"k":3,"sets":[{"id":"x","elements":["a","b","c","d"],"weight":"1/1"}]})");
  EXPECT_THROW(load(path.string()), ValidationError);
}

TEST(InstanceLoad, OtherValidationErrors) {
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":"0/1"}]})"), ValidationError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":"-1/2"}]})"), ValidationError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":"1"},
                                               {"id":"x","elements":["b"],"weight":"1"}]})"),
               ValidationError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a","a"],"weight":"1"}]})"), ValidationError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":[],"weight":"1"}]})"), ValidationError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":"1"},
                                               {"id":"y","elements":["a"],"weight":"1"}],
                                "planted_solution":["x","y"]})"),
               ValidationError);
}

TEST(InstanceLoad, ParseErrors) {
  EXPECT_THROW(parse_labeled("{not json"), ParseError);
  EXPECT_THROW(parse_labeled(R"({"sets":[]})"), ParseError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":0.5}]})"), ParseError);
  EXPECT_THROW(parse_labeled(R"({"k":2,"sets":[{"id":"x","elements":["a"],"weight":"one"}]})"), ParseError);
  EXPECT_THROW(load("/nonexistent/file.json"), ParseError);
}

TEST(InstanceLoad, RoundTripUpToKeyOrder) {
  std::string text = R"({"sets":[{"weight":"3/2","elements":["p","q"],"id":"s0"},
                                 {"elements":["r"],"id":"s1","weight":"5/1"}],
                         "adversarial_start":["s1"],"k":2})";
  auto path = temp_file("rt_in.json", text);
  LabeledInstance li = load_labeled(path.string());
  auto out = std::filesystem::temp_directory_path() / "setpack_tests" / "rt_out.json";
  save(li, out.string());
  std::ifstream in(out);
  auto reread = nlohmann::json::parse(in);
  EXPECT_EQ(reread, nlohmann::json::parse(text));
  EXPECT_EQ(load_labeled(out.string()).instance, li.instance);
}

TEST(TightExample, K3N4Counts) {
  LabeledInstance li = generate_tight_example(3, 4);
  ASSERT_TRUE(li.planted_solution && li.adversarial_start);
  EXPECT_EQ(li.adversarial_start->size(), 4u);
  EXPECT_EQ(li.planted_solution->size(), 8u);
  Weight ratio = li.instance.total_weight(*li.planted_solution) / li.instance.total_weight(*li.adversarial_start);
  EXPECT_EQ(ratio, Weight(2));
}

TEST(TightExample, K3N3IsAccepted) {
  LabeledInstance li = generate_tight_example(3, 3);
  // n + n (k - 1) / 2
  EXPECT_EQ(li.planted_solution->size(), 6u);
}

TEST(TightExample, ParameterErrors) {
  EXPECT_THROW(generate_tight_example(4, 5), ParameterError);  // (k-1) n odd
  EXPECT_THROW(generate_tight_example(4, 3), ParameterError);  // n < k
  EXPECT_THROW(generate_tight_example(2, 4), ParameterError);
}

class TightExampleProperties : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(TightExampleProperties, DegreesAndWeights) {
  auto [k, n] = GetParam();
  LabeledInstance li = generate_tight_example(k, n);
  ConflictGraph g = ConflictGraph::build(li.instance);
  VertexSet a_star = g.vertices_of(*li.planted_solution);
  VertexSet a = g.vertices_of(*li.adversarial_start);
  std::size_t total = 0;
  for (Vertex v : a) {
    EXPECT_EQ(neighbors_in(g, v, a_star).size(), static_cast<std::size_t>(k));
    total += neighbors_in(g, v, a_star).size();
  }
  EXPECT_EQ(total, static_cast<std::size_t>(n * k));
  for (Vertex u : a_star) {
    std::size_t deg = neighbors_in(g, u, a).size();
    EXPECT_TRUE(deg == 1 || deg == 2);
  }
  EXPECT_EQ(2 * g.weight_of(a_star), Weight(k + 1) * g.weight_of(a));
  EXPECT_TRUE(g.is_independent(a));
  EXPECT_TRUE(g.is_independent(a_star));
}

INSTANTIATE_TEST_SUITE_P(Sizes, TightExampleProperties,
                         ::testing::Values(std::pair{3, 4}, std::pair{3, 6}, std::pair{4, 4}, std::pair{4, 8},
                                           std::pair{5, 5}, std::pair{5, 6}, std::pair{6, 6}, std::pair{6, 12}));

TEST(TightExample, K5N6HasNoClawImprovement) {
  LabeledInstance li = generate_tight_example(5, 6);
  EXPECT_EQ(li.planted_solution->size(), 18u);
  ConflictGraph g = ConflictGraph::build(li.instance);
  Solution a(g, g.vertices_of(*li.adversarial_start));
  EXPECT_FALSE(brute::claw_improvement(g, a).has_value());
}

TEST(K3Hard, M1Counts) {
  LabeledInstance li = generate_k3_hard(1, Weight(1, 10));
  EXPECT_EQ(li.instance.size(), 11u);
  Weight eps(1, 10);
  Weight ratio = li.instance.total_weight(*li.planted_solution) / li.instance.total_weight(*li.adversarial_start);
  EXPECT_EQ(ratio, (7 - 4 * eps) / 4);
}

TEST(K3Hard, M2MatchesFigureCounts) {
  LabeledInstance li = generate_k3_hard(2, Weight(1, 10));
  std::size_t cycle = 0, extra = 0, green = 0;
  for (const auto& s : li.instance.sets()) {
    if (s.id[0] == 'c') ++cycle;
    if (s.id[0] == 'x') ++extra;
    if (s.id[0] == 'g') ++green;
  }
  EXPECT_EQ(cycle, 16u);
  EXPECT_EQ(extra, 2u);
  EXPECT_EQ(green, 4u);
}

TEST(K3Hard, ParameterErrors) {
  EXPECT_THROW(generate_k3_hard(1, Weight(0)), ParameterError);
  EXPECT_THROW(generate_k3_hard(1, Weight(1, 2)), ParameterError);
  EXPECT_THROW(generate_k3_hard(1, Weight(-1, 10)), ParameterError);
  EXPECT_THROW(generate_k3_hard(0, Weight(1, 10)), ParameterError);
}

TEST(K3Hard, ConflictGraphMatchesSourceGraph) {
  for (int m : {1, 2, 3}) {
    LabeledInstance li = generate_k3_hard(m, Weight(1, 10));
    ConflictGraph g = ConflictGraph::build(li.instance);
    // Every element names one source edge "a-b"; rebuild the edge set from
    // the element names and compare with the conflict graph.
    std::set<std::pair<std::string, std::string>> source;
    for (const auto& s : li.instance.sets()) {
      EXPECT_LE(s.elements.size(), 3u);
      for (const auto& e : s.elements) {
        auto dash = e.find('-');
        source.emplace(e.substr(0, dash), e.substr(dash + 1));
      }
    }
    std::set<std::pair<std::string, std::string>> conflicts;
    for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) {
      for (Vertex u : g.neighbors(v)) {
        if (u < v) continue;
        auto p = std::minmax(g.id(u), g.id(v));
        conflicts.emplace(p.first, p.second);
      }
    }
    std::set<std::pair<std::string, std::string>> sorted_source;
    for (const auto& [x, y] : source) {
      auto p = std::minmax(x, y);
      sorted_source.emplace(p.first, p.second);
    }
    EXPECT_EQ(conflicts, sorted_source) << "m=" << m;
  }
}

TEST(RandomInstances, DeterministicUnderSeed) {
  RandomInstanceConfig cfg;
  cfg.seed = 42;
  EXPECT_EQ(generate_random(cfg), generate_random(cfg));
  RandomInstanceConfig other = cfg;
  other.seed = 43;
  EXPECT_FALSE(generate_random(cfg) == generate_random(other));
}

TEST(RandomInstances, UnitWeightRange) {
  RandomInstanceConfig cfg;
  cfg.min_weight = 1;
  cfg.max_weight = 1;
  for (const auto& s : generate_random(cfg).sets()) EXPECT_EQ(s.weight, Weight(1));
}

TEST(RandomInstances, RespectsInvariants) {
  for (int k = 1; k <= 6; ++k) {
    RandomInstanceConfig cfg;
    cfg.k = k;
    cfg.universe_size = k + 3;
    cfg.num_sets = 20;
    cfg.seed = static_cast<std::uint64_t>(k);
    Instance inst = generate_random(cfg);
    for (const auto& s : inst.sets()) {
      EXPECT_GE(s.elements.size(), 1u);
      EXPECT_LE(s.elements.size(), static_cast<std::size_t>(k));
      EXPECT_GE(s.weight, cfg.min_weight);
      EXPECT_LE(s.weight, cfg.max_weight);
    }
  }
}

TEST(RandomInstances, ParameterErrors) {
  RandomInstanceConfig cfg;
  cfg.num_sets = 0;
  EXPECT_THROW(generate_random(cfg), ParameterError);
  cfg = {};
  cfg.universe_size = 2;
  EXPECT_THROW(generate_random(cfg), ParameterError);
  cfg = {};
  cfg.min_weight = 0;
  EXPECT_THROW(generate_random(cfg), ParameterError);
  cfg = {};
  cfg.min_weight = 5;
  cfg.max_weight = 4;
  EXPECT_THROW(generate_random(cfg), ParameterError);
}

TEST(Generators, OutputsPassValidation) {
  for (int k = 3; k <= 6; ++k) {
    LabeledInstance li = generate_tight_example(k, 2 * k);
    EXPECT_NO_THROW(parse_labeled(to_json(li).dump()));
  }
  LabeledInstance hard = generate_k3_hard(3, Weight(1, 7));
  EXPECT_NO_THROW(parse_labeled(to_json(hard).dump()));
}
