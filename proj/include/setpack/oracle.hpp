#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/instance.hpp"

namespace setpack {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename W>
struct IndependentSetResult {
  VertexSet vertices;
  W weight{};
  std::uint64_t nodes = 0;
};

/// Maximum-weight independent set by depth-first branch and bound. Vertices
/// are decided in order of decreasing weight (ties by index); the bound is
/// the current weight plus every undecided vertex not yet blocked.
template <typename W>
IndependentSetResult<W> max_weight_independent_set(const std::vector<VertexSet>& adjacency,
                                                   const std::vector<W>& weights) {
  const std::size_t n = adjacency.size();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return weights[a] > weights[b]; });

  IndependentSetResult<W> best;
  std::vector<int> blocked(n, 0);
  VertexSet current;
  W current_weight{};
  bool have_best = false;

  auto dfs = [&](auto&& self, std::size_t pos) -> void {
    ++best.nodes;
    while (pos < n && blocked[order[pos]] > 0) ++pos;
    if (pos == n) {
      if (!have_best || current_weight > best.weight) {
        best.vertices = current;
        best.weight = current_weight;
        have_best = true;
      }
      return;
    }
    W bound = current_weight;
    for (std::size_t i = pos; i < n; ++i) {
      if (blocked[order[i]] == 0) bound += weights[order[i]];
    }
    if (have_best && bound <= best.weight) return;

    Vertex v = order[pos];
    current.push_back(v);
    current_weight += weights[v];
    ++blocked[v];
    for (Vertex u : adjacency[v]) ++blocked[u];
    self(self, pos + 1);
    for (Vertex u : adjacency[v]) --blocked[u];
    --blocked[v];
    current_weight -= weights[v];
    current.pop_back();

    ++blocked[v];
    self(self, pos + 1);
    --blocked[v];
  };
  dfs(dfs, 0);
  normalize(best.vertices);
  return best;
}

struct OracleResult {
  std::vector<std::string> ids;
  VertexSet vertices;
  Weight weight;
  std::uint64_t nodes = 0;
};

inline constexpr std::size_t kDefaultOracleCap = 30;

/// Exact maximum-weight disjoint sub-collection. Throws CapacityError when
/// the instance has more than `size_cap` sets.
inline OracleResult solve_exact(const Instance& instance, std::size_t size_cap = kDefaultOracleCap) {
  if (instance.size() > size_cap) {
    throw CapacityError("exact oracle limited to " + std::to_string(size_cap) + " sets, instance has " +
                        std::to_string(instance.size()));
  }
  ConflictGraph g = ConflictGraph::build(instance);
  std::vector<VertexSet> adjacency;
  std::vector<Weight> weights;
  for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) {
    adjacency.push_back(g.neighbors(v));
    weights.push_back(g.weight(v));
  }
  auto r = max_weight_independent_set(adjacency, weights);
  return OracleResult{g.ids_of(r.vertices), r.vertices, r.weight, r.nodes};
}

}  // namespace setpack
