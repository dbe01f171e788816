#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/rational.hpp"

namespace setpack {

// A candidate X together with its displaced neighbourhood N(X, A) and the
// exact change of the squared-weight potential.
struct ImprovementCandidate {
  VertexSet vertices;
  VertexSet displaced;
  Weight gain;

  bool improves() const { return gain > 0; }
};

/// Scores X against A. Throws std::invalid_argument if X is not independent.
inline ImprovementCandidate evaluate(const ConflictGraph& g, const Solution& a, VertexSet x) {
  normalize(x);
  if (!g.is_independent(x)) throw std::invalid_argument("candidate set is not independent");
  ImprovementCandidate c;
  c.displaced = neighborhood(g, x, a);
  c.gain = g.weight_sq_of(x) - g.weight_sq_of(c.displaced);
  c.vertices = std::move(x);
  return c;
}

/// w^2(X) > w^2(N(X, A)), strictly.
inline bool is_local_improvement(const ConflictGraph& g, const Solution& a, const VertexSet& x) {
  return evaluate(g, a, x).improves();
}

// n(u) and n2(u): the heaviest and second heaviest members of N(u, A).
// Ties go to the smaller vertex index. -1 where undefined.
struct HeaviestNeighbors {
  Vertex first = -1;
  Vertex second = -1;
};

inline HeaviestNeighbors heaviest_neighbors(const ConflictGraph& g, const VertexSet& a_neighbors) {
  HeaviestNeighbors h;
  auto heavier = [&](Vertex x, Vertex y) {
    if (g.weight(x) != g.weight(y)) return g.weight(x) > g.weight(y);
    return x < y;
  };
  for (Vertex v : a_neighbors) {
    if (h.first < 0 || heavier(v, h.first)) {
      h.second = h.first;
      h.first = v;
    } else if (h.second < 0 || heavier(v, h.second)) {
      h.second = v;
    }
  }
  return h;
}

inline HeaviestNeighbors heaviest_neighbors(const ConflictGraph& g, const Solution& a, Vertex u) {
  return heaviest_neighbors(g, neighborhood(g, u, a));
}

/// contr(u, v) = max{0, (w^2(u) - w^2(N(u,A) \ {v})) / w(v)} if v in N(u, A), else 0.
inline Weight contribution(const ConflictGraph& g, const Solution& a, Vertex u, Vertex v) {
  VertexSet nb = neighborhood(g, u, a);
  if (!contains(nb, v)) return 0;
  Weight rest = g.weight_sq_of(nb) - g.weight_sq(v);
  Weight value = (g.weight_sq(u) - rest) / g.weight(v);
  return value > 0 ? value : Weight(0);
}

struct Charge {
  Vertex target = -1;  // n(u)
  Weight amount;       // w(u) - w(N(u, A)) / 2
};

// charge(u, v) for u in A*; zero except at (u, n(u)).
class ChargeMap {
 public:
  void set(Vertex u, Charge c) { charges_[u] = std::move(c); }

  Weight charge(Vertex u, Vertex v) const {
    auto it = charges_.find(u);
    if (it == charges_.end() || it->second.target != v) return 0;
    return it->second.amount;
  }

  const Charge& at(Vertex u) const { return charges_.at(u); }
  const std::map<Vertex, Charge>& entries() const { return charges_; }

 private:
  std::map<Vertex, Charge> charges_;
};

inline ChargeMap compute_charges(const ConflictGraph& g, const Solution& a, const VertexSet& optimum) {
  ChargeMap map;
  for (Vertex u : optimum) {
    VertexSet nb = neighborhood(g, u, a);
    if (nb.empty()) {
      throw std::invalid_argument("vertex '" + g.id(u) + "' has no neighbour in the solution; it is not maximal");
    }
    map.set(u, Charge{heaviest_neighbors(g, nb).first, g.weight(u) - g.weight_of(nb) / 2});
  }
  return map;
}

namespace detail {

// Per-vertex A-neighbourhoods of the vertices outside A.
struct OutsideView {
  VertexSet outside;
  std::vector<VertexSet> a_neighbors;  // indexed by vertex, empty for members
  std::vector<Weight> a_neighbors_sq;

  OutsideView(const ConflictGraph& g, const Solution& a)
      : a_neighbors(g.size()), a_neighbors_sq(g.size(), Weight(0)) {
    for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) {
      if (a.contains(v)) continue;
      outside.push_back(v);
      a_neighbors[v] = neighborhood(g, v, a);
      a_neighbors_sq[v] = g.weight_sq_of(a_neighbors[v]);
    }
  }

  bool share(Vertex x, Vertex y) const {
    const VertexSet& p = a_neighbors[x];
    const VertexSet& q = a_neighbors[y];
    auto i = p.begin();
    auto j = q.begin();
    while (i != p.end() && j != q.end()) {
      if (*i == *j) return true;
      if (*i < *j) ++i;
      else ++j;
    }
    return false;
  }
};

}  // namespace detail

/// Exhaustive search for an improving independent X outside A with |X| <= max_size.
/// Sizes are tried in increasing order. An X whose members split into two
/// groups with disjoint A-neighbourhoods is skipped: its gain is the sum of
/// the groups' gains, so one of the (smaller) groups already improves.
inline std::optional<ImprovementCandidate> find_small_improvement(const ConflictGraph& g, const Solution& a,
                                                                  std::size_t max_size = 3) {
  if (max_size == 0) return std::nullopt;
  detail::OutsideView view(g, a);
  const VertexSet& out = view.outside;

  for (Vertex x : out) {
    if (g.weight_sq(x) > view.a_neighbors_sq[x]) return evaluate(g, a, {x});
  }

  VertexSet chosen;
  std::optional<ImprovementCandidate> found;

  auto connected = [&]() {
    // Share-graph connectivity on at most a handful of vertices.
    std::vector<bool> seen(chosen.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < chosen.size(); ++j) {
        if (!seen[j] && view.share(chosen[i], chosen[j])) {
          seen[j] = true;
          ++reached;
          stack.push_back(j);
        }
      }
    }
    return reached == chosen.size();
  };

  for (std::size_t target = 2; target <= max_size && !found; ++target) {
    auto dfs = [&](auto&& self, std::size_t from) -> bool {
      if (chosen.size() == target) {
        if (!connected()) return false;
        VertexSet displaced;
        for (Vertex x : chosen) displaced = set_union(displaced, view.a_neighbors[x]);
        Weight gain = g.weight_sq_of(chosen) - g.weight_sq_of(displaced);
        if (gain > 0) {
          found = ImprovementCandidate{chosen, std::move(displaced), std::move(gain)};
          return true;
        }
        return false;
      }
      for (std::size_t i = from; i < out.size(); ++i) {
        Vertex v = out[i];
        bool independent = std::none_of(chosen.begin(), chosen.end(), [&](Vertex c) { return g.adjacent(c, v); });
        if (!independent) continue;
        chosen.push_back(v);
        if (self(self, i + 1)) return true;
        chosen.pop_back();
      }
      return false;
    };
    dfs(dfs, 0);
  }
  return found;
}

/// Claw-shaped improvements: a free vertex, or an independent talon set X
/// inside the neighbourhood of some centre v in A with w^2(X) > w^2(N(X, A)).
/// Exhaustive per centre: talons are tried in decreasing contr(., v) order and
/// a branch is cut once even adding every remaining talon for free could not
/// make the gain positive.
inline std::optional<ImprovementCandidate> find_claw_shaped_improvement(const ConflictGraph& g, const Solution& a) {
  detail::OutsideView view(g, a);
  for (Vertex x : view.outside) {
    if (view.a_neighbors[x].empty()) return evaluate(g, a, {x});
  }

  std::vector<int> count(g.size(), 0);
  for (Vertex center : a.members()) {
    std::vector<std::pair<Weight, Vertex>> ranked;
    for (Vertex u : g.neighbors(center)) {
      if (a.contains(u)) continue;
      ranked.emplace_back(contribution(g, a, u, center), u);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return l.second < r.second;
    });
    std::vector<Weight> suffix(ranked.size() + 1, Weight(0));
    for (std::size_t i = ranked.size(); i-- > 0;) suffix[i] = suffix[i + 1] + g.weight_sq(ranked[i].second);

    VertexSet talons;
    Weight talons_sq = 0;
    Weight displaced_sq = 0;
    std::optional<ImprovementCandidate> found;

    auto dfs = [&](auto&& self, std::size_t from) -> bool {
      if (!talons.empty() && talons_sq > displaced_sq) {
        found = evaluate(g, a, talons);
        return true;
      }
      for (std::size_t i = from; i < ranked.size(); ++i) {
        if (talons_sq + suffix[i] <= displaced_sq) return false;
        Vertex u = ranked[i].second;
        bool independent = std::none_of(talons.begin(), talons.end(), [&](Vertex t) { return g.adjacent(t, u); });
        if (!independent) continue;
        talons.push_back(u);
        talons_sq += g.weight_sq(u);
        for (Vertex y : view.a_neighbors[u]) {
          if (count[y]++ == 0) displaced_sq += g.weight_sq(y);
        }
        bool hit = self(self, i + 1);
        for (Vertex y : view.a_neighbors[u]) {
          if (--count[y] == 0) displaced_sq -= g.weight_sq(y);
        }
        talons_sq -= g.weight_sq(u);
        talons.pop_back();
        if (hit) return true;
      }
      return false;
    };
    if (dfs(dfs, 0)) return found;
  }
  return std::nullopt;
}

}  // namespace setpack
