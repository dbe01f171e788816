#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/improve_basic.hpp"
#include "setpack/rational.hpp"

namespace setpack {

// Edge {n(u), n2(u)} induced by a vertex u outside A with |N(u, A)| >= 2.
struct AuxiliaryEdge {
  Vertex inducer = -1;
  Vertex first = -1;   // n(u)
  Vertex second = -1;  // n2(u)

  Vertex other(Vertex end) const { return end == first ? second : first; }
};

// Multigraph on A; parallel edges are kept.
struct AuxiliaryGraph {
  std::vector<AuxiliaryEdge> edges;
  std::map<Vertex, std::vector<std::size_t>> incident;

  std::size_t degree(Vertex v) const {
    auto it = incident.find(v);
    return it == incident.end() ? 0 : it->second.size();
  }
};

inline AuxiliaryGraph build_auxiliary(const ConflictGraph& g, const Solution& a) {
  AuxiliaryGraph aux;
  for (Vertex u = 0; u < static_cast<Vertex>(g.size()); ++u) {
    if (a.contains(u)) continue;
    VertexSet nb = neighborhood(g, u, a);
    if (nb.size() < 2) continue;
    HeaviestNeighbors h = heaviest_neighbors(g, nb);
    aux.incident[h.first].push_back(aux.edges.size());
    aux.incident[h.second].push_back(aux.edges.size());
    aux.edges.push_back({u, h.first, h.second});
  }
  return aux;
}

// U (cycle inducers, in cycle order) and the talon sets Y_v.
struct CircularCandidate {
  VertexSet cycle;
  std::map<Vertex, VertexSet> talons;

  VertexSet vertices() const {
    VertexSet x = cycle;
    for (const auto& [v, y] : talons) x.insert(x.end(), y.begin(), y.end());
    normalize(x);
    return x;
  }
};

class CircularStructureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void check_kappa(const Weight& kappa) {
  if (kappa <= 0 || kappa >= 1 || boost::multiprecision::numerator(kappa) != 1) {
    throw std::invalid_argument("kappa must be 1/q for an integer q >= 2, got " + format_weight(kappa));
  }
}

/// floor((8 / kappa) * ln |V|), the longest admissible cycle.
inline std::size_t cycle_length_bound(const Weight& kappa, std::size_t num_vertices) {
  check_kappa(kappa);
  if (num_vertices < 2) return 0;
  long double inv = static_cast<long double>(boost::multiprecision::denominator(kappa).convert_to<std::uint64_t>());
  return static_cast<std::size_t>(std::floor(8.0L * inv * std::log(static_cast<long double>(num_vertices))));
}

namespace detail {

// Half the per-node term of the edge inequality: for x with n(x) = v,
// w^2(x) - w^2(N(x, A) \ {v}).
inline Weight talon_margin(const ConflictGraph& g, const Solution& a, Vertex x, Vertex v) {
  VertexSet nb = neighborhood(g, x, a);
  return g.weight_sq(x) - (g.weight_sq_of(nb) - g.weight_sq(v));
}

// Left side minus right side of the edge inequality for inducer u.
inline Weight edge_slack(const ConflictGraph& g, const Solution& a, Vertex u, Vertex n1, Vertex n2,
                         const Weight& talon_term_n1, const Weight& talon_term_n2) {
  VertexSet nb = neighborhood(g, u, a);
  Weight rest = g.weight_sq_of(nb) - g.weight_sq(n1) - g.weight_sq(n2);
  return g.weight_sq(u) - (g.weight_sq(n1) + g.weight_sq(n2)) / 2 - rest + talon_term_n1 + talon_term_n2;
}

}  // namespace detail

/// Checks the three defining conditions exactly, plus the length bound.
/// An empty candidate is rejected. Inducers that do not close a cycle, talons
/// inside A or talons filed under the wrong node throw CircularStructureError.
inline bool verify_circular(const ConflictGraph& g, const Solution& a, const CircularCandidate& cand,
                            const Weight& kappa) {
  if (cand.cycle.empty()) return false;
  if (cand.cycle.size() > cycle_length_bound(kappa, g.size())) return false;

  // Condition 1: the inducers' edges form one cycle.
  std::vector<AuxiliaryEdge> edges;
  std::map<Vertex, int> degree;
  for (Vertex u : cand.cycle) {
    if (a.contains(u)) throw CircularStructureError("cycle inducer '" + g.id(u) + "' lies in the solution");
    VertexSet nb = neighborhood(g, u, a);
    if (nb.size() < 2) throw CircularStructureError("cycle inducer '" + g.id(u) + "' has fewer than two solution neighbours");
    HeaviestNeighbors h = heaviest_neighbors(g, nb);
    edges.push_back({u, h.first, h.second});
    ++degree[h.first];
    ++degree[h.second];
  }
  for (const auto& [v, d] : degree) {
    if (d != 2) throw CircularStructureError("inducers do not form a cycle");
  }
  {
    // Connectivity of the edge multiset.
    std::map<Vertex, std::vector<Vertex>> adj;
    for (const auto& e : edges) {
      adj[e.first].push_back(e.second);
      adj[e.second].push_back(e.first);
    }
    std::vector<Vertex> stack{edges.front().first};
    std::map<Vertex, bool> seen{{edges.front().first, true}};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (seen.size() != degree.size()) throw CircularStructureError("inducers do not form a single cycle");
    if (edges.size() != degree.size()) throw CircularStructureError("inducers do not form a cycle");
  }

  // Condition 2: X = U + disjoint Y_v, with Y_v = {x in X \ U : n(x) = v}.
  VertexSet cycle_sorted = cand.cycle;
  normalize(cycle_sorted);
  if (cycle_sorted.size() != cand.cycle.size()) throw CircularStructureError("repeated cycle inducer");
  VertexSet seen_talons;
  for (const auto& [v, ys] : cand.talons) {
    if (!degree.count(v)) {
      if (ys.empty()) continue;
      throw CircularStructureError("talons filed under '" + g.id(v) + "', which is not on the cycle");
    }
    for (Vertex x : ys) {
      if (a.contains(x)) throw CircularStructureError("talon '" + g.id(x) + "' lies in the solution");
      if (contains(cycle_sorted, x)) throw CircularStructureError("talon '" + g.id(x) + "' is also an inducer");
      if (heaviest_neighbors(g, a, x).first != v) {
        throw CircularStructureError("talon '" + g.id(x) + "' is filed under a node other than its heaviest neighbour");
      }
      if (contains(seen_talons, x)) throw CircularStructureError("talon '" + g.id(x) + "' repeated");
      seen_talons.insert(std::lower_bound(seen_talons.begin(), seen_talons.end(), x), x);
    }
  }
  VertexSet x = cand.vertices();
  if (!g.is_independent(x)) return false;

  // Condition 3, edge by edge.
  std::map<Vertex, Weight> talon_term;
  for (const auto& [v, d] : degree) {
    Weight term = 0;
    auto it = cand.talons.find(v);
    if (it != cand.talons.end()) {
      for (Vertex t : it->second) term += detail::talon_margin(g, a, t, v);
    }
    talon_term[v] = term / 2;
  }
  for (const auto& e : edges) {
    if (detail::edge_slack(g, a, e.inducer, e.first, e.second, talon_term[e.first], talon_term[e.second]) <= 0) {
      return false;
    }
  }
  return true;
}

struct CircularSearchOptions {
  // Upper limit on cycles examined; the search is exhaustive below it.
  std::uint64_t max_cycles = 2'000'000;
};

struct CircularSearchStats {
  std::uint64_t cycles_examined = 0;
  std::size_t length_bound = 0;
  std::size_t usable_edges = 0;
  bool exhausted = true;  // false if max_cycles cut the enumeration short
};

/// Searches the auxiliary graph for a cycle (length within the bound) whose
/// edges can all satisfy the edge inequality, then fills each Y_v greedily by
/// decreasing margin while X stays independent. Every returned candidate has
/// passed verify_circular and is a local improvement.
inline std::optional<CircularCandidate> find_circular_improvement(const ConflictGraph& g, const Solution& a,
                                                                  const Weight& kappa,
                                                                  const CircularSearchOptions& opts = {},
                                                                  CircularSearchStats* stats = nullptr) {
  check_kappa(kappa);
  CircularSearchStats local_stats;
  CircularSearchStats& st = stats ? *stats : local_stats;
  st = {};
  st.length_bound = cycle_length_bound(kappa, g.size());
  if (st.length_bound < 2) return std::nullopt;

  AuxiliaryGraph aux = build_auxiliary(g, a);

  // Positive-margin talon candidates per node, best first.
  std::map<Vertex, std::vector<std::pair<Weight, Vertex>>> pool;
  std::map<Vertex, Weight> best_term;
  for (Vertex x = 0; x < static_cast<Vertex>(g.size()); ++x) {
    if (a.contains(x)) continue;
    Vertex v = heaviest_neighbors(g, a, x).first;
    if (v < 0) continue;
    Weight m = detail::talon_margin(g, a, x, v);
    if (m > 0) pool[v].emplace_back(std::move(m), x);
  }
  for (auto& [v, cands] : pool) {
    std::sort(cands.begin(), cands.end(), [](const auto& l, const auto& r) {
      if (l.first != r.first) return l.first > r.first;
      return l.second < r.second;
    });
    Weight sum = 0;
    for (const auto& c : cands) sum += c.first;
    best_term[v] = sum / 2;
  }
  auto term = [&](Vertex v) -> Weight {
    auto it = best_term.find(v);
    return it == best_term.end() ? Weight(0) : it->second;
  };

  // Edges that could satisfy the inequality with the most favourable talons.
  std::vector<bool> usable(aux.edges.size(), false);
  std::map<Vertex, std::vector<std::size_t>> usable_at;
  for (std::size_t i = 0; i < aux.edges.size(); ++i) {
    const auto& e = aux.edges[i];
    if (detail::edge_slack(g, a, e.inducer, e.first, e.second, term(e.first), term(e.second)) > 0) {
      usable[i] = true;
      ++st.usable_edges;
      usable_at[e.first].push_back(i);
      usable_at[e.second].push_back(i);
    }
  }

  auto build_candidate = [&](const std::vector<std::size_t>& cycle_edges) -> std::optional<CircularCandidate> {
    CircularCandidate cand;
    VertexSet nodes;
    for (std::size_t i : cycle_edges) {
      cand.cycle.push_back(aux.edges[i].inducer);
      nodes.push_back(aux.edges[i].first);
      nodes.push_back(aux.edges[i].second);
    }
    normalize(nodes);
    VertexSet x = cand.cycle;
    normalize(x);
    for (Vertex v : nodes) {
      auto it = pool.find(v);
      if (it == pool.end()) continue;
      VertexSet& ys = cand.talons[v];
      for (const auto& [margin, t] : it->second) {
        if (contains(x, t)) continue;
        if (std::any_of(x.begin(), x.end(), [&](Vertex y) { return g.adjacent(y, t); })) continue;
        ys.push_back(t);
        x.insert(std::lower_bound(x.begin(), x.end(), t), t);
      }
      normalize(ys);
    }
    if (verify_circular(g, a, cand, kappa) && is_local_improvement(g, a, cand.vertices())) return cand;
    return std::nullopt;
  };

  std::optional<CircularCandidate> found;
  std::vector<std::size_t> path_edges;
  VertexSet inducers;
  std::map<Vertex, bool> on_path;

  // Simple cycles whose smallest node is `start`; each cycle is visited once
  // per direction at most.
  auto dfs = [&](auto&& self, Vertex start, Vertex at) -> bool {
    if (st.cycles_examined >= opts.max_cycles) {
      st.exhausted = false;
      return true;
    }
    for (std::size_t i : usable_at[at]) {
      const AuxiliaryEdge& e = aux.edges[i];
      if (!path_edges.empty() && i == path_edges.back()) continue;
      Vertex next = e.other(at);
      if (next < start) continue;
      Vertex u = e.inducer;
      if (contains(inducers, u)) continue;
      if (std::any_of(inducers.begin(), inducers.end(), [&](Vertex w) { return g.adjacent(w, u); })) continue;
      if (next == start) {
        // Closing edge. Orient length >= 3 cycles by their first and last
        // edge index so each is examined once.
        if (path_edges.size() >= 2 && path_edges.front() > i) continue;
        if (path_edges.size() == 1 && path_edges.front() > i) continue;
        path_edges.push_back(i);
        ++st.cycles_examined;
        found = build_candidate(path_edges);
        path_edges.pop_back();
        if (found) return true;
        continue;
      }
      if (on_path[next]) continue;
      if (path_edges.size() + 1 >= st.length_bound) continue;
      path_edges.push_back(i);
      inducers.insert(std::lower_bound(inducers.begin(), inducers.end(), u), u);
      on_path[next] = true;
      bool stop = self(self, start, next);
      on_path[next] = false;
      inducers.erase(std::lower_bound(inducers.begin(), inducers.end(), u));
      path_edges.pop_back();
      if (stop) return true;
    }
    return false;
  };

  for (const auto& [start, incident] : usable_at) {
    on_path.clear();
    on_path[start] = true;
    if (dfs(dfs, start, start)) break;
  }
  return found;
}

}  // namespace setpack
