#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/oracle.hpp"

namespace setpack {

// What an unweighted engine gets to see: ids, adjacency and the set
// realization of an induced sub-instance, with the weights dropped.
struct UnweightedGraph {
  std::vector<Vertex> origin;                // index in the parent graph
  std::vector<std::string> ids;
  std::vector<VertexSet> adjacency;          // local indices
  std::vector<std::vector<int>> elements;

  std::size_t size() const { return ids.size(); }

  bool adjacent(Vertex u, Vertex v) const { return contains(adjacency[u], v); }

  bool is_independent(const VertexSet& vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (adjacent(vs[i], vs[j])) return false;
      }
    }
    return true;
  }
};

inline UnweightedGraph strip_weights(const ConflictGraph& g) {
  UnweightedGraph u;
  for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) {
    u.origin.push_back(g.origin(v));
    u.ids.push_back(g.id(v));
    u.adjacency.push_back(g.neighbors(v));
    u.elements.emplace_back(g.elements(v).begin(), g.elements(v).end());
  }
  return u;
}

// Unweighted independent set (equivalently unweighted k-Set Packing) black box.
class MisEngine {
 public:
  virtual ~MisEngine() = default;
  virtual std::string name() const = 0;
  // Returns local vertex indices of an independent set of `g`.
  virtual VertexSet solve(const UnweightedGraph& g) const = 0;
};

// Repeatedly takes a vertex of minimum degree in the remaining graph.
class GreedyMinDegree : public MisEngine {
 public:
  std::string name() const override { return "greedy"; }

  VertexSet solve(const UnweightedGraph& g) const override {
    const std::size_t n = g.size();
    std::vector<bool> alive(n, true);
    std::vector<std::size_t> degree(n);
    for (std::size_t v = 0; v < n; ++v) degree[v] = g.adjacency[v].size();
    VertexSet out;
    for (;;) {
      Vertex pick = -1;
      for (std::size_t v = 0; v < n; ++v) {
        if (alive[v] && (pick < 0 || degree[v] < degree[pick])) pick = static_cast<Vertex>(v);
      }
      if (pick < 0) break;
      out.push_back(pick);
      std::vector<Vertex> removed{pick};
      for (Vertex u : g.adjacency[pick]) {
        if (alive[u]) removed.push_back(u);
      }
      for (Vertex r : removed) alive[r] = false;
      for (Vertex r : removed) {
        for (Vertex u : g.adjacency[r]) {
          if (alive[u]) --degree[u];
        }
      }
    }
    normalize(out);
    return out;
  }
};

/// Greedy seed followed by t-swap local search: while some j <= t members can
/// be replaced by j + 1 non-members, do it. At termination no such swap exists.
class SwapLocalSearch : public MisEngine {
 public:
  explicit SwapLocalSearch(int t) : t_(t) {
    if (t < 0) throw std::invalid_argument("swap size must be non-negative");
  }

  std::string name() const override { return "swap:" + std::to_string(t_); }
  int t() const { return t_; }

  VertexSet solve(const UnweightedGraph& g) const override { return improve(g, GreedyMinDegree().solve(g)); }

  VertexSet improve(const UnweightedGraph& g, VertexSet current) const {
    const std::size_t n = g.size();
    std::vector<bool> member(n, false);
    for (Vertex v : current) member[v] = true;
    while (auto swap = find_swap(g, member)) {
      for (Vertex r : swap->first) member[r] = false;
      for (Vertex a : swap->second) member[a] = true;
    }
    VertexSet out;
    for (std::size_t v = 0; v < n; ++v) {
      if (member[v]) out.push_back(static_cast<Vertex>(v));
    }
    return out;
  }

 private:
  // (members to drop, vertices to add)
  std::optional<std::pair<VertexSet, VertexSet>> find_swap(const UnweightedGraph& g,
                                                           const std::vector<bool>& member) const {
    const std::size_t n = g.size();
    std::vector<VertexSet> hits(n);
    for (std::size_t v = 0; v < n; ++v) {
      if (member[v]) continue;
      for (Vertex u : g.adjacency[v]) {
        if (member[u]) hits[v].push_back(u);
      }
    }
    for (int j = 0; j <= t_; ++j) {
      VertexSet pool;
      for (std::size_t v = 0; v < n; ++v) {
        if (!member[v] && hits[v].size() <= static_cast<std::size_t>(j)) pool.push_back(static_cast<Vertex>(v));
      }
      VertexSet adding;
      VertexSet dropping;
      auto dfs = [&](auto&& self, std::size_t from) -> bool {
        if (adding.size() == static_cast<std::size_t>(j) + 1) return true;
        for (std::size_t i = from; i < pool.size(); ++i) {
          Vertex v = pool[i];
          if (std::any_of(adding.begin(), adding.end(), [&](Vertex a) { return g.adjacent(a, v); })) continue;
          VertexSet grown = set_union(dropping, hits[v]);
          if (grown.size() > static_cast<std::size_t>(j)) continue;
          VertexSet saved = std::move(dropping);
          dropping = std::move(grown);
          adding.push_back(v);
          if (self(self, i + 1)) return true;
          adding.pop_back();
          dropping = std::move(saved);
        }
        return false;
      };
      if (dfs(dfs, 0)) return std::make_pair(dropping, adding);
    }
    return std::nullopt;
  }

  int t_;
};

// Maximum independent set by branch and bound; refuses graphs above the cap.
class ExactMis : public MisEngine {
 public:
  explicit ExactMis(std::size_t size_cap = 40) : cap_(size_cap) {}

  std::string name() const override { return "exact"; }

  VertexSet solve(const UnweightedGraph& g) const override {
    if (g.size() > cap_) {
      throw CapacityError("exact MIS limited to " + std::to_string(cap_) + " vertices, got " +
                          std::to_string(g.size()));
    }
    std::vector<int> ones(g.size(), 1);
    return max_weight_independent_set(g.adjacency, ones).vertices;
  }

 private:
  std::size_t cap_;
};

// Test engine: returns a known packing restricted to the sub-instance.
class PlantedMis : public MisEngine {
 public:
  explicit PlantedMis(std::vector<std::string> ids) : ids_(ids.begin(), ids.end()) {}

  std::string name() const override { return "planted"; }

  VertexSet solve(const UnweightedGraph& g) const override {
    VertexSet out;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (ids_.count(g.ids[v])) out.push_back(static_cast<Vertex>(v));
    }
    return out;
  }

 private:
  std::set<std::string> ids_;
};

// Returns exactly the given vertices of the parent graph that survive in the
// sub-instance; used to model an engine that hands back the current solution.
class FixedOriginMis : public MisEngine {
 public:
  explicit FixedOriginMis(VertexSet origin_vertices) : vertices_(std::move(origin_vertices)) {}

  std::string name() const override { return "fixed"; }

  VertexSet solve(const UnweightedGraph& g) const override {
    VertexSet out;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (contains(vertices_, g.origin[v])) out.push_back(static_cast<Vertex>(v));
    }
    return out;
  }

 private:
  VertexSet vertices_;
};

/// "greedy", "swap:<t>", "exact" or "planted" (needs the planted ids).
inline std::unique_ptr<MisEngine> make_mis_engine(std::string_view spec,
                                                  const std::optional<std::vector<std::string>>& planted = {}) {
  if (spec == "greedy") return std::make_unique<GreedyMinDegree>();
  if (spec == "exact") return std::make_unique<ExactMis>();
  if (spec == "planted") {
    if (!planted) throw std::invalid_argument("planted engine needs a planted_solution in the instance");
    return std::make_unique<PlantedMis>(*planted);
  }
  if (spec.substr(0, 5) == "swap:") {
    std::string digits(spec.substr(5));
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw std::invalid_argument("bad swap size in '" + std::string(spec) + "'");
    }
    return std::make_unique<SwapLocalSearch>(std::stoi(digits));
  }
  throw std::invalid_argument("unknown MIS engine '" + std::string(spec) + "'");
}

}  // namespace setpack
