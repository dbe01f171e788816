#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "setpack/instance.hpp"
#include "setpack/rational.hpp"

namespace setpack {

using Vertex = std::int32_t;
// Sorted, duplicate-free.
using VertexSet = std::vector<Vertex>;

inline void normalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Conflict graph of a set family: one vertex per set, an edge for every
// non-empty intersection. Vertex indices follow the instance's set order,
// which is also the tie-breaking order everywhere downstream.
class ConflictGraph {
 public:
  static ConflictGraph build(const Instance& instance) {
    ConflictGraph g;
    g.k_ = instance.k();
    const std::size_t n = instance.size();
    g.ids_.reserve(n);
    g.weights_.reserve(n);
    g.elements_.resize(n);
    g.origin_.resize(n);
    std::unordered_map<std::string, int> element_index;
    std::vector<std::vector<Vertex>> incidence;
    for (std::size_t v = 0; v < n; ++v) {
      const WeightedSet& s = instance[v];
      g.ids_.push_back(s.id);
      g.weights_.push_back(s.weight);
      g.origin_[v] = static_cast<Vertex>(v);
      for (const auto& e : s.elements) {
        auto [it, inserted] = element_index.emplace(e, static_cast<int>(incidence.size()));
        if (inserted) incidence.emplace_back();
        incidence[it->second].push_back(static_cast<Vertex>(v));
        g.elements_[v].push_back(it->second);
      }
      std::sort(g.elements_[v].begin(), g.elements_[v].end());
    }
    g.num_elements_ = incidence.size();
    g.adjacency_.assign(n, {});
    for (const auto& holders : incidence) {
      for (std::size_t i = 0; i < holders.size(); ++i) {
        for (std::size_t j = i + 1; j < holders.size(); ++j) {
          g.adjacency_[holders[i]].push_back(holders[j]);
          g.adjacency_[holders[j]].push_back(holders[i]);
        }
      }
    }
    for (auto& a : g.adjacency_) normalize(a);
    g.finish();
    return g;
  }

  std::size_t size() const { return ids_.size(); }
  int k() const { return k_; }
  std::size_t num_elements() const { return num_elements_; }

  const std::string& id(Vertex v) const { return ids_[v]; }
  const Weight& weight(Vertex v) const { return weights_[v]; }
  const Weight& weight_sq(Vertex v) const { return weights_sq_[v]; }
  const VertexSet& neighbors(Vertex v) const { return adjacency_[v]; }
  std::span<const int> elements(Vertex v) const { return elements_[v]; }
  // Index of v in the graph this one was induced from (identity for built graphs).
  Vertex origin(Vertex v) const { return origin_[v]; }

  bool adjacent(Vertex u, Vertex v) const { return contains(adjacency_[u], v); }

  std::optional<Vertex> find(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
  }

  Vertex require(const std::string& id) const {
    auto v = find(id);
    if (!v) throw ValidationError("unknown set id '" + id + "'");
    return *v;
  }

  VertexSet vertices_of(const std::vector<std::string>& ids) const {
    VertexSet out;
    for (const auto& id : ids) out.push_back(require(id));
    normalize(out);
    return out;
  }

  std::vector<std::string> ids_of(const VertexSet& vs) const {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (Vertex v : vs) out.push_back(ids_[v]);
    return out;
  }

  Weight weight_of(const VertexSet& vs) const {
    Weight total = 0;
    for (Vertex v : vs) total += weights_[v];
    return total;
  }

  Weight weight_sq_of(const VertexSet& vs) const {
    Weight total = 0;
    for (Vertex v : vs) total += weights_sq_[v];
    return total;
  }

  bool is_independent(const VertexSet& vs) const {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        if (adjacent(vs[i], vs[j])) return false;
      }
    }
    return true;
  }

  /// Subgraph induced by `keep`; vertex i of the result is keep[i] here and
  /// origin() reports that index.
  ConflictGraph induced(const VertexSet& keep) const {
    ConflictGraph g;
    g.k_ = k_;
    g.num_elements_ = num_elements_;
    std::vector<Vertex> local(size(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<Vertex>(i);
    for (Vertex v : keep) {
      g.ids_.push_back(ids_[v]);
      g.weights_.push_back(weights_[v]);
      g.elements_.push_back(elements_[v]);
      g.origin_.push_back(v);
      VertexSet nb;
      for (Vertex u : adjacency_[v]) {
        if (local[u] >= 0) nb.push_back(local[u]);
      }
      g.adjacency_.push_back(std::move(nb));
    }
    g.finish();
    return g;
  }

  std::size_t num_edges() const {
    std::size_t twice = 0;
    for (const auto& a : adjacency_) twice += a.size();
    return twice / 2;
  }

 private:
  void finish() {
    weights_sq_.clear();
    weights_sq_.reserve(weights_.size());
    for (const auto& w : weights_) weights_sq_.push_back(square(w));
    by_id_.clear();
    for (std::size_t v = 0; v < ids_.size(); ++v) by_id_.emplace(ids_[v], static_cast<Vertex>(v));
  }

  int k_ = 0;
  std::size_t num_elements_ = 0;
  std::vector<std::string> ids_;
  std::vector<Weight> weights_;
  std::vector<Weight> weights_sq_;
  std::vector<std::vector<int>> elements_;
  std::vector<VertexSet> adjacency_;
  std::vector<Vertex> origin_;
  std::unordered_map<std::string, Vertex> by_id_;
};

// The current independent set A, with cached w(A), w^2(A) and an
// element -> owning member index.
class Solution {
 public:
  explicit Solution(const ConflictGraph& graph)
      : graph_(&graph), member_(graph.size(), false), owner_(graph.num_elements(), -1) {}

  Solution(const ConflictGraph& graph, const VertexSet& vs) : Solution(graph) {
    for (Vertex v : vs) insert(v);
  }

  const ConflictGraph& graph() const { return *graph_; }
  bool contains(Vertex v) const { return member_[v]; }
  const VertexSet& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const Weight& weight() const { return weight_; }
  const Weight& weight_sq() const { return weight_sq_; }

  // Member holding element e, or -1.
  Vertex owner(int e) const { return owner_[e]; }

  void insert(Vertex v) {
    if (member_[v]) return;
    for (int e : graph_->elements(v)) {
      if (owner_[e] >= 0) {
        throw std::logic_error("inserting '" + graph_->id(v) + "' breaks independence with '" +
                               graph_->id(owner_[e]) + "'");
      }
    }
    for (int e : graph_->elements(v)) owner_[e] = v;
    member_[v] = true;
    members_.insert(std::lower_bound(members_.begin(), members_.end(), v), v);
    weight_ += graph_->weight(v);
    weight_sq_ += graph_->weight_sq(v);
  }

  void erase(Vertex v) {
    if (!member_[v]) return;
    for (int e : graph_->elements(v)) owner_[e] = -1;
    member_[v] = false;
    members_.erase(std::lower_bound(members_.begin(), members_.end(), v));
    weight_ -= graph_->weight(v);
    weight_sq_ -= graph_->weight_sq(v);
  }

  /// A <- (A \ N(X, A)) u X.
  void apply(const VertexSet& x);

  bool caches_consistent() const {
    return weight_ == graph_->weight_of(members_) && weight_sq_ == graph_->weight_sq_of(members_) &&
           graph_->is_independent(members_);
  }

  bool is_maximal() const {
    for (Vertex v = 0; v < static_cast<Vertex>(graph_->size()); ++v) {
      if (member_[v]) continue;
      bool blocked = false;
      for (int e : graph_->elements(v)) {
        if (owner_[e] >= 0) {
          blocked = true;
          break;
        }
      }
      if (!blocked) return false;
    }
    return true;
  }

 private:
  const ConflictGraph* graph_;
  std::vector<bool> member_;
  VertexSet members_;
  std::vector<Vertex> owner_;
  Weight weight_ = 0;
  Weight weight_sq_ = 0;
};

/// N(X, A) = (X n A) u {u in A : u adjacent to some x in X}, by adjacency scan.
inline VertexSet neighborhood(const ConflictGraph& g, const VertexSet& x, const Solution& a) {
  VertexSet out;
  for (Vertex v : x) {
    if (a.contains(v)) out.push_back(v);
    for (Vertex u : g.neighbors(v)) {
      if (a.contains(u)) out.push_back(u);
    }
  }
  normalize(out);
  return out;
}

inline VertexSet neighborhood(const ConflictGraph& g, Vertex v, const Solution& a) {
  return neighborhood(g, VertexSet{v}, a);
}

/// Same set as neighborhood(), computed through the solution's element owners.
inline VertexSet neighborhood_by_elements(const ConflictGraph& g, const VertexSet& x, const Solution& a) {
  VertexSet out;
  for (Vertex v : x) {
    for (int e : g.elements(v)) {
      if (Vertex o = a.owner(e); o >= 0) out.push_back(o);
    }
  }
  normalize(out);
  return out;
}

inline void Solution::apply(const VertexSet& x) {
  for (Vertex u : neighborhood_by_elements(*graph_, x, *this)) erase(u);
  for (Vertex v : x) insert(v);
}

/// N(v, S) for an arbitrary vertex set S (members of S adjacent to v, plus v itself if v in S).
inline VertexSet neighbors_in(const ConflictGraph& g, Vertex v, const VertexSet& s) {
  VertexSet out;
  if (contains(s, v)) out.push_back(v);
  for (Vertex u : g.neighbors(v)) {
    if (contains(s, u)) out.push_back(u);
  }
  normalize(out);
  return out;
}

/// Largest number of pairwise non-adjacent neighbours of a single vertex.
inline std::size_t max_claw_degree(const ConflictGraph& g) {
  std::size_t best = 0;
  for (Vertex c = 0; c < static_cast<Vertex>(g.size()); ++c) {
    const VertexSet& nb = g.neighbors(c);
    VertexSet chosen;
    auto grow = [&](auto&& self, std::size_t from) -> void {
      best = std::max(best, chosen.size());
      for (std::size_t i = from; i < nb.size(); ++i) {
        bool ok = true;
        for (Vertex t : chosen) {
          if (g.adjacent(t, nb[i])) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        chosen.push_back(nb[i]);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    grow(grow, 0);
  }
  return best;
}

/// True iff no vertex has d pairwise non-adjacent neighbours.
inline bool is_claw_free(const ConflictGraph& g, std::size_t d) { return max_claw_degree(g) < d; }

}  // namespace setpack
