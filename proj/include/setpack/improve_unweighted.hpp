#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/improve_basic.hpp"
#include "setpack/mis_engine.hpp"
#include "setpack/rational.hpp"

namespace setpack {

// help(u) for every u outside A and its inverse help(v) for v in A.
struct HelpfulClassification {
  Weight eps;
  std::vector<VertexSet> help_of;        // indexed by vertex; empty for members of A
  std::map<Vertex, VertexSet> helped_by;  // v in A -> {u : v in help(u)}
  VertexSet helpful;                     // V_help

  const VertexSet& help(Vertex u) const { return help_of[u]; }

  const VertexSet& helpers(Vertex v) const {
    static const VertexSet empty;
    auto it = helped_by.find(v);
    return it == helped_by.end() ? empty : it->second;
  }
};

/// Which of n(u), n2(u) the vertex u outside A is helpful for, given
/// N(u, A). Empty when u is helpful for nobody.
inline VertexSet helpful_targets(const ConflictGraph& g, Vertex u, const VertexSet& nb, const Weight& eps) {
  if (nb.empty()) return {};
  HeaviestNeighbors h = heaviest_neighbors(g, nb);
  const Weight& wu = g.weight(u);
  const Weight& w1 = g.weight(h.first);
  const Weight total = g.weight_of(nb);
  const Weight one_plus = 1 + eps;

  VertexSet out;
  // Degree-one shape: n(u) close to u, everything else negligible.
  if (w1 <= one_plus * wu && total - w1 <= eps * wu) out.push_back(h.first);
  // Degree-two shape: n(u), n2(u) close to u and to each other.
  if (h.second >= 0) {
    const Weight& w2 = g.weight(h.second);
    if (w1 <= one_plus * w2 && w2 <= w1 && w1 <= one_plus * wu && total - w1 - w2 <= eps * wu) {
      out.push_back(h.first);
      out.push_back(h.second);
    }
  }
  normalize(out);
  return out;
}

inline HelpfulClassification classify_helpful(const ConflictGraph& g, const Solution& a, const Weight& eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  HelpfulClassification c;
  c.eps = eps;
  c.help_of.assign(g.size(), {});
  for (Vertex u = 0; u < static_cast<Vertex>(g.size()); ++u) {
    if (a.contains(u)) continue;
    c.help_of[u] = helpful_targets(g, u, neighborhood(g, u, a), eps);
    if (c.help_of[u].empty()) continue;
    c.helpful.push_back(u);
    for (Vertex v : c.help_of[u]) c.helped_by[v].push_back(u);
  }
  return c;
}

// V_{>=L} for one weight threshold L.
struct SubInstance {
  Weight threshold;
  VertexSet solution_part;  // A_{>=L}
  VertexSet vertices;       // V_{>=L}
};

/// Distinct vertex weights, descending.
inline std::vector<Weight> distinct_weights_desc(const ConflictGraph& g) {
  std::vector<Weight> ws;
  for (Vertex v = 0; v < static_cast<Vertex>(g.size()); ++v) ws.push_back(g.weight(v));
  std::sort(ws.begin(), ws.end(), std::greater<>());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

inline SubInstance sub_instance(const ConflictGraph& g, const Solution& a, const HelpfulClassification& c,
                                const Weight& threshold) {
  SubInstance s;
  s.threshold = threshold;
  for (Vertex v : a.members()) {
    if (g.weight(v) >= threshold) s.solution_part.push_back(v);
  }
  s.vertices = s.solution_part;
  for (Vertex u : c.helpful) {
    if (g.weight(u) < threshold) continue;
    const VertexSet& targets = c.help(u);
    bool inside = std::all_of(targets.begin(), targets.end(), [&](Vertex v) { return g.weight(v) >= threshold; });
    if (inside) s.vertices.push_back(u);
  }
  normalize(s.vertices);
  return s;
}

/// One sub-instance per distinct weight, thresholds descending.
inline std::vector<SubInstance> sub_instance_family(const ConflictGraph& g, const Solution& a,
                                                    const HelpfulClassification& c) {
  std::vector<SubInstance> family;
  for (const Weight& threshold : distinct_weights_desc(g)) family.push_back(sub_instance(g, a, c, threshold));
  return family;
}

class EngineOutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// For every threshold L (descending): hand G[V_{>=L}] without weights to the
/// engine, drop A from its answer and test every prefix X^{<=U} (U ascending)
/// against the full A. Returns the first improvement.
inline std::optional<ImprovementCandidate> black_box_sweep(const ConflictGraph& g, const Solution& a,
                                                           const HelpfulClassification& c, const MisEngine& engine) {
  const std::vector<Weight> thresholds = distinct_weights_desc(g);
  std::vector<Weight> uppers(thresholds.rbegin(), thresholds.rend());
  for (const Weight& lower : thresholds) {
    SubInstance s = sub_instance(g, a, c, lower);
    if (s.vertices.empty()) continue;
    ConflictGraph sub = g.induced(s.vertices);
    UnweightedGraph stripped = strip_weights(sub);
    VertexSet local = engine.solve(stripped);
    normalize(local);
    if (!stripped.is_independent(local)) {
      throw EngineOutputError("MIS engine '" + engine.name() + "' returned a dependent set");
    }
    VertexSet x;
    for (Vertex l : local) {
      Vertex v = sub.origin(l);
      if (!a.contains(v)) x.push_back(v);
    }
    normalize(x);
    if (x.empty()) continue;

    std::size_t last_size = 0;
    for (const Weight& upper : uppers) {
      VertexSet prefix;
      for (Vertex v : x) {
        if (g.weight(v) <= upper) prefix.push_back(v);
      }
      if (prefix.empty() || prefix.size() == last_size) continue;
      last_size = prefix.size();
      ImprovementCandidate cand = evaluate(g, a, prefix);
      if (cand.improves()) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace setpack
