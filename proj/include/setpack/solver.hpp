#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "setpack/conflict.hpp"
#include "setpack/constants.hpp"
#include "setpack/improve_basic.hpp"
#include "setpack/improve_circular.hpp"
#include "setpack/improve_unweighted.hpp"
#include "setpack/instance.hpp"
#include "setpack/mis_engine.hpp"

namespace setpack {

struct SolverConfig {
  Weight eps;
  Weight kappa;
  // Scaling slack; unset runs on the exact input weights.
  std::optional<Weight> delta;
  std::size_t max_small_size = 3;
  std::string mis_engine = "swap:2";
  std::optional<std::uint64_t> iteration_cap;
  CircularSearchOptions circular;

  static SolverConfig defaults(int k) {
    SolverConfig c;
    c.eps = constants_for(k).eps;
    c.kappa = kappa_for(c.eps);
    return c;
  }

  void validate() const {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    check_kappa(kappa);
    if (delta && *delta <= 0) throw std::invalid_argument("delta must be positive");
  }
};

enum class ImprovementKind { none, small, claw, circular, blackbox };

inline const char* to_string(ImprovementKind kind) {
  switch (kind) {
    case ImprovementKind::none: return "none";
    case ImprovementKind::small: return "small";
    case ImprovementKind::claw: return "claw";
    case ImprovementKind::circular: return "circular";
    case ImprovementKind::blackbox: return "blackbox";
  }
  return "?";
}

struct IterationRecord {
  ImprovementKind kind = ImprovementKind::none;
  Weight gain;
  Weight weight;     // w(A) after the iteration
  Weight weight_sq;  // w^2(A) after the iteration
};

struct RunTrace {
  std::vector<IterationRecord> iterations;

  // w^2(A) rises strictly on every iteration but the last.
  bool potential_increasing() const {
    Weight previous = 0;
    for (std::size_t i = 0; i < iterations.size(); ++i) {
      const auto& it = iterations[i];
      bool last = i + 1 == iterations.size();
      if (last) return it.kind == ImprovementKind::none && it.weight_sq == previous;
      if (it.kind == ImprovementKind::none || it.weight_sq <= previous) return false;
      previous = it.weight_sq;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Scaling and truncation

struct ScaledInstance {
  Instance instance;
  Weight factor;    // scaled weight = floor(factor * original weight)
  BigInt levels;    // N = ceil(1/delta + 1)
  std::vector<std::string> removed;  // truncated to zero
  std::vector<std::string> greedy;   // the reference packing A'
};

/// Greedy packing by decreasing weight (ties by set order).
inline std::vector<std::string> greedy_packing(const Instance& instance) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return instance[a].weight > instance[b].weight; });
  std::unordered_set<std::string> used;
  std::vector<std::string> picked;
  for (std::size_t i : order) {
    const auto& s = instance[i];
    if (std::any_of(s.elements.begin(), s.elements.end(), [&](const auto& e) { return used.count(e) > 0; })) continue;
    used.insert(s.elements.begin(), s.elements.end());
    picked.push_back(s.id);
  }
  return picked;
}

/// Rescales so the greedy packing weighs N |S| with N = ceil(1/delta + 1),
/// floors every weight and drops sets that fall to zero.
inline ScaledInstance scale_and_truncate(const Instance& instance, const Weight& delta) {
  if (instance.empty()) throw std::invalid_argument("cannot scale an empty instance");
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  ScaledInstance out{Instance(instance.k(), {}), 0, ceil_of(1 / delta + 1), {}, greedy_packing(instance)};
  Weight greedy_weight = instance.total_weight(out.greedy);
  out.factor = Weight(out.levels) * static_cast<std::int64_t>(instance.size()) / greedy_weight;

  std::vector<WeightedSet> kept;
  for (const auto& s : instance.sets()) {
    BigInt w = floor_of(s.weight * out.factor);
    if (w == 0) {
      out.removed.push_back(s.id);
      continue;
    }
    kept.push_back({s.id, s.elements, Weight(w)});
  }
  out.instance = Instance(instance.k(), std::move(kept));
  return out;
}

/// k^2 (1/delta + 2)^2 |S|^2 + 1, rounded down.
inline BigInt iteration_bound(int k, const Weight& delta, std::size_t num_sets) {
  Weight s = static_cast<std::int64_t>(num_sets);
  Weight b = Weight(k) * k * square(1 / delta + 2) * s * s + 1;
  return floor_of(b);
}

// ---------------------------------------------------------------------------
// Iterations

struct IterationOutcome {
  ImprovementKind kind = ImprovementKind::none;
  std::optional<ImprovementCandidate> applied;
};

/// Tries small, claw-shaped, circular and black-box improvements in that
/// order and applies the first one found.
inline IterationOutcome run_iteration(const ConflictGraph& g, Solution& a, const SolverConfig& config,
                                      const MisEngine& engine) {
  auto take = [&](ImprovementKind kind, ImprovementCandidate c) {
    a.apply(c.vertices);
    return IterationOutcome{kind, std::move(c)};
  };
  if (auto c = find_small_improvement(g, a, config.max_small_size)) return take(ImprovementKind::small, *c);
  if (auto c = find_claw_shaped_improvement(g, a)) return take(ImprovementKind::claw, *c);
  if (auto c = find_circular_improvement(g, a, config.kappa, config.circular)) {
    return take(ImprovementKind::circular, evaluate(g, a, c->vertices()));
  }
  HelpfulClassification help = classify_helpful(g, a, config.eps);
  if (auto c = black_box_sweep(g, a, help, engine)) return take(ImprovementKind::blackbox, *c);
  return {};
}

class IterationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveResult {
  std::vector<std::string> ids;
  Weight weight;          // in the input weights
  Weight working_weight;  // in the weights the search ran on (scaled or not)
  std::uint64_t iterations = 0;
  RunTrace trace;
  std::optional<ScaledInstance> scaled;
};

inline std::uint64_t default_iteration_cap(const Instance& instance, const SolverConfig& config) {
  Weight delta = config.delta ? *config.delta : Weight(1, 10);
  BigInt cap = 10 * iteration_bound(instance.k(), delta, instance.size());
  BigInt limit = std::numeric_limits<std::uint64_t>::max() / 2;
  return (cap > limit ? limit : cap).convert_to<std::uint64_t>();
}

/// Starts from the empty packing and iterates until no improvement is found.
inline SolveResult solve(const Instance& instance, const SolverConfig& config, const MisEngine& engine) {
  config.validate();
  SolveResult result;
  const Instance* working = &instance;
  if (config.delta) {
    result.scaled = scale_and_truncate(instance, *config.delta);
    working = &result.scaled->instance;
  }
  const std::uint64_t cap = config.iteration_cap ? *config.iteration_cap : default_iteration_cap(instance, config);

  ConflictGraph g = ConflictGraph::build(*working);
  Solution a(g);
  for (;;) {
    if (result.iterations >= cap) {
      throw IterationCapError("iteration cap " + std::to_string(cap) + " exceeded");
    }
    ++result.iterations;
    IterationOutcome out = run_iteration(g, a, config, engine);
    result.trace.iterations.push_back(
        {out.kind, out.applied ? out.applied->gain : Weight(0), a.weight(), a.weight_sq()});
    if (out.kind == ImprovementKind::none) break;
  }
  result.ids = g.ids_of(a.members());
  result.working_weight = a.weight();
  result.weight = instance.total_weight(result.ids);
  return result;
}

inline SolveResult solve(const Instance& instance, const SolverConfig& config,
                         const std::optional<std::vector<std::string>>& planted = {}) {
  auto engine = make_mis_engine(config.mis_engine, planted);
  return solve(instance, config, *engine);
}

}  // namespace setpack
