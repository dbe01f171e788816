#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "setpack/conflict.hpp"
#include "setpack/constants.hpp"
#include "setpack/improve_basic.hpp"
#include "setpack/improve_unweighted.hpp"
#include "setpack/rational.hpp"

namespace setpack {

// Per solution vertex v in A.
struct SolutionVertexReport {
  std::size_t optimum_neighbors = 0;  // |N(v, A*)|
  std::size_t missing = 0;            // k - |N(v, A*)|
  std::size_t helpful_in_optimum = 0;  // |help(v) n A*|
  VertexSet special_neighbors;        // at most one once no claw improves A
};

// Per optimum vertex u in A*.
struct OptimumVertexReport {
  VertexSet solution_neighbors;  // N(u, A)
  Vertex heaviest = -1;          // n(u)
  Weight charge;                 // charge(u, n(u))
  std::map<Vertex, Weight> contributions;  // contr(u, v), v in N(u, A)
  VertexSet help;
  std::optional<Vertex> special_for;
  VertexSet support;
};

struct AnalysisReport {
  int k = 0;
  Weight eps;
  Weight solution_weight;
  std::map<Vertex, SolutionVertexReport> solution;
  std::map<Vertex, OptimumVertexReport> optimum;
  VertexSet a_prime;
  std::map<Vertex, Vertex> special_of;  // t(v) for v in A'
};

inline constexpr int kSpecialNumerator = 5;
inline constexpr int kSpecialDenominator = 8;

/// Missing, helpful, special and support classification of A against A*.
/// u and v are special neighbours when v = n(u), v is not in help(u) and
/// contr(u, v) > 5/8 w(v).
inline AnalysisReport classify(const ConflictGraph& g, const Solution& a, const VertexSet& optimum, const Weight& eps) {
  if (!g.is_independent(optimum)) throw std::invalid_argument("optimum is not independent");
  AnalysisReport r;
  r.k = g.k();
  r.eps = eps;
  r.solution_weight = a.weight();
  HelpfulClassification help = classify_helpful(g, a, eps);
  const Weight special_ratio(kSpecialNumerator, kSpecialDenominator);

  for (Vertex v : a.members()) {
    SolutionVertexReport s;
    s.optimum_neighbors = neighbors_in(g, v, optimum).size();
    s.missing = static_cast<std::size_t>(std::max<long>(0, r.k - static_cast<long>(s.optimum_neighbors)));
    s.helpful_in_optimum = set_intersection(help.helpers(v), optimum).size();
    r.solution.emplace(v, std::move(s));
  }

  for (Vertex u : optimum) {
    OptimumVertexReport o;
    o.solution_neighbors = neighborhood(g, u, a);
    if (!o.solution_neighbors.empty()) {
      o.heaviest = heaviest_neighbors(g, o.solution_neighbors).first;
      o.charge = g.weight(u) - g.weight_of(o.solution_neighbors) / 2;
    }
    for (Vertex v : o.solution_neighbors) o.contributions[v] = contribution(g, a, u, v);
    if (!a.contains(u)) o.help = help.help(u);
    if (o.heaviest >= 0 && !contains(o.help, o.heaviest) &&
        o.contributions[o.heaviest] > special_ratio * g.weight(o.heaviest)) {
      o.special_for = o.heaviest;
      r.solution[o.heaviest].special_neighbors.push_back(u);
    }
    for (Vertex v : o.solution_neighbors) {
      if (contains(o.help, v)) continue;
      if (o.special_for && *o.special_for == v) continue;
      o.support.push_back(v);
    }
    r.optimum.emplace(u, std::move(o));
  }

  for (auto& [v, s] : r.solution) {
    normalize(s.special_neighbors);
    if (contains(optimum, v) || s.special_neighbors.empty()) continue;
    r.a_prime.push_back(v);
    r.special_of[v] = s.special_neighbors.front();
  }
  return r;
}

struct HelpfulSums {
  Weight all;                // sum over A of |help(v) n A*| w(v)
  Weight a_prime;            // same sum over A'
  Weight blackbox_threshold;  // 2 rho (1+eps)^3 / (1-eps^2) w(A)
  Weight special_threshold;   // (2+kappa) (1+eps)^2 / (2+eps) w(A)
};

inline HelpfulSums helpful_weighted_sums(const AnalysisReport& r, const ConflictGraph& g) {
  HelpfulSums h;
  h.all = 0;
  h.a_prime = 0;
  for (const auto& [v, s] : r.solution) {
    Weight term = Weight(static_cast<std::int64_t>(s.helpful_in_optimum)) * g.weight(v);
    h.all += term;
    if (contains(r.a_prime, v)) h.a_prime += term;
  }
  const Weight& e = r.eps;
  Weight rho = (r.k + 1 + e) / 3;
  Weight kappa = kappa_for(e);
  h.blackbox_threshold = 2 * rho * (1 + e) * (1 + e) * (1 + e) / (1 - e * e) * r.solution_weight;
  h.special_threshold = (2 + kappa) * square(1 + e) / (2 + e) * r.solution_weight;
  return h;
}

// Upper bound on w(A*) for a claw-free A, split into its two deductions.
struct ClawFreeBound {
  Weight value;
  Weight base;             // (k+1)/2 w(A)
  Weight missing_term;     // 1/2 sum_v (k - |N(v, A*)|) w(v)
  Weight charge_term;      // 1/2 sum_u (sum_v contr(u, v) - 2 charge(u, n(u)))
};

class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Throws PreconditionError if some claw still improves A.
inline ClawFreeBound claw_free_bound(const ConflictGraph& g, const Solution& a, const VertexSet& optimum) {
  if (find_claw_shaped_improvement(g, a)) {
    throw PreconditionError("a claw-shaped improvement exists; the bound does not apply");
  }
  ChargeMap charges = compute_charges(g, a, optimum);
  const int k = g.k();
  ClawFreeBound b;
  b.base = Weight(k + 1, 2) * a.weight();
  b.missing_term = 0;
  for (Vertex v : a.members()) {
    b.missing_term += Weight(k - static_cast<long>(neighbors_in(g, v, optimum).size())) * g.weight(v);
  }
  b.missing_term /= 2;
  b.charge_term = 0;
  for (Vertex u : optimum) {
    Weight sum = 0;
    for (Vertex v : neighborhood(g, u, a)) sum += contribution(g, a, u, v);
    const Charge& c = charges.at(u);
    b.charge_term += sum - 2 * c.amount;
  }
  b.charge_term /= 2;
  b.value = b.base - b.missing_term - b.charge_term;
  return b;
}

// ---------------------------------------------------------------------------
// Constants

/// (k+1)/2 - xi (k - 1 - (1/k)(2+kappa)(1+eps)^2/(2+eps)
///               - ((k-1)/k) 2 rho (1+eps)^3/(1-eps^2)),
/// with kappa = 1/ceil(1/eps) and rho = (k+1+eps)/3.
inline Weight guarantee_formula(int k, const Weight& eps, const Weight& xi) {
  if (k < 4) throw std::domain_error("guarantee formula needs k >= 4");
  if (eps <= 0 || eps >= 1) throw std::domain_error("eps must lie in (0, 1)");
  if (xi < 0) throw std::domain_error("xi must be non-negative");
  Weight kappa = kappa_for(eps);
  Weight rho = (k + 1 + eps) / 3;
  Weight one_plus = 1 + eps;
  Weight special = Weight(1, k) * (2 + kappa) * square(one_plus) / (2 + eps);
  Weight blackbox = Weight(k - 1, k) * 2 * rho * one_plus * one_plus * one_plus / (1 - eps * eps);
  return Weight(k + 1, 2) - xi * (Weight(k - 1) - special - blackbox);
}

struct InequalityCheck {
  std::string name;
  bool holds = false;
};

namespace detail {

// a >= b * sqrt(q) for q >= 0, decided exactly.
inline bool at_least_times_sqrt(const Weight& a, const Weight& b, const Weight& q) {
  if (b >= 0) return a >= 0 && a * a >= b * b * q;
  return a >= 0 || a * a <= b * b * q;
}

template <typename... Ts>
bool non_increasing(const Ts&... values) {
  std::vector<Weight> v{values...};
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i - 1] < v[i]) return false;
  }
  return true;
}

}  // namespace detail

/// The seven inequality groups the (eps, xi) pair has to satisfy, each
/// evaluated exactly. Group names describe their shape.
inline std::vector<InequalityCheck> validate_constants(const Weight& eps, const Weight& xi) {
  std::vector<InequalityCheck> out;
  const Weight e = eps;
  const Weight p = 1 + e;
  const Weight p2 = p * p;

  // 3/8 p^2 + e^2 <= 11/16 p^2 + e^2 <= 3/4 p^2 + e^2 <= 1
  out.push_back({"eps_square_chain",
                 detail::non_increasing(Weight(1), Weight(3, 4) * p2 + e * e, Weight(11, 16) * p2 + e * e,
                                        Weight(3, 8) * p2 + e * e)});

  out.push_back({"xi_linear_chain", detail::non_increasing((1 - e) / 2, (1 - e * p) / 2, (1 - 2 * e * p) / 2, xi)});

  {
    // (1 - s)^2 / (1 + e s) >= 2 xi with s^2 = 5 / (8 (1 - e^2)), rearranged
    // to 1 + s^2 - 2 xi >= s (2 + 2 xi e).
    bool holds = false;
    if (e < 1 && e > -1) {
      Weight q = Weight(5) / (8 * (1 - e * e));
      holds = detail::at_least_times_sqrt(1 + q - 2 * xi, 2 + 2 * xi * e, q);
    }
    out.push_back({"xi_sqrt_ratio", holds});
  }

  {
    Weight floor_term = e / (4 * (2 + e));
    std::vector<Weight> terms{e / (2 + e), Weight(1, 4), 1 / (4 * p), e / (2 * p), e / (4 + 2 * e)};
    bool holds = floor_term >= xi;
    for (const auto& t : terms) holds = holds && t >= floor_term;
    out.push_back({"xi_min_chain", holds});
  }

  out.push_back({"xi_cubic_chain",
                 detail::non_increasing(e / (2 * p * (2 + e)), e / (2 * p2 * (2 + e)), e / (2 * p2 * p * (2 + e)), xi)});

  out.push_back({"xi_third_ratio", square(Weight(1, 3) - e) / ((Weight(4, 3) + 2 * e) * (2 + e)) >= xi});

  out.push_back({"xi_reciprocal", e * ((2 + 1 / p) / (2 + e) - p) >= 2 * xi});
  return out;
}

inline bool all_hold(const std::vector<InequalityCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.holds) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const AnalysisReport& r, const ConflictGraph& g) {
  using nlohmann::json;
  json solution = json::object();
  for (const auto& [v, s] : r.solution) {
    solution[g.id(v)] = {{"optimum_neighbors", s.optimum_neighbors},
                         {"missing", s.missing},
                         {"helpful_in_optimum", s.helpful_in_optimum},
                         {"special_neighbors", g.ids_of(s.special_neighbors)}};
  }
  json optimum = json::object();
  for (const auto& [u, o] : r.optimum) {
    json contr = json::object();
    for (const auto& [v, c] : o.contributions) contr[g.id(v)] = format_weight(c);
    json entry = {{"solution_neighbors", g.ids_of(o.solution_neighbors)},
                  {"contributions", contr},
                  {"help", g.ids_of(o.help)},
                  {"support", g.ids_of(o.support)}};
    if (o.heaviest >= 0) {
      entry["heaviest"] = g.id(o.heaviest);
      entry["charge"] = format_weight(o.charge);
    }
    if (o.special_for) entry["special_for"] = g.id(*o.special_for);
    optimum[g.id(u)] = std::move(entry);
  }
  json special = json::object();
  for (const auto& [v, t] : r.special_of) special[g.id(v)] = g.id(t);
  return {{"k", r.k},
          {"eps", format_weight(r.eps)},
          {"solution_weight", format_weight(r.solution_weight)},
          {"solution", solution},
          {"optimum", optimum},
          {"a_prime", g.ids_of(r.a_prime)},
          {"special_of", special}};
}

}  // namespace setpack
