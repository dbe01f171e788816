#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "setpack/rational.hpp"

namespace setpack {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WeightedSet {
  std::string id;
  std::vector<std::string> elements;
  Weight weight;

  bool operator==(const WeightedSet&) const = default;
};

// A weighted k-Set Packing instance. Immutable once constructed; the
// constructor enforces 1 <= |set| <= k, positive weights, unique ids and
// duplicate-free element lists.
class Instance {
 public:
  Instance(int k, std::vector<WeightedSet> sets) : k_(k), sets_(std::move(sets)) {
    if (k_ < 1) throw ValidationError("k must be positive, got " + std::to_string(k_));
    index_.reserve(sets_.size());
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      const WeightedSet& s = sets_[i];
      if (s.elements.empty()) throw ValidationError("set '" + s.id + "' is empty");
      if (s.elements.size() > static_cast<std::size_t>(k_)) {
        throw ValidationError("set '" + s.id + "' has " + std::to_string(s.elements.size()) +
                              " elements, more than k=" + std::to_string(k_));
      }
      if (s.weight <= 0) {
        throw ValidationError("set '" + s.id + "' has non-positive weight " + format_weight(s.weight));
      }
      std::unordered_set<std::string> seen(s.elements.begin(), s.elements.end());
      if (seen.size() != s.elements.size()) {
        throw ValidationError("set '" + s.id + "' lists an element twice");
      }
      if (!index_.emplace(s.id, i).second) throw ValidationError("duplicate set id '" + s.id + "'");
    }
  }

  int k() const { return k_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  const std::vector<WeightedSet>& sets() const { return sets_; }
  const WeightedSet& operator[](std::size_t i) const { return sets_[i]; }

  std::optional<std::size_t> index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t require_index(const std::string& id) const {
    auto i = index_of(id);
    if (!i) throw ValidationError("unknown set id '" + id + "'");
    return *i;
  }

  Weight total_weight(const std::vector<std::string>& ids) const {
    Weight total = 0;
    for (const auto& id : ids) total += sets_[require_index(id)].weight;
    return total;
  }

  // True iff the named sets are pairwise disjoint.
  bool is_packing(const std::vector<std::string>& ids) const {
    std::unordered_set<std::string> used;
    std::unordered_set<std::string> picked;
    for (const auto& id : ids) {
      if (!picked.insert(id).second) return false;
      for (const auto& e : sets_[require_index(id)].elements) {
        if (!used.insert(e).second) return false;
      }
    }
    return true;
  }

  bool operator==(const Instance& other) const { return k_ == other.k_ && sets_ == other.sets_; }

 private:
  int k_;
  std::vector<WeightedSet> sets_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LabeledInstance {
  Instance instance;
  std::optional<std::vector<std::string>> planted_solution;
  std::optional<std::vector<std::string>> adversarial_start;

  void validate() const {
    for (const auto* label : {&planted_solution, &adversarial_start}) {
      if (!label->has_value()) continue;
      if (!instance.is_packing(**label)) {
        throw ValidationError("labeled sub-collection is not pairwise disjoint");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const LabeledInstance& li) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : li.instance.sets()) {
    sets.push_back({{"id", s.id}, {"elements", s.elements}, {"weight", format_weight(s.weight)}});
  }
  nlohmann::json out = {{"k", li.instance.k()}, {"sets", std::move(sets)}};
  if (li.planted_solution) out["planted_solution"] = *li.planted_solution;
  if (li.adversarial_start) out["adversarial_start"] = *li.adversarial_start;
  return out;
}

inline nlohmann::json to_json(const Instance& instance) {
  return to_json(LabeledInstance{instance, std::nullopt, std::nullopt});
}

inline LabeledInstance labeled_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& what) { throw ParseError("malformed instance: " + what); };
  if (!j.is_object()) fail("top level is not an object");
  if (!j.contains("k") || !j["k"].is_number_integer()) fail("missing integer 'k'");
  if (!j.contains("sets") || !j["sets"].is_array()) fail("missing array 'sets'");

  std::vector<WeightedSet> sets;
  sets.reserve(j["sets"].size());
  for (const auto& s : j["sets"]) {
    if (!s.is_object()) fail("set entry is not an object");
    if (!s.contains("id") || !s["id"].is_string()) fail("set without string 'id'");
    if (!s.contains("elements") || !s["elements"].is_array()) fail("set without 'elements' array");
    if (!s.contains("weight")) fail("set without 'weight'");
    WeightedSet ws;
    ws.id = s["id"].get<std::string>();
    for (const auto& e : s["elements"]) {
      if (e.is_string()) {
        ws.elements.push_back(e.get<std::string>());
      } else if (e.is_number_integer()) {
        ws.elements.push_back(std::to_string(e.get<std::int64_t>()));
      } else {
        fail("element of set '" + ws.id + "' is neither string nor integer");
      }
    }
    const auto& w = s["weight"];
    try {
      if (w.is_string()) {
        ws.weight = parse_weight(w.get<std::string>());
      } else if (w.is_number_integer()) {
        ws.weight = Weight(w.get<std::int64_t>());
      } else {
        fail("weight of set '" + ws.id + "' must be a \"p/q\" string");
      }
    } catch (const std::invalid_argument& e) {
      fail(std::string("weight of set '") + ws.id + "': " + e.what());
    }
    sets.push_back(std::move(ws));
  }

  auto id_list = [&](const char* key) -> std::optional<std::vector<std::string>> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_array()) fail(std::string("'") + key + "' is not an array");
    std::vector<std::string> ids;
    for (const auto& id : j[key]) {
      if (!id.is_string()) fail(std::string("'") + key + "' holds a non-string id");
      ids.push_back(id.get<std::string>());
    }
    return ids;
  };

  LabeledInstance li{Instance(j["k"].get<int>(), std::move(sets)), id_list("planted_solution"),
                     id_list("adversarial_start")};
  li.validate();
  return li;
}

inline LabeledInstance parse_labeled(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return labeled_from_json(j);
}

inline LabeledInstance load_labeled(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_labeled(buffer.str());
}

inline Instance load(const std::string& path) { return load_labeled(path).instance; }

inline void save(const LabeledInstance& li, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << to_json(li).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Generators

namespace detail {

// Neighbour offsets of a (degree)-regular circulant graph on n nodes.
inline std::vector<int> circulant_offsets(int degree, int n) {
  std::vector<int> offsets;
  for (int d = 1; d <= degree / 2; ++d) offsets.push_back(d);
  if (degree % 2 == 1) offsets.push_back(n / 2);
  return offsets;
}

}  // namespace detail

/// Unit-weight instance in which every start set has one private neighbour
/// of degree one and k-1 neighbours of degree two, glued along a
/// (k-1)-regular circulant graph on n nodes.
///
/// Ids: "a<i>" (adversarial start), "s<i>" (degree one), "d<i>_<j>" (degree
/// two, i < j). Elements: "e<i>_<p>", port p = 0 is the private one.
inline LabeledInstance generate_tight_example(int k, int n) {
  if (k < 3) throw ParameterError("tight example needs k >= 3");
  if (n < k) throw ParameterError("tight example needs n >= k");
  if (((k - 1) * n) % 2 != 0) throw ParameterError("(k-1)*n must be even");

  const int degree = k - 1;
  auto element = [](int node, int port) { return "e" + std::to_string(node) + "_" + std::to_string(port); };

  // Adjacency of the circulant graph, each node's ports assigned in order of
  // increasing neighbour index.
  std::vector<std::vector<int>> adj(n);
  for (int off : detail::circulant_offsets(degree, n)) {
    for (int i = 0; i < n; ++i) {
      int j = (i + off) % n;
      if (std::find(adj[i].begin(), adj[i].end(), j) == adj[i].end()) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<WeightedSet> sets;
  std::vector<std::string> start, planted;
  for (int i = 0; i < n; ++i) {
    WeightedSet s{"a" + std::to_string(i), {}, Weight(1)};
    for (int p = 0; p < k; ++p) s.elements.push_back(element(i, p));
    start.push_back(s.id);
    sets.push_back(std::move(s));
  }
  for (int i = 0; i < n; ++i) {
    sets.push_back({"s" + std::to_string(i), {element(i, 0)}, Weight(1)});
    planted.push_back(sets.back().id);
  }
  auto port = [&](int i, int j) {
    auto it = std::find(adj[i].begin(), adj[i].end(), j);
    return 1 + static_cast<int>(it - adj[i].begin());
  };
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (j < i) continue;
      sets.push_back({"d" + std::to_string(i) + "_" + std::to_string(j),
                      {element(i, port(i, j)), element(j, port(j, i))},
                      Weight(1)});
      planted.push_back(sets.back().id);
    }
  }
  LabeledInstance li{Instance(k, std::move(sets)), std::move(planted), std::move(start)};
  li.validate();
  return li;
}

/// The k = 3 instance built on a cycle of length 8m coloured red, blue,
/// yellow, blue; opposite reds joined through an extra blue vertex and a
/// green pendant of weight 1 - 2*eps at every yellow vertex. Each graph
/// vertex becomes the set of its incident edges.
///
/// Ids: "c<i>" cycle vertices (i mod 4: 0 red, 1/3 blue, 2 yellow),
/// "x<j>" extra blues, "g<i>" green pendant of yellow c<i>.
inline LabeledInstance generate_k3_hard(int m, const Weight& eps) {
  if (m < 1) throw ParameterError("k3_hard needs m >= 1");
  if (eps <= 0 || eps >= Weight(1, 2)) throw ParameterError("eps must lie in (0, 1/2)");

  const int len = 8 * m;
  std::vector<std::string> names;
  std::vector<Weight> weights;
  std::vector<int> color;  // 0 red, 1 blue, 2 yellow, 3 green
  for (int i = 0; i < len; ++i) {
    names.push_back("c" + std::to_string(i));
    weights.emplace_back(1);
    color.push_back(i % 4 == 0 ? 0 : (i % 4 == 2 ? 2 : 1));
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < len; ++i) edges.emplace_back(i, (i + 1) % len);
  for (int j = 0; j < m; ++j) {
    int v = static_cast<int>(names.size());
    names.push_back("x" + std::to_string(j));
    weights.emplace_back(1);
    color.push_back(1);
    edges.emplace_back(4 * j, v);
    edges.emplace_back(4 * j + 4 * m, v);
  }
  for (int i = 2; i < len; i += 4) {
    int v = static_cast<int>(names.size());
    names.push_back("g" + std::to_string(i));
    weights.push_back(1 - 2 * eps);
    color.push_back(3);
    edges.emplace_back(i, v);
  }

  std::vector<std::vector<std::string>> incident(names.size());
  for (const auto& [a, b] : edges) {
    std::string e = names[std::min(a, b)] + "-" + names[std::max(a, b)];
    incident[a].push_back(e);
    incident[b].push_back(e);
  }

  std::vector<WeightedSet> sets;
  std::vector<std::string> planted, start;
  for (std::size_t v = 0; v < names.size(); ++v) {
    sets.push_back({names[v], incident[v], weights[v]});
    if (color[v] == 1 || color[v] == 3) planted.push_back(names[v]);
    else start.push_back(names[v]);
  }
  LabeledInstance li{Instance(3, std::move(sets)), std::move(planted), std::move(start)};
  li.validate();
  return li;
}

struct RandomInstanceConfig {
  int k = 3;
  int num_sets = 12;
  int universe_size = 9;
  Weight min_weight = 1;
  Weight max_weight = 10;
  std::uint64_t seed = 1;
  // Weights are min + (max - min) * t / weight_steps for uniform t.
  int weight_steps = 1000;
};

/// Each set draws a uniform size in [1, k] and that many distinct elements
/// from "u0".."u<universe-1>". Deterministic under the seed.
inline Instance generate_random(const RandomInstanceConfig& cfg) {
  if (cfg.k < 1) throw ParameterError("k must be positive");
  if (cfg.num_sets < 1) throw ParameterError("num_sets must be >= 1");
  if (cfg.universe_size < cfg.k) throw ParameterError("universe_size must be >= k");
  if (cfg.min_weight <= 0 || cfg.max_weight < cfg.min_weight) {
    throw ParameterError("weight range must satisfy 0 < min <= max");
  }
  if (cfg.weight_steps < 1) throw ParameterError("weight_steps must be positive");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> size_dist(1, cfg.k);
  std::uniform_int_distribution<int> step_dist(0, cfg.weight_steps);
  std::vector<int> universe(cfg.universe_size);
  for (int i = 0; i < cfg.universe_size; ++i) universe[i] = i;

  std::vector<WeightedSet> sets;
  for (int s = 0; s < cfg.num_sets; ++s) {
    int size = size_dist(rng);
    // Partial Fisher-Yates.
    for (int i = 0; i < size; ++i) {
      std::uniform_int_distribution<int> pick(i, cfg.universe_size - 1);
      std::swap(universe[i], universe[pick(rng)]);
    }
    std::vector<int> chosen(universe.begin(), universe.begin() + size);
    std::sort(chosen.begin(), chosen.end());
    WeightedSet ws;
    ws.id = "s" + std::to_string(s);
    for (int e : chosen) ws.elements.push_back("u" + std::to_string(e));
    ws.weight = cfg.min_weight + (cfg.max_weight - cfg.min_weight) * Weight(step_dist(rng), cfg.weight_steps);
    sets.push_back(std::move(ws));
  }
  return Instance(cfg.k, std::move(sets));
}

}  // namespace setpack
