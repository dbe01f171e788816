// setpack: command-line front end for the weighted k-Set Packing solver.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "setpack/analysis.hpp"
#include "setpack/instance.hpp"
#include "setpack/oracle.hpp"
#include "setpack/solver.hpp"

using nlohmann::json;
using namespace setpack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

// Usage problems found after parsing (bad flag values and the like).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SETPACK_SEED")) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("SETPACK_SEED is not an unsigned integer: '") + env + "'");
  }
  return 1;
}

Weight weight_arg(const std::string& text, const char* flag) {
  try {
    return parse_weight(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

json exact_json(const Weight& w) { return {{"exact", format_weight(w)}, {"decimal", to_decimal(w)}}; }

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) ids.push_back(id);
  }
  return ids;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << j.dump(2) << "\n";
}

SolverConfig solver_config(int k, const std::optional<std::string>& eps, const std::optional<std::string>& delta,
                           std::size_t max_small, const std::string& engine) {
  SolverConfig c = SolverConfig::defaults(k);
  if (eps) {
    c.eps = weight_arg(*eps, "--eps");
    if (c.eps <= 0) throw UsageError("--eps must be positive");
    c.kappa = kappa_for(c.eps);
  }
  if (delta) c.delta = weight_arg(*delta, "--delta");
  c.max_small_size = max_small;
  c.mis_engine = engine;
  try {
    c.validate();
    make_mis_engine(engine, std::vector<std::string>{});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

json trace_json(const RunTrace& trace) {
  json out = json::array();
  for (const auto& it : trace.iterations) {
    out.push_back({{"kind", to_string(it.kind)},
                   {"gain", format_weight(it.gain)},
                   {"weight", format_weight(it.weight)},
                   {"weight_sq", format_weight(it.weight_sq)}});
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind = "random";
  int k = 3;
  int n = 0;
  int m = 1;
  std::string eps = "1/10";
  int num_sets = 12;
  int universe = 9;
  std::string min_weight = "1";
  std::string max_weight = "10";
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  LabeledInstance li{Instance(1, {}), std::nullopt, std::nullopt};
  if (a.kind == "tight") {
    li = generate_tight_example(a.k, a.n > 0 ? a.n : a.k);
  } else if (a.kind == "k3_hard") {
    li = generate_k3_hard(a.m, weight_arg(a.eps, "--eps"));
  } else {
    RandomInstanceConfig cfg;
    cfg.k = a.k;
    cfg.num_sets = a.num_sets;
    cfg.universe_size = a.universe;
    cfg.min_weight = weight_arg(a.min_weight, "--min-weight");
    cfg.max_weight = weight_arg(a.max_weight, "--max-weight");
    cfg.seed = a.seed ? *a.seed : default_seed();
    li.instance = generate_random(cfg);
  }
  emit(to_json(li), a.out);
  return kExitOk;
}

struct SolveArgs {
  std::string in;
  std::string engine = "swap:2";
  std::optional<std::string> eps;
  std::optional<std::string> delta;
  std::size_t max_small = 3;
  bool trace = false;
  std::string out;
};

int cmd_solve(const SolveArgs& a) {
  LabeledInstance li = load_labeled(a.in);
  SolverConfig config = solver_config(li.instance.k(), a.eps, a.delta, a.max_small, a.engine);
  if (a.engine == "planted" && !li.planted_solution) {
    throw UsageError("--mis-engine planted needs a planted_solution in the instance");
  }
  SolveResult r = solve(li.instance, config, li.planted_solution);
  json out = {{"k", li.instance.k()},
              {"num_sets", li.instance.size()},
              {"mis_engine", config.mis_engine},
              {"eps", format_weight(config.eps)},
              {"kappa", format_weight(config.kappa)},
              {"solution", r.ids},
              {"weight", exact_json(r.weight)},
              {"iterations", r.iterations}};
  if (r.scaled) {
    out["scaling"] = {{"delta", format_weight(*config.delta)},
                      {"factor", format_weight(r.scaled->factor)},
                      {"levels", r.scaled->levels.str()},
                      {"removed", r.scaled->removed},
                      {"working_weight", format_weight(r.working_weight)}};
  }
  if (li.planted_solution) {
    Weight planted = li.instance.total_weight(*li.planted_solution);
    out["planted_weight"] = exact_json(planted);
    out["ratio_vs_planted"] = exact_json(planted / r.weight);
  }
  if (a.trace) out["trace"] = trace_json(r.trace);
  emit(out, a.out);
  return kExitOk;
}

struct ExactArgs {
  std::string in;
  std::size_t cap = kDefaultOracleCap;
  std::string out;
};

int cmd_exact(const ExactArgs& a) {
  Instance inst = load(a.in);
  OracleResult r;
  try {
    r = solve_exact(inst, a.cap);
  } catch (const CapacityError& e) {
    throw UsageError(std::string(e.what()) + " (raise --cap)");
  }
  emit({{"solution", r.ids}, {"weight", exact_json(r.weight)}, {"nodes", r.nodes}}, a.out);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string instance;
  std::string solution;
  std::optional<std::string> optimum;
  std::optional<std::string> eps;
  std::string out;
};

// "start" and "planted" name the instance's labelled lists; anything else is
// a comma-separated id list.
std::vector<std::string> resolve_ids(const LabeledInstance& li, const std::string& text, const char* flag) {
  if (text == "start") {
    if (!li.adversarial_start) throw UsageError(std::string(flag) + " start: instance has no adversarial_start");
    return *li.adversarial_start;
  }
  if (text == "planted") {
    if (!li.planted_solution) throw UsageError(std::string(flag) + " planted: instance has no planted_solution");
    return *li.planted_solution;
  }
  return split_ids(text);
}

int cmd_analyze(const AnalyzeArgs& a) {
  LabeledInstance li = load_labeled(a.instance);
  ConflictGraph g = ConflictGraph::build(li.instance);
  std::vector<std::string> sol_ids = resolve_ids(li, a.solution, "--solution");
  for (const auto& id : sol_ids) li.instance.require_index(id);
  if (!li.instance.is_packing(sol_ids)) throw ValidationError("--solution is not a packing");
  std::vector<std::string> opt_ids;
  std::string optimum_source;
  if (a.optimum) {
    opt_ids = resolve_ids(li, *a.optimum, "--optimum");
    for (const auto& id : opt_ids) li.instance.require_index(id);
    if (!li.instance.is_packing(opt_ids)) throw ValidationError("--optimum is not a packing");
    optimum_source = "given";
  } else {
    opt_ids = solve_exact(li.instance).ids;
    optimum_source = "oracle";
  }
  Weight eps = a.eps ? weight_arg(*a.eps, "--eps") : constants_for(li.instance.k()).eps;
  if (eps <= 0) throw UsageError("--eps must be positive");

  Solution sol(g, g.vertices_of(sol_ids));
  VertexSet opt = g.vertices_of(opt_ids);
  AnalysisReport report = classify(g, sol, opt, eps);
  HelpfulSums sums = helpful_weighted_sums(report, g);
  json out = {{"optimum_source", optimum_source},
              {"solution_weight", exact_json(sol.weight())},
              {"optimum_weight", exact_json(g.weight_of(opt))},
              {"report", to_json(report, g)},
              {"helpful_sums",
               {{"all", exact_json(sums.all)},
                {"a_prime", exact_json(sums.a_prime)},
                {"blackbox_threshold", exact_json(sums.blackbox_threshold)},
                {"special_threshold", exact_json(sums.special_threshold)}}}};
  try {
    ClawFreeBound b = claw_free_bound(g, sol, opt);
    out["claw_free_bound"] = {{"value", exact_json(b.value)},
                              {"base", exact_json(b.base)},
                              {"missing_term", exact_json(b.missing_term)},
                              {"charge_term", exact_json(b.charge_term)}};
  } catch (const PreconditionError& e) {
    out["claw_free_bound"] = {{"error", e.what()}};
  }
  emit(out, a.out);
  return kExitOk;
}

struct ConstantsArgs {
  std::optional<int> k;
  std::optional<std::string> eps;
  std::optional<std::string> xi;
  std::string out;
};

int cmd_validate_constants(const ConstantsArgs& a) {
  if (a.k && (a.eps || a.xi)) throw UsageError("give either --k or --eps with --xi");
  if (!a.k && !(a.eps && a.xi)) throw UsageError("give --k, or both --eps and --xi");
  json out;
  Weight eps, xi;
  std::optional<int> k = a.k;
  if (k) {
    if (*k < 1) throw UsageError("--k must be positive");
    ConstantsRow row = constants_for(*k);
    eps = row.eps;
    xi = row.xi;
    out["k"] = *k;
    out["listed_guarantee"] = to_decimal(row.guarantee);
    if (*k < 4) out["note"] = "k <= 3 uses the k = 4 row";
  } else {
    eps = weight_arg(*a.eps, "--eps");
    xi = weight_arg(*a.xi, "--xi");
  }
  auto checks = validate_constants(eps, xi);
  out["eps"] = to_decimal(eps);
  out["xi"] = to_decimal(xi);
  json list = json::array();
  for (const auto& c : checks) list.push_back({{"name", c.name}, {"holds", c.holds}});
  out["checks"] = list;
  int formula_k = k ? std::max(*k, 4) : 4;
  if (eps > 0 && eps < 1 && xi >= 0) {
    out["guarantee"] = exact_json(guarantee_formula(formula_k, eps, xi));
    out["guarantee_k"] = formula_k;
  }
  bool pass = all_hold(checks);
  out["pass"] = pass;
  emit(out, a.out);
  return pass ? kExitOk : kExitValidation;
}

struct BenchArgs {
  std::string suite = "random";
  int k = 3;
  int count = 10;
  std::optional<std::uint64_t> seed;
  int num_sets = 12;
  int universe = 0;
  std::string engine = "swap:2";
  std::optional<std::string> delta;
  bool no_timing = false;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  if (a.count < 1) throw UsageError("--count must be positive");
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  json instances = json::array();
  Weight worst = 0;
  Weight ratio_sum = 0;
  std::size_t rated = 0;
  bool within_bound = true;

  for (int i = 0; i < a.count; ++i) {
    LabeledInstance li{Instance(1, {}), std::nullopt, std::nullopt};
    std::string id;
    if (a.suite == "random") {
      RandomInstanceConfig cfg;
      cfg.k = a.k;
      cfg.num_sets = a.num_sets;
      cfg.universe_size = a.universe > 0 ? a.universe : 3 * a.k;
      cfg.seed = seed + static_cast<std::uint64_t>(i);
      li.instance = generate_random(cfg);
      id = "random-" + std::to_string(cfg.seed);
    } else if (a.suite == "tight") {
      int n = a.k * (i + 1);
      if ((a.k - 1) * n % 2 != 0) n *= 2;
      li = generate_tight_example(a.k, n);
      id = "tight-k" + std::to_string(a.k) + "-n" + std::to_string(n);
    } else if (a.suite == "k3_hard") {
      li = generate_k3_hard(i + 1, Weight(1, 10));
      id = "k3_hard-m" + std::to_string(i + 1);
    } else {
      throw UsageError("unknown suite '" + a.suite + "'");
    }
    const int k = li.instance.k();
    SolverConfig config = solver_config(k, std::nullopt, a.delta, 3, a.engine);
    auto start = std::chrono::steady_clock::now();
    SolveResult r = solve(li.instance, config, li.planted_solution);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json entry = {{"id", id},
                  {"k", k},
                  {"num_sets", li.instance.size()},
                  {"solver_weight", exact_json(r.weight)},
                  {"iterations", r.iterations}};
    std::optional<Weight> reference;
    if (li.instance.size() <= kDefaultOracleCap) {
      reference = solve_exact(li.instance).weight;
      entry["oracle_weight"] = exact_json(*reference);
    } else if (li.planted_solution) {
      reference = li.instance.total_weight(*li.planted_solution);
      entry["planted_weight"] = exact_json(*reference);
    }
    if (reference) {
      Weight ratio = *reference / r.weight;
      entry["ratio"] = exact_json(ratio);
      worst = std::max(worst, ratio);
      ratio_sum += ratio;
      ++rated;
      if (ratio > Weight(k + 1, 2)) within_bound = false;
    }
    if (!a.no_timing) entry["wall_time_s"] = seconds;
    instances.push_back(entry);
  }

  ConstantsRow row = constants_for(a.suite == "k3_hard" ? 3 : a.k);
  json aggregate = {{"instances", a.count},
                    {"rated", rated},
                    {"max_ratio", exact_json(worst)},
                    {"half_k_plus_one", exact_json(Weight(a.suite == "k3_hard" ? 4 : a.k + 1, 2))},
                    {"within_half_k_plus_one", within_bound},
                    {"table_guarantee", to_decimal(row.guarantee)}};
  if (rated > 0) aggregate["mean_ratio"] = exact_json(ratio_sum / static_cast<std::int64_t>(rated));
  json out = {{"suite", a.suite}, {"seed", seed}, {"mis_engine", a.engine}, {"instances", instances},
              {"aggregate", aggregate}};
  emit(out, a.out);
  return within_bound ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted k-Set Packing by squared-weight local improvement"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write an instance as JSON");
  g->add_option("--kind", gen.kind, "tight | k3_hard | random")
      ->check(CLI::IsMember({"tight", "k3_hard", "random"}))
      ->capture_default_str();
  g->add_option("--k", gen.k, "Maximum set size")->capture_default_str();
  g->add_option("--n", gen.n, "tight: number of start sets (default k)");
  g->add_option("--m", gen.m, "k3_hard: cycle parameter")->capture_default_str();
  g->add_option("--eps", gen.eps, "k3_hard: green weight is 1 - 2 eps")->capture_default_str();
  g->add_option("--num-sets", gen.num_sets, "random: number of sets")->capture_default_str();
  g->add_option("--universe", gen.universe, "random: number of elements")->capture_default_str();
  g->add_option("--min-weight", gen.min_weight, "random: smallest weight")->capture_default_str();
  g->add_option("--max-weight", gen.max_weight, "random: largest weight")->capture_default_str();
  g->add_option("--seed", gen.seed, "random: seed (default 1 or SETPACK_SEED)");
  g->add_option("--out", gen.out, "Output file (default stdout)");

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Run the local improvement solver");
  s->add_option("--in", sol.in, "Instance file")->required();
  s->add_option("--mis-engine", sol.engine, "greedy | swap:t | exact | planted")->capture_default_str();
  s->add_option("--eps", sol.eps, "Helpfulness tolerance (default from the constants table)");
  s->add_option("--delta", sol.delta, "Scale and truncate weights with this slack first");
  s->add_option("--max-small", sol.max_small, "Largest exhaustive improvement size")->capture_default_str();
  s->add_flag("--trace", sol.trace, "Include the per-iteration trace");
  s->add_option("--out", sol.out, "Output file (default stdout)");

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Solve to optimality by branch and bound");
  e->add_option("--in", ex.in, "Instance file")->required();
  e->add_option("--cap", ex.cap, "Refuse instances with more sets")->capture_default_str();
  e->add_option("--out", ex.out, "Output file (default stdout)");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Classify a solution against an optimum");
  a->add_option("--instance", an.instance, "Instance file")->required();
  a->add_option("--solution", an.solution, "Comma-separated ids, or 'start' / 'planted'")->required();
  a->add_option("--optimum", an.optimum, "Comma-separated ids, or 'start' / 'planted' (default: oracle)");
  a->add_option("--eps", an.eps, "Helpfulness tolerance (default from the constants table)");
  a->add_option("--out", an.out, "Output file (default stdout)");

  ConstantsArgs cs;
  auto* c = app.add_subcommand("validate-constants", "Check an (eps, xi) pair against the inequality system");
  c->add_option("--k", cs.k, "Use the table row for this k");
  c->add_option("--eps", cs.eps, "eps as a decimal or p/q");
  c->add_option("--xi", cs.xi, "xi as a decimal or p/q");
  c->add_option("--out", cs.out, "Output file (default stdout)");

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "Solve a generated suite and compare against the oracle");
  b->add_option("--suite", bn.suite, "random | tight | k3_hard")
      ->check(CLI::IsMember({"random", "tight", "k3_hard"}))
      ->capture_default_str();
  b->add_option("--k", bn.k, "Maximum set size")->capture_default_str();
  b->add_option("--count", bn.count, "Number of instances")->capture_default_str();
  b->add_option("--seed", bn.seed, "First seed (default 1 or SETPACK_SEED)");
  b->add_option("--num-sets", bn.num_sets, "random: sets per instance")->capture_default_str();
  b->add_option("--universe", bn.universe, "random: elements per instance (default 3k)");
  b->add_option("--mis-engine", bn.engine, "greedy | swap:t | exact | planted")->capture_default_str();
  b->add_option("--delta", bn.delta, "Scale and truncate weights with this slack first");
  b->add_flag("--no-timing", bn.no_timing, "Omit wall times for byte-identical output");
  b->add_option("--out", bn.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(sol);
    if (e->parsed()) return cmd_exact(ex);
    if (a->parsed()) return cmd_analyze(an);
    if (c->parsed()) return cmd_validate_constants(cs);
    if (b->parsed()) return cmd_bench(bn);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const ParameterError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& err) {
    std::cerr << "invalid instance: " << err.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
