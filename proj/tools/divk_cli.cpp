// divk: generate, ingest, solve and benchmark diversity-aware k-median instances.
//
// Exit codes: 0 ok, 2 usage/schema error, 3 infeasible or inconclusive,
// 4 oracle refusal.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bench.hpp"
#include "divk/divk.hpp"
#include "divk/io.hpp"

namespace {

using namespace divk;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitRefused = 4;

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::stringstream conv(item);
    T value;
    if (!(conv >> value) || !conv.eof()) throw ParameterError("cannot parse list item \"" + item + "\"");
    out.push_back(value);
  }
  return out;
}

template <>
std::vector<std::string> parse_list<std::string>(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct GenArgs {
  std::string kind;
  std::string graph;
  Index k = 0;
  double c = 10.0;
  Index n = 20;
  Index t = 2;
  std::string lower_bounds;
  double overlap = 0.0;
  Index dim = 2;
  std::string metric = "l1";
  std::uint64_t seed = 0;
  std::string out;
};

struct CsvArgs {
  std::string protected_cols;
  std::string features;
  std::string group_mode = "disjoint";
  Index k = 0;
  std::string lower_bounds;
  std::string metric = "l1";

  io::CsvSchema schema() const {
    io::CsvSchema s;
    s.protected_columns = parse_list<std::string>(protected_cols);
    s.feature_columns = parse_list<std::string>(features);
    if (group_mode != "disjoint" && group_mode != "intersect") throw ParameterError("group mode must be disjoint or intersect");
    s.mode = group_mode == "intersect" ? io::GroupMode::Intersect : io::GroupMode::Disjoint;
    s.k = k;
    s.lower_bounds = parse_list<int>(lower_bounds);
    s.metric = metric == "l2" ? Metric::L2 : Metric::L1;
    return s;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--protected", protected_cols, "Comma-separated protected (group) columns");
    cmd->add_option("--features", features, "Comma-separated numeric feature columns (default: all others)");
    cmd->add_option("--group-mode", group_mode, "disjoint | intersect")->check(CLI::IsMember({"disjoint", "intersect"}));
    cmd->add_option("--k", k, "Number of centers (default min(10, rows))");
    cmd->add_option("--lower-bounds", lower_bounds, "Comma-separated lower bounds per group");
    cmd->add_option("--metric", metric, "l1 | l2")->check(CLI::IsMember({"l1", "l2"}));
  }
};

struct SolveArgs {
  std::string instance;
  std::string algo;
  std::uint64_t seed = 0;
  int restarts = 10;
  double lambda = 1.0;
  double epsilon = 0.1;
  std::optional<long> max_iter;
  int threads = 1;
  std::string init;
  std::string profile_mode = "auto";
  std::string policy = "power";
  long node_budget = kDefaultNodeBudget;
  bool no_timing = false;
  std::string out;
  CsvArgs csv;
};

struct BenchArgs {
  std::string instance;
  std::string fractions;
  std::string lambdas;
  std::string algos = "ls1,ls2";
  std::uint64_t seed = 0;
  int restarts = 10;
  int threads = 1;
  std::optional<long> max_iter;
  bool no_timing = false;
  std::string out;
  CsvArgs csv;
};

Instance<double> load_any(const std::string& path, const CsvArgs& csv) {
  if (ends_with(path, ".csv")) return io::load_csv(path, csv.schema());
  return io::load_instance(path);
}

int cmd_gen(const GenArgs& a) {
  std::optional<Instance<double>> inst;
  if (a.kind == "fig2") {
    inst = fig2_counterexample<double>(a.c);
  } else if (a.kind == "domset" || a.kind == "vertexcover") {
    if (a.graph.empty()) throw ParameterError("--graph is required for " + a.kind);
    if (a.k < 1) throw ParameterError("--k must be positive");
    const Graph g = io::load_graph(a.graph);
    inst = a.kind == "domset" ? from_domset<double>(g, a.k) : from_vertexcover<double>(g, a.k);
  } else if (a.kind == "random") {
    RandomInstanceParams p;
    p.n = a.n;
    p.t = a.t;
    p.k = a.k > 0 ? a.k : std::min<Index>(4, a.n);
    p.lower_bounds = parse_list<int>(a.lower_bounds);
    p.overlap = a.overlap;
    p.seed = a.seed;
    p.dim = a.dim;
    p.metric = a.metric == "l2" ? Metric::L2 : Metric::L1;
    inst = random_metric<double>(p);
  } else {
    throw ParameterError("unknown generator " + a.kind);
  }
  write_output(a.out, io::instance_to_json(*inst).dump() + "\n");
  return kExitOk;
}

int cmd_ingest(const std::string& path, const CsvArgs& csv, const std::string& out) {
  const auto schema = csv.schema();
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  const auto table = io::read_csv(in);
  const auto inst = io::instance_from_csv(table, schema);
  const auto labels = io::csv_group_labels(table, schema);
  const auto report = validate(inst);
  for (const auto& f : report.findings) std::cerr << "warning: " << f.message << "\n";
  std::size_t min_size = inst.num_facilities(), max_size = 0;
  std::cerr << "group\tsize\n";
  for (Index g = 0; g < inst.num_groups(); ++g) {
    const auto size = inst.group(g).size();
    min_size = std::min(min_size, size);
    max_size = std::max(max_size, size);
    std::cerr << labels[static_cast<std::size_t>(g)] << "\t" << size << "\n";
  }
  std::cerr << "rows=" << inst.num_clients() << " groups=" << inst.num_groups() << " min_group=" << min_size
            << " max_group=" << max_size << "\n";
  write_output(out, io::instance_to_json(inst).dump() + "\n");
  return kExitOk;
}

int cmd_solve(const SolveArgs& a) {
  const auto inst = load_any(a.instance, a.csv);
  require_valid(inst);
  LSConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.threads = a.threads;
  cfg.node_budget = a.node_budget;
  if (a.algo != "shrink") cfg.max_iterations = a.max_iter;

  const bool below = inst.total_lower_bound() < inst.k();
  const bool enumerate = a.profile_mode == "enumerate" || (a.profile_mode == "auto" && a.algo == "rb" && below);
  if (enumerate && a.algo != "rb" && a.algo != "ls2" && a.algo != "oracle") {
    throw UsageError("profile enumeration applies to rb, ls2 and oracle");
  }

  std::optional<SolveReport<double>> report;
  if (enumerate) {
    ProfileSolver<double> solver;
    if (a.algo == "oracle") {
      solver = exact_profile_solver<double>();
    } else {
      solver = [&](const Instance<double>& p) -> std::optional<SolveReport<double>> {
        try {
          return a.algo == "rb" ? rb_swap(p, cfg) : ls2(p, cfg);
        } catch (const InfeasibleError&) {
          return std::nullopt;
        }
      };
    }
    report = solve_with_completion(inst, solver, CompletionConfig{a.threads});
  } else if (a.algo == "ls0") {
    report = ls0(inst, inst.k(), cfg);
  } else if (a.algo == "ls1") {
    std::optional<std::vector<Index>> init;
    if (!a.init.empty()) init = parse_list<Index>(a.init);
    report = ls1(inst, cfg, init);
  } else if (a.algo == "ls2") {
    report = ls2(inst, cfg);
  } else if (a.algo == "rb") {
    report = rb_swap(inst, cfg);
  } else if (a.algo == "relaxed") {
    report = relaxed_ls(inst, a.lambda, cfg);
  } else if (a.algo == "shrink") {
    ShrinkConfig sc;
    sc.epsilon = a.epsilon;
    if (a.max_iter) sc.max_iter = static_cast<int>(*a.max_iter);
    sc.policy = a.policy == "uniform" ? DiscountPolicy::Uniform : DiscountPolicy::Power;
    sc.inner = cfg;
    report = iterative_shrinking(inst, sc);
    if (!report) {
      std::cerr << "shrinking did not reach a feasible solution within " << sc.max_iter << " rounds\n";
      return kExitInfeasible;
    }
  } else if (a.algo == "oracle") {
    auto sol = exact_solve(inst);
    if (!sol) {
      std::cerr << "no feasible solution\n";
      return kExitInfeasible;
    }
    SolveReport<double> r;
    r.initial_cost = r.final_cost = sol->cost;
    r.seed = a.seed;
    r.feasible = true;
    r.solution = std::move(*sol);
    report = std::move(r);
  } else {
    throw ParameterError("unknown algorithm " + a.algo);
  }
  write_output(a.out, io::solution_to_json(inst, *report, a.algo, !a.no_timing).dump() + "\n");
  return kExitOk;
}

int cmd_bench(const BenchArgs& a) {
  const auto inst = load_any(a.instance, a.csv);
  cli::BenchSpec spec;
  spec.minority_fractions = parse_list<double>(a.fractions);
  spec.lambdas = parse_list<double>(a.lambdas);
  spec.algos = parse_list<std::string>(a.algos);
  spec.seed = a.seed;
  spec.restarts = a.restarts;
  spec.threads = a.threads;
  spec.max_iterations = a.max_iter;
  spec.timing = !a.no_timing;
  std::ostringstream out;
  cli::run_bench(inst, spec, out);
  write_output(a.out, out.str());
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  const auto inst = io::load_instance(path);
  const auto report = validate(inst);
  io::ordered_json j;
  j["ok"] = report.ok();
  j["disjoint"] = report.disjoint;
  j["budget"] = budget_class_name(report.budget);
  j["findings"] = io::json::array();
  for (const auto& f : report.findings) {
    j["findings"].push_back({{"severity", f.severity == ValidationReport::Severity::Error ? "error" : "warning"},
                             {"message", f.message}});
  }
  std::cout << j.dump() << "\n";
  return report.ok() ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diversity-aware k-median solvers"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance (domset | vertexcover | fig2 | random)");
  gen_cmd->add_option("kind", gen.kind)->required()->check(CLI::IsMember({"domset", "vertexcover", "fig2", "random"}));
  gen_cmd->add_option("--graph", gen.graph, "Graph JSON {\"n\":..,\"edges\":[[u,v],..]}");
  gen_cmd->add_option("--k", gen.k, "Number of centers");
  gen_cmd->add_option("--c", gen.c, "Far distance for fig2 (c > 1)");
  gen_cmd->add_option("--n", gen.n, "Points for random");
  gen_cmd->add_option("--t", gen.t, "Groups for random");
  gen_cmd->add_option("--lower-bounds,--r", gen.lower_bounds, "Comma-separated lower bounds for random");
  gen_cmd->add_option("--overlap", gen.overlap, "Extra-membership probability for random");
  gen_cmd->add_option("--dim", gen.dim, "Point dimension for random");
  gen_cmd->add_option("--metric", gen.metric)->check(CLI::IsMember({"l1", "l2"}));
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  std::string ingest_path, ingest_out;
  CsvArgs ingest_csv;
  auto* ingest_cmd = app.add_subcommand("ingest", "Convert a CSV file to instance JSON");
  ingest_cmd->add_option("csv", ingest_path)->required();
  ingest_csv.attach(ingest_cmd);
  ingest_cmd->add_option("--out", ingest_out);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance");
  solve_cmd->add_option("instance", solve.instance)->required();
  solve_cmd->add_option("--algo", solve.algo)
      ->required()
      ->check(CLI::IsMember({"ls0", "ls1", "ls2", "rb", "relaxed", "shrink", "oracle"}));
  solve_cmd->add_option("--seed", solve.seed);
  solve_cmd->add_option("--restarts", solve.restarts);
  solve_cmd->add_option("--lambda", solve.lambda, "Penalty weight for relaxed");
  solve_cmd->add_option("--epsilon", solve.epsilon, "Discount for shrink");
  solve_cmd->add_option("--policy", solve.policy)->check(CLI::IsMember({"uniform", "power"}));
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap (rounds for shrink)");
  solve_cmd->add_option("--threads", solve.threads);
  solve_cmd->add_option("--init", solve.init, "Comma-separated initial centers for ls1");
  solve_cmd->add_option("--profile-mode", solve.profile_mode)->check(CLI::IsMember({"auto", "enumerate", "off"}));
  solve_cmd->add_option("--node-budget", solve.node_budget);
  solve_cmd->add_flag("--no-timing", solve.no_timing);
  solve_cmd->add_option("--out", solve.out);
  solve.csv.attach(solve_cmd);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Minority-fraction and lambda sweeps as CSV");
  bench_cmd->add_option("instance", bench.instance)->required();
  bench_cmd->add_option("--minority-fractions", bench.fractions);
  bench_cmd->add_option("--lambda", bench.lambdas, "Comma-separated lambda grid for relaxed");
  bench_cmd->add_option("--algos", bench.algos, "Solvers for the fraction sweep (ls1,ls2,rb,shrink)");
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--restarts", bench.restarts);
  bench_cmd->add_option("--threads", bench.threads);
  bench_cmd->add_option("--max-iter", bench.max_iter);
  bench_cmd->add_flag("--no-timing", bench.no_timing);
  bench_cmd->add_option("--out", bench.out);
  bench.csv.attach(bench_cmd);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Report instance validation findings");
  validate_cmd->add_option("instance", validate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*ingest_cmd) return cmd_ingest(ingest_path, ingest_csv, ingest_out);
    if (*solve_cmd) return cmd_solve(solve);
    if (*bench_cmd) return cmd_bench(bench);
    if (*validate_cmd) return cmd_validate(validate_path);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const OracleRefusal& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
