#include "bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "divk/divk.hpp"

namespace divk::cli {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Baseline {
  double cost = 0.0;
  std::vector<int> counts;
};

struct Row {
  std::string level, algo, seed;
  std::optional<double> cost, pod, l1, l_star;
  bool feasible = false;
  double seconds = 0.0;
  std::string status = "ok";
};

void emit(std::ostream& out, const Row& r) {
  auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
  out << r.level << ',' << r.algo << ',' << r.seed << ',' << opt(r.cost) << ',' << opt(r.pod) << ','
      << opt(r.l1) << ',' << opt(r.l_star) << ',' << (r.feasible ? "true" : "false") << ',' << num(r.seconds)
      << ',' << r.status << '\n';
}

Row measure(const Instance<double>& inst, const Baseline& base, const SolveReport<double>& report) {
  Row row;
  row.cost = report.solution.cost;
  if (base.cost > 0.0) row.pod = pod(report.solution.cost, base.cost);
  row.l1 = l1_representation(report.solution.per_group_counts, base.counts, inst.k(), inst.num_groups());
  if (inst.total_lower_bound() > 0) row.l_star = violation_fraction(inst, report.solution.centers);
  row.feasible = check(inst, report.solution.centers);
  return row;
}

template <typename Solve>
void sweep_point(std::ostream& out, const Instance<double>& inst, const Baseline& base, const BenchSpec& spec,
                 const std::string& level, const std::string& algo, Solve solve) {
  std::optional<Row> best;
  for (int s = 0; s < spec.restarts; ++s) {
    LSConfig cfg;
    cfg.seed = spec.seed + static_cast<std::uint64_t>(s);
    cfg.restarts = 1;
    cfg.threads = spec.threads;
    cfg.max_iterations = spec.max_iterations;
    Row row;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      row = measure(inst, base, solve(inst, cfg));
    } catch (const InfeasibleError&) {
      row.status = "infeasible";
    } catch (const InconclusiveError&) {
      row.status = "inconclusive";
    } catch (const UsageError&) {
      row.status = "unsupported";
    }
    row.seconds = spec.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() : 0.0;
    row.level = level;
    row.algo = algo;
    row.seed = std::to_string(cfg.seed);
    emit(out, row);
    if (row.status == "ok" && (!best || *row.cost < *best->cost)) best = row;
  }
  Row agg = best.value_or(Row{});
  if (!best) agg.status = "infeasible";
  agg.level = level;
  agg.algo = algo;
  agg.seed = "min";
  emit(out, agg);
}

}  // namespace

Index minority_group(const Instance<double>& inst) {
  if (inst.num_groups() == 0) throw UsageError("instance has no groups");
  Index best = 0;
  for (Index g = 1; g < inst.num_groups(); ++g)
    if (inst.group(g).size() < inst.group(best).size()) best = g;
  return best;
}

std::vector<int> minority_bounds(const Instance<double>& inst, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("minority fraction must lie in [0,1]");
  std::vector<int> bounds(static_cast<std::size_t>(inst.num_groups()), 0);
  // Guard against fraction * k landing a hair above an integer.
  bounds[static_cast<std::size_t>(minority_group(inst))] =
      static_cast<int>(std::ceil(fraction * static_cast<double>(inst.k()) - 1e-9));
  return bounds;
}

void run_bench(const Instance<double>& inst, const BenchSpec& spec, std::ostream& out) {
  out << kBenchHeader << '\n';
  if (spec.minority_fractions.empty() && spec.lambdas.empty()) return;
  require_valid(inst);

  LSConfig base_cfg;
  base_cfg.seed = spec.seed;
  base_cfg.restarts = spec.restarts;
  base_cfg.threads = spec.threads;
  base_cfg.max_iterations = spec.max_iterations;
  const auto t0 = std::chrono::steady_clock::now();
  const auto base_report = ls0(inst, inst.k(), base_cfg);
  Baseline base{base_report.solution.cost, base_report.solution.per_group_counts};
  {
    Row row = measure(inst, base, base_report);
    row.level = "baseline";
    row.algo = "ls0";
    row.seed = std::to_string(spec.seed);
    row.seconds = spec.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() : 0.0;
    emit(out, row);
  }

  for (double fraction : spec.minority_fractions) {
    const auto constrained = inst.with_lower_bounds(minority_bounds(inst, fraction));
    for (const auto& algo : spec.algos) {
      auto solve = [&](const Instance<double>& in, const LSConfig& cfg) -> SolveReport<double> {
        if (algo == "ls1") return ls1(in, cfg);
        if (algo == "ls2") return ls2(in, cfg);
        if (algo == "rb") {
          return solve_with_completion(in, ProfileSolver<double>([&](const Instance<double>& p) {
                                         try {
                                           return std::optional(rb_swap(p, cfg));
                                         } catch (const InfeasibleError&) {
                                           return std::optional<SolveReport<double>>();
                                         }
                                       }));
        }
        if (algo == "shrink") {
          ShrinkConfig sc;
          sc.inner = cfg;
          auto r = iterative_shrinking(in, sc);
          if (!r) throw InconclusiveError("shrinking did not converge");
          return *r;
        }
        throw UsageError("unknown algorithm " + algo);
      };
      sweep_point(out, constrained, base, spec, num(fraction), algo, solve);
    }
  }

  for (double lambda : spec.lambdas) {
    sweep_point(out, inst, base, spec, num(lambda), "relaxed",
                [&](const Instance<double>& in, const LSConfig& cfg) { return relaxed_ls(in, lambda, cfg); });
  }
}

}  // namespace divk::cli
