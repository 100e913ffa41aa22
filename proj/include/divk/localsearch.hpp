#pragma once

// Swap-based local search: unconstrained single swaps (LS-0), feasibility
// preserving single swaps (LS-1), tuple swaps over per-group slots (LS-2) and
// the red-blue pair swap. All variants use best improvement with ties broken
// by scan order, so runs are reproducible for a fixed seed.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "divk/errors.hpp"
#include "divk/feasibility.hpp"
#include "divk/instance.hpp"
#include "divk/metricspace.hpp"

namespace divk {

struct LSConfig {
  double delta = 1e-9;                  // relative improvement threshold
  std::optional<long> max_iterations;   // default 10 * m * k
  std::uint64_t seed = 0;
  int restarts = 10;
  long scan_budget = 1'000'000;         // tuple scans larger than this are sampled
  int threads = 1;
  bool record_states = false;
  long node_budget = kDefaultNodeBudget;

  void validate() const {
    if (!(delta >= 0.0)) throw ParameterError("improvement threshold must be >= 0");
    if (max_iterations && *max_iterations < 1) throw ParameterError("max iterations must be >= 1");
    if (restarts < 1) throw ParameterError("restarts must be >= 1");
    if (scan_budget < 1) throw ParameterError("scan budget must be >= 1");
  }

  long iteration_cap(Index m, Index k) const {
    return max_iterations.value_or(std::max<long>(1, 10 * static_cast<long>(m) * static_cast<long>(k)));
  }
};

enum class Termination { LocalOptimum, IterationCap, SampledOptimum };

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::LocalOptimum: return "local_optimum";
    case Termination::IterationCap: return "iteration_cap";
    case Termination::SampledOptimum: return "sampled_optimum";
  }
  return "?";
}

template <typename Scalar>
struct SolveReport {
  Solution<Scalar> solution;
  Scalar initial_cost = 0;  // objective at the start state
  Scalar final_cost = 0;    // objective at the end state
  long iterations = 0;
  long swaps_accepted = 0;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  Termination termination = Termination::LocalOptimum;
  bool feasible = false;
  std::vector<Scalar> trace;                     // objective after each accepted move
  std::vector<std::vector<Index>> states;        // filled when record_states is set
  std::optional<std::vector<int>> profile;       // winning constraint profile
  std::optional<double> violation_fraction;
};

namespace detail {

inline double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

template <typename T>
void shuffle_prefix(std::vector<T>& v, std::size_t count, std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count && i + 1 < v.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, v.size() - 1);
    std::swap(v[i], v[pick(rng)]);
  }
}

inline std::vector<Index> random_subset(Index m, Index k, std::mt19937_64& rng) {
  std::vector<Index> ids(static_cast<std::size_t>(m));
  std::iota(ids.begin(), ids.end(), Index{0});
  shuffle_prefix(ids, static_cast<std::size_t>(k), rng);
  ids.resize(static_cast<std::size_t>(k));
  std::sort(ids.begin(), ids.end());
  return ids;
}

// Runs fn(r) for r in [0, restarts) and returns the results in restart order.
template <typename Fn>
auto run_restarts(int restarts, int threads, Fn fn) {
  using Result = decltype(fn(0));
  std::vector<Result> out;
  out.reserve(static_cast<std::size_t>(restarts));
  if (threads <= 1) {
    for (int r = 0; r < restarts; ++r) out.push_back(fn(r));
    return out;
  }
  for (int base = 0; base < restarts; base += threads) {
    std::vector<std::future<Result>> batch;
    for (int r = base; r < std::min(restarts, base + threads); ++r)
      batch.push_back(std::async(std::launch::async, fn, r));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

// Lowest final objective wins; ties go to the earliest restart.
template <typename Scalar>
SolveReport<Scalar> best_of(std::vector<SolveReport<Scalar>> runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].final_cost < runs[best].final_cost) best = i;
  return std::move(runs[best]);
}

enum class SwapRule { Free, KeepFeasible };

// Change in sum_i r_i / (c_i + 1) when `out` leaves and `in` joins.
template <typename Scalar>
Scalar frac_penalty_delta(const Instance<Scalar>& inst, const std::vector<int>& counts, Index out, Index in) {
  const auto& go = inst.groups_of(out);
  const auto& gi = inst.groups_of(in);
  Scalar d = 0;
  for (Index g : go) {
    if (std::binary_search(gi.begin(), gi.end(), g)) continue;
    const auto i = static_cast<std::size_t>(g);
    const Scalar r = static_cast<Scalar>(inst.lower_bounds()[i]);
    d += r / static_cast<Scalar>(counts[i]) - r / static_cast<Scalar>(counts[i] + 1);
  }
  for (Index g : gi) {
    if (std::binary_search(go.begin(), go.end(), g)) continue;
    const auto i = static_cast<std::size_t>(g);
    const Scalar r = static_cast<Scalar>(inst.lower_bounds()[i]);
    d += r / static_cast<Scalar>(counts[i] + 2) - r / static_cast<Scalar>(counts[i] + 1);
  }
  return d;
}

template <typename Scalar>
Scalar frac_penalty_of_counts(const Instance<Scalar>& inst, const std::vector<int>& counts) {
  Scalar p = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    p += static_cast<Scalar>(inst.lower_bounds()[i]) / static_cast<Scalar>(counts[i] + 1);
  return p;
}

// A feasible S stays feasible under out -> in unless out is the last needed
// member of some group that `in` does not belong to.
template <typename Scalar>
bool swap_keeps_feasible(const Instance<Scalar>& inst, const std::vector<int>& counts, Index out, Index in) {
  const auto& gi = inst.groups_of(in);
  for (Index g : inst.groups_of(out)) {
    if (std::binary_search(gi.begin(), gi.end(), g)) continue;
    const auto i = static_cast<std::size_t>(g);
    if (counts[i] - 1 < inst.lower_bounds()[i]) return false;
  }
  return true;
}

// Best-improvement single-swap descent on cost + lambda * fractional penalty.
template <typename Scalar>
SolveReport<Scalar> single_swap_descent(const Instance<Scalar>& inst, std::vector<Index> start,
                                        const LSConfig& cfg, SwapRule rule, Scalar lambda) {
  const auto t0 = std::chrono::steady_clock::now();
  std::sort(start.begin(), start.end());
  const Index m = inst.num_facilities();
  const Index k = static_cast<Index>(start.size());
  const long cap = cfg.iteration_cap(m, k);

  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  for (Index f : start) in_set[static_cast<std::size_t>(f)] = 1;
  std::vector<int> counts = group_counts(inst, std::span<const Index>(start));
  std::optional<CostCache<Scalar>> cache;
  Scalar cost;
  if (k >= 2) {
    cache = build_cache(inst, start);
    cost = cache->total;
  } else {
    cost = kmedian_cost(inst, start);
  }
  auto penalty = [&] { return lambda == Scalar(0) ? Scalar(0) : lambda * frac_penalty_of_counts(inst, counts); };

  SolveReport<Scalar> report;
  report.seed = cfg.seed;
  Scalar objective = cost + penalty();
  report.initial_cost = objective;
  report.trace.push_back(objective);
  if (cfg.record_states) report.states.push_back(start);

  std::vector<Index> centers = start;
  report.termination = Termination::IterationCap;
  while (report.iterations < cap) {
    ++report.iterations;
    Scalar best = std::numeric_limits<Scalar>::infinity();
    Index best_out = -1, best_in = -1;
    for (Index out : centers) {
      for (Index in = 0; in < m; ++in) {
        if (in_set[static_cast<std::size_t>(in)]) continue;
        if (rule == SwapRule::KeepFeasible && !swap_keeps_feasible(inst, counts, out, in)) continue;
        Scalar d = cache ? swap_delta(inst, *cache, out, in)
                         : kmedian_cost(inst, std::vector<Index>{in}) - cost;
        if (lambda != Scalar(0)) d += lambda * frac_penalty_delta(inst, counts, out, in);
        if (d < best) {
          best = d;
          best_out = out;
          best_in = in;
        }
      }
    }
    if (best_out < 0 || !(best < -static_cast<Scalar>(cfg.delta) * objective) || !(best < Scalar(0))) {
      report.termination = Termination::LocalOptimum;
      break;
    }
    if (cache) {
      apply_swap(inst, *cache, best_out, best_in);
      cost = cache->total;
    } else {
      cost = kmedian_cost(inst, std::vector<Index>{best_in});
    }
    for (Index g : inst.groups_of(best_out)) --counts[static_cast<std::size_t>(g)];
    for (Index g : inst.groups_of(best_in)) ++counts[static_cast<std::size_t>(g)];
    in_set[static_cast<std::size_t>(best_out)] = 0;
    in_set[static_cast<std::size_t>(best_in)] = 1;
    centers.erase(std::lower_bound(centers.begin(), centers.end(), best_out));
    centers.insert(std::lower_bound(centers.begin(), centers.end(), best_in), best_in);
    objective = cost + penalty();
    ++report.swaps_accepted;
    report.trace.push_back(objective);
    if (cfg.record_states) report.states.push_back(centers);
  }

  report.final_cost = objective;
  report.solution = make_solution(inst, centers);
  report.feasible = check(inst, report.solution.centers);
  report.seconds = elapsed_since(t0);
  return report;
}

// Tuple-swap descent. parts[0..t) hold the per-group slots S_i (members of
// F_i), parts[t] the free pool. Each coordinate either stays or swaps one of
// its members for a non-center from its domain (F_i for groups, all
// facilities for the pool).
template <typename Scalar>
SolveReport<Scalar> tuple_descent(const Instance<Scalar>& inst, std::vector<std::vector<Index>> parts,
                                  const LSConfig& cfg, bool allow_sampling, std::mt19937_64& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  const Index m = inst.num_facilities();
  const Index t = inst.num_groups();
  std::vector<Index> centers;
  for (const auto& p : parts) centers.insert(centers.end(), p.begin(), p.end());
  std::sort(centers.begin(), centers.end());
  const Index k = static_cast<Index>(centers.size());
  const long cap = cfg.iteration_cap(m, k);

  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  for (Index f : centers) in_set[static_cast<std::size_t>(f)] = 1;

  SolveReport<Scalar> report;
  report.seed = cfg.seed;
  Scalar cost = kmedian_cost(inst, centers);
  report.initial_cost = cost;
  report.trace.push_back(cost);
  if (cfg.record_states) report.states.push_back(centers);

  using Move = std::pair<Index, Index>;  // (out, in)
  std::vector<Index> removed, added;
  report.termination = Termination::IterationCap;
  while (report.iterations < cap) {
    ++report.iterations;
    RankedCache<Scalar> ranked(inst, centers);
    const auto counts = group_counts(inst, std::span<const Index>(centers));

    std::vector<std::vector<Move>> moves(parts.size());
    for (std::size_t j = 0; j < parts.size(); ++j) {
      for (Index s : parts[j]) {
        if (static_cast<Index>(j) < t) {
          for (Index f : inst.group(static_cast<Index>(j)))
            if (!in_set[static_cast<std::size_t>(f)]) moves[j].emplace_back(s, f);
        } else {
          for (Index f = 0; f < m; ++f)
            if (!in_set[static_cast<std::size_t>(f)]) moves[j].emplace_back(s, f);
        }
      }
    }
    double space = 1.0;
    for (const auto& mv : moves) space *= static_cast<double>(mv.size() + 1);
    const bool sampled = allow_sampling && space - 1.0 > static_cast<double>(cfg.scan_budget);

    Scalar best = std::numeric_limits<Scalar>::infinity();
    std::vector<std::size_t> best_choice;
    std::vector<std::size_t> choice(parts.size(), 0);
    std::vector<int> trial(counts.size());

    auto evaluate = [&] {
      removed.clear();
      added.clear();
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (choice[j] == 0) continue;
        const Move& mv = moves[j][choice[j] - 1];
        removed.push_back(mv.first);
        if (std::find(added.begin(), added.end(), mv.second) != added.end()) return;
        added.push_back(mv.second);
      }
      if (added.empty()) return;
      trial = counts;
      for (Index f : removed)
        for (Index g : inst.groups_of(f)) --trial[static_cast<std::size_t>(g)];
      for (Index f : added)
        for (Index g : inst.groups_of(f)) ++trial[static_cast<std::size_t>(g)];
      for (std::size_t g = 0; g < trial.size(); ++g)
        if (trial[g] < inst.lower_bounds()[g]) return;
      const Scalar d = ranked.cost_after(removed, added) - cost;
      if (d < best) {
        best = d;
        best_choice = choice;
      }
    };

    if (!sampled) {
      // Odometer over all coordinates, first coordinate most significant.
      auto advance = [&] {
        for (std::size_t j = parts.size(); j-- > 0;) {
          if (++choice[j] <= moves[j].size()) return true;
          choice[j] = 0;
        }
        return false;
      };
      while (advance()) evaluate();
    } else {
      for (long s = 0; s < cfg.scan_budget; ++s) {
        for (std::size_t j = 0; j < parts.size(); ++j) {
          std::uniform_int_distribution<std::size_t> pick(0, moves[j].size());
          choice[j] = pick(rng);
        }
        evaluate();
      }
    }

    if (best_choice.empty() || !(best < -static_cast<Scalar>(cfg.delta) * cost) || !(best < Scalar(0))) {
      report.termination = sampled ? Termination::SampledOptimum : Termination::LocalOptimum;
      break;
    }
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (best_choice[j] == 0) continue;
      const auto [out, in] = moves[j][best_choice[j] - 1];
      std::replace(parts[j].begin(), parts[j].end(), out, in);
      in_set[static_cast<std::size_t>(out)] = 0;
      in_set[static_cast<std::size_t>(in)] = 1;
    }
    centers.clear();
    for (const auto& p : parts) centers.insert(centers.end(), p.begin(), p.end());
    std::sort(centers.begin(), centers.end());
    cost = kmedian_cost(inst, centers);
    ++report.swaps_accepted;
    report.trace.push_back(cost);
    if (cfg.record_states) report.states.push_back(centers);
  }

  report.final_cost = cost;
  report.solution = make_solution(inst, centers);
  report.feasible = check(inst, report.solution.centers);
  report.seconds = elapsed_since(t0);
  return report;
}

// Random S_i ⊆ F_i with |S_i| = r_i, plus a pool of k - sum(r) other facilities.
template <typename Scalar>
std::vector<std::vector<Index>> random_group_slots(const Instance<Scalar>& inst, std::mt19937_64& rng) {
  const Index t = inst.num_groups();
  std::vector<std::vector<Index>> parts(static_cast<std::size_t>(t + 1));
  std::vector<char> used(static_cast<std::size_t>(inst.num_facilities()), 0);
  for (Index i = 0; i < t; ++i) {
    std::vector<Index> members = inst.group(i);
    const auto r = static_cast<std::size_t>(inst.lower_bounds()[static_cast<std::size_t>(i)]);
    if (members.size() < r) throw InfeasibleError("group " + std::to_string(i) + " is smaller than its lower bound");
    shuffle_prefix(members, r, rng);
    members.resize(r);
    std::sort(members.begin(), members.end());
    for (Index f : members) used[static_cast<std::size_t>(f)] = 1;
    parts[static_cast<std::size_t>(i)] = std::move(members);
  }
  std::vector<Index> rest;
  for (Index f = 0; f < inst.num_facilities(); ++f)
    if (!used[static_cast<std::size_t>(f)]) rest.push_back(f);
  const auto pool = static_cast<std::size_t>(inst.k() - inst.total_lower_bound());
  if (rest.size() < pool) throw InfeasibleError("not enough facilities for the free pool");
  shuffle_prefix(rest, pool, rng);
  rest.resize(pool);
  std::sort(rest.begin(), rest.end());
  parts.back() = std::move(rest);
  return parts;
}

}  // namespace detail

// Unconstrained k-median local search from uniformly random k-subsets; best of
// cfg.restarts runs.
template <typename Scalar>
SolveReport<Scalar> ls0(const Instance<Scalar>& inst, Index k, const LSConfig& cfg) {
  cfg.validate();
  if (k < 1 || k > inst.num_facilities()) throw UsageError("ls0 needs 1 <= k <= m");
  auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = detail::restart_rng(cfg.seed, r);
    return detail::single_swap_descent(inst, detail::random_subset(inst.num_facilities(), k, rng), cfg,
                                       detail::SwapRule::Free, Scalar(0));
  });
  return detail::best_of(std::move(runs));
}

// Single swaps restricted to feasible neighbors. Start: `init` if given, else
// the greedy construction, else exact search.
template <typename Scalar>
SolveReport<Scalar> ls1(const Instance<Scalar>& inst, const LSConfig& cfg,
                        std::optional<std::vector<Index>> init = std::nullopt) {
  cfg.validate();
  require_valid(inst);
  std::vector<Index> start;
  if (init) {
    if (!check(inst, *init)) throw UsageError("initial solution is not feasible");
    start = *init;
  } else if (auto greedy = greedy_feasible(inst)) {
    start = greedy->centers;
  } else {
    auto exact = find_feasible_exact(inst, cfg.node_budget);
    using Status = typename FeasibilityResult<Scalar>::Status;
    if (exact.status == Status::Inconclusive) throw InconclusiveError("feasibility search exhausted its node budget");
    if (exact.status == Status::Infeasible) throw InfeasibleError("instance has no feasible solution");
    start = exact.solution->centers;
  }
  return detail::single_swap_descent(inst, std::move(start), cfg, detail::SwapRule::KeepFeasible, Scalar(0));
}

// Tuple-swap local search for disjoint groups with sum(r) <= k.
template <typename Scalar>
SolveReport<Scalar> ls2(const Instance<Scalar>& inst, const LSConfig& cfg) {
  cfg.validate();
  require_valid(inst);
  if (!inst.disjoint()) throw UsageError("ls2 needs disjoint groups");
  if (!disjoint_feasible(inst)) throw InfeasibleError("instance has no feasible solution");
  auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = detail::restart_rng(cfg.seed, r);
    auto parts = detail::random_group_slots(inst, rng);
    return detail::tuple_descent(inst, std::move(parts), cfg, true, rng);
  });
  return detail::best_of(std::move(runs));
}

// Red-blue pair swap for two disjoint groups with r1 + r2 = k. The neighborhood
// swaps one red and/or one blue center for another facility of the same color,
// so per-group counts stay at exactly (r1, r2).
template <typename Scalar>
SolveReport<Scalar> rb_swap(const Instance<Scalar>& inst, const LSConfig& cfg) {
  cfg.validate();
  require_valid(inst);
  if (inst.num_groups() != 2) throw UsageError("red-blue swap needs exactly two groups");
  if (!inst.disjoint()) throw UsageError("red-blue swap needs disjoint groups");
  if (inst.total_lower_bound() != inst.k()) throw UsageError("red-blue swap needs r1 + r2 == k");
  if (!disjoint_feasible(inst)) throw InfeasibleError("instance has no feasible solution");
  auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = detail::restart_rng(cfg.seed, r);
    auto parts = detail::random_group_slots(inst, rng);
    return detail::tuple_descent(inst, std::move(parts), cfg, false, rng);
  });
  return detail::best_of(std::move(runs));
}

}  // namespace divk
