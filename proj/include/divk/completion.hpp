#pragma once

// sum(r) < k on disjoint groups: try every way of raising the lower bounds to
// a profile r' >= r with sum(r') = k and keep the cheapest result. With
// disjoint groups and sum(r') = k the bounds hold with equality.

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"
#include "divk/localsearch.hpp"
#include "divk/oracle.hpp"

namespace divk {

struct ConstraintProfile {
  std::vector<int> bounds;

  friend bool operator==(const ConstraintProfile&, const ConstraintProfile&) = default;
};

// Number of profiles when group sizes do not cap anything: C(k - sum(r) + t - 1, t - 1).
inline double profile_count(const std::vector<int>& lower_bounds, Index k) {
  long long total = 0;
  for (int r : lower_bounds) total += r;
  const Index t = static_cast<Index>(lower_bounds.size());
  if (total > k || t == 0) return total == k ? 1.0 : 0.0;
  return binomial(k - static_cast<Index>(total) + t - 1, t - 1);
}

// All r' with r <= r' <= group_sizes componentwise and sum(r') = k, in
// lexicographic order.
inline std::vector<ConstraintProfile> enumerate_profiles(const std::vector<int>& lower_bounds,
                                                         const std::vector<Index>& group_sizes, Index k) {
  if (lower_bounds.size() != group_sizes.size()) throw UsageError("lower bounds and group sizes differ in length");
  long long total = 0;
  for (int r : lower_bounds) total += r;
  if (total > k) throw InfeasibleError("sum of lower bounds exceeds k");

  std::vector<ConstraintProfile> out;
  const std::size_t t = lower_bounds.size();
  if (t == 0) return out;
  // Largest total the groups after position i can still absorb.
  std::vector<long long> tail_room(t + 1, 0);
  for (std::size_t i = t; i-- > 0;) tail_room[i] = tail_room[i + 1] + group_sizes[i];

  std::vector<int> current(t);
  std::function<void(std::size_t, long long)> rec = [&](std::size_t i, long long left) {
    if (i + 1 == t) {
      if (left >= lower_bounds[i] && left <= group_sizes[i]) {
        current[i] = static_cast<int>(left);
        out.push_back({current});
      }
      return;
    }
    long long rest_min = 0;
    for (std::size_t j = i + 1; j < t; ++j) rest_min += lower_bounds[j];
    for (long long v = lower_bounds[i]; v <= group_sizes[i] && v + rest_min <= left; ++v) {
      if (left - v > tail_room[i + 1]) continue;
      current[i] = static_cast<int>(v);
      rec(i + 1, left - v);
    }
  };
  rec(0, k);
  return out;
}

template <typename Scalar>
using ProfileSolver = std::function<std::optional<SolveReport<Scalar>>(const Instance<Scalar>&)>;

struct CompletionConfig {
  int threads = 1;
};

// Red-blue swap for two groups, tuple search otherwise. Infeasible profiles
// yield no report.
template <typename Scalar>
ProfileSolver<Scalar> default_profile_solver(const LSConfig& cfg) {
  return [cfg](const Instance<Scalar>& inst) -> std::optional<SolveReport<Scalar>> {
    try {
      return inst.num_groups() == 2 ? rb_swap(inst, cfg) : ls2(inst, cfg);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };
}

template <typename Scalar>
ProfileSolver<Scalar> exact_profile_solver(const OracleLimits& limits = {}) {
  return [limits](const Instance<Scalar>& inst) -> std::optional<SolveReport<Scalar>> {
    auto sol = exact_solve(inst, limits);
    if (!sol) return std::nullopt;
    SolveReport<Scalar> report;
    report.initial_cost = report.final_cost = sol->cost;
    report.trace = {sol->cost};
    report.feasible = true;
    report.solution = std::move(*sol);
    return report;
  };
}

// Runs `solver` on every profile and returns the cheapest report (ties: the
// lexicographically first profile). Facilities outside every group form an
// extra zero-bound slot so they stay selectable.
template <typename Scalar>
SolveReport<Scalar> solve_with_completion(const Instance<Scalar>& inst, const ProfileSolver<Scalar>& solver,
                                          const CompletionConfig& cfg = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  require_valid(inst);
  if (!inst.disjoint()) throw UsageError("profile completion needs disjoint groups");

  auto groups = inst.groups();
  std::vector<int> bounds = inst.lower_bounds();
  std::vector<Index> ungrouped;
  for (Index f = 0; f < inst.num_facilities(); ++f)
    if (inst.groups_of(f).empty()) ungrouped.push_back(f);
  const std::size_t t = groups.size();
  if (!ungrouped.empty()) {
    groups.push_back(ungrouped);
    bounds.push_back(0);
  }
  std::vector<Index> sizes;
  for (const auto& g : groups) sizes.push_back(static_cast<Index>(g.size()));
  const auto profiles = enumerate_profiles(bounds, sizes, inst.k());
  const auto base = inst.with_groups(groups, bounds);

  auto results = detail::run_restarts(static_cast<int>(profiles.size()), cfg.threads, [&](int p) {
    return solver(base.with_lower_bounds(profiles[static_cast<std::size_t>(p)].bounds));
  });

  std::optional<std::size_t> best;
  for (std::size_t p = 0; p < results.size(); ++p) {
    if (!results[p]) continue;
    if (!best || results[p]->solution.cost < results[*best]->solution.cost) best = p;
  }
  if (!best) throw InfeasibleError("no constraint profile admits a feasible solution");

  SolveReport<Scalar> report = std::move(*results[*best]);
  report.solution = make_solution(inst, report.solution.centers);
  report.feasible = check(inst, report.solution.centers);
  const auto& winner = profiles[*best].bounds;
  report.profile = std::vector<int>(winner.begin(), winner.begin() + static_cast<std::ptrdiff_t>(t));
  report.seconds = detail::elapsed_since(t0);
  return report;
}

}  // namespace divk
