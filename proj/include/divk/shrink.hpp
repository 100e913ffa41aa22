#pragma once

// Iterative distance shrinking: solve unconstrained k-median, and while some
// group is under-represented, scale down the distances of every facility in a
// deficient group, then solve again.

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <type_traits>
#include <vector>

#include "divk/errors.hpp"
#include "divk/feasibility.hpp"
#include "divk/instance.hpp"
#include "divk/localsearch.hpp"
#include "divk/metricspace.hpp"

namespace divk {

enum class DiscountPolicy { Uniform, Power };

struct ShrinkConfig {
  double epsilon = 0.1;
  int max_iter = 50;
  DiscountPolicy policy = DiscountPolicy::Power;
  LSConfig inner;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
    inner.validate();
  }
};

// Factor for a facility whose deficient groups have the given positive
// deficits (one entry per group). Only the number of entries matters.
inline double discount(std::span<const int> deficits, DiscountPolicy policy, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
  if (deficits.empty()) return 1.0;
  if (policy == DiscountPolicy::Uniform) return 1.0 - epsilon;
  return std::pow(1.0 - epsilon, static_cast<double>(deficits.size()));
}

template <typename Scalar>
struct ShrinkRound {
  int round = 0;                      // 0-based
  const Matrix<Scalar>* working = nullptr;  // distances the round solved on
  std::vector<Index> centers;
  std::vector<int> deficits;          // per group, after this round's solve
  std::vector<double> factors;        // per facility, applied after this round
};

template <typename Scalar>
using ShrinkObserver = std::function<void(const ShrinkRound<Scalar>&)>;

// Returns the first feasible solution, with its cost on the original
// distances, or nothing after max_iter rounds.
template <typename Scalar>
std::optional<SolveReport<Scalar>> iterative_shrinking(const Instance<Scalar>& inst, const ShrinkConfig& cfg,
                                                       const std::type_identity_t<ShrinkObserver<Scalar>>& observer = {}) {
  cfg.validate();
  require_valid(inst);
  const auto t0 = std::chrono::steady_clock::now();
  const Index m = inst.num_facilities();
  const Index t = inst.num_groups();

  Matrix<Scalar> working = inst.dense_distances();
  SolveReport<Scalar> report;
  report.seed = cfg.inner.seed;

  for (int round = 0; round < cfg.max_iter; ++round) {
    LSConfig inner = cfg.inner;
    inner.seed = cfg.inner.seed + static_cast<std::uint64_t>(round);
    const auto shrunk = inst.with_distances(working);
    const auto inner_report = ls0(shrunk, inst.k(), inner);
    const auto& centers = inner_report.solution.centers;
    ++report.iterations;
    report.swaps_accepted += inner_report.swaps_accepted;

    const auto original = make_solution(inst, centers);
    if (round == 0) report.initial_cost = original.cost;
    report.trace.push_back(original.cost);

    ShrinkRound<Scalar> info;
    info.round = round;
    info.working = &working;
    info.centers = centers;
    info.deficits.resize(static_cast<std::size_t>(t));
    bool satisfied = true;
    for (Index j = 0; j < t; ++j) {
      const auto i = static_cast<std::size_t>(j);
      info.deficits[i] = std::max(inst.lower_bounds()[i] - original.per_group_counts[i], 0);
      if (info.deficits[i] > 0) satisfied = false;
    }

    if (satisfied) {
      info.factors.assign(static_cast<std::size_t>(m), 1.0);
      if (observer) observer(info);
      report.solution = original;
      report.final_cost = original.cost;
      report.feasible = check(inst, original.centers);
      report.termination = Termination::LocalOptimum;
      report.seconds = detail::elapsed_since(t0);
      return report;
    }

    info.factors.resize(static_cast<std::size_t>(m));
    std::vector<int> own;
    for (Index f = 0; f < m; ++f) {
      own.clear();
      for (Index g : inst.groups_of(f)) {
        const int d = info.deficits[static_cast<std::size_t>(g)];
        if (d > 0) own.push_back(d);
      }
      info.factors[static_cast<std::size_t>(f)] = discount(own, cfg.policy, cfg.epsilon);
    }
    if (observer) observer(info);
    for (Index f = 0; f < m; ++f) {
      const double sigma = info.factors[static_cast<std::size_t>(f)];
      if (sigma != 1.0) working.col(f) *= static_cast<Scalar>(sigma);
    }
  }
  return std::nullopt;
}

}  // namespace divk
