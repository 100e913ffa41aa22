#pragma once

// Deciding and constructing feasible center sets. For overlapping groups,
// feasibility is NP-hard, so the exact search runs under a node budget and
// reports budget exhaustion as its own outcome.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"
#include "divk/metricspace.hpp"

namespace divk {

inline constexpr long kDefaultNodeBudget = 1'000'000;

// |S| == k and |S ∩ F_i| >= r_i for every group.
template <typename Scalar>
bool check(const Instance<Scalar>& inst, std::span<const Index> centers) {
  std::vector<Index> s(centers.begin(), centers.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (static_cast<Index>(s.size()) != inst.k() || s.size() != centers.size()) return false;
  for (Index f : s)
    if (f < 0 || f >= inst.num_facilities()) return false;
  const auto counts = group_counts(inst, std::span<const Index>(s));
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] < inst.lower_bounds()[i]) return false;
  return true;
}

template <typename Scalar>
bool check(const Instance<Scalar>& inst, const std::vector<Index>& centers) {
  return check(inst, std::span<const Index>(centers));
}

template <typename Scalar>
bool disjoint_feasible(const Instance<Scalar>& inst) {
  if (!inst.disjoint()) throw UsageError("disjoint_feasible called on overlapping groups");
  for (Index i = 0; i < inst.num_groups(); ++i)
    if (static_cast<int>(inst.group(i).size()) < inst.lower_bounds()[static_cast<std::size_t>(i)]) return false;
  return inst.total_lower_bound() <= inst.k() && inst.k() <= inst.num_facilities();
}

template <typename Scalar>
struct FeasibilityResult {
  enum class Status { Found, Infeasible, Inconclusive };
  Status status = Status::Infeasible;
  std::optional<Solution<Scalar>> solution;
  long nodes = 0;
};

namespace detail {

template <typename Scalar>
class FeasibilitySearch {
 public:
  FeasibilitySearch(const Instance<Scalar>& inst, long budget)
      : inst_(inst),
        budget_(budget),
        chosen_(static_cast<std::size_t>(inst.num_facilities()), 0),
        forbidden_(static_cast<std::size_t>(inst.num_facilities()), 0),
        deficit_(inst.lower_bounds().begin(), inst.lower_bounds().end()) {
    for (auto& d : deficit_) d = std::max(d, 0);
  }

  FeasibilityResult<Scalar> run() {
    FeasibilityResult<Scalar> result;
    if (inst_.k() < 1 || inst_.k() > inst_.num_facilities()) {
      result.status = FeasibilityResult<Scalar>::Status::Infeasible;
      return result;
    }
    const bool found = dfs();
    result.nodes = nodes_;
    if (found) {
      result.status = FeasibilityResult<Scalar>::Status::Found;
      result.solution = make_solution(inst_, picked_);
    } else if (exhausted_) {
      result.status = FeasibilityResult<Scalar>::Status::Inconclusive;
    } else {
      result.status = FeasibilityResult<Scalar>::Status::Infeasible;
    }
    return result;
  }

 private:
  bool available(Index f) const {
    return !chosen_[static_cast<std::size_t>(f)] && !forbidden_[static_cast<std::size_t>(f)];
  }

  int deficient_groups_covered(Index f) const {
    int n = 0;
    for (Index g : inst_.groups_of(f)) n += deficit_[static_cast<std::size_t>(g)] > 0;
    return n;
  }

  void choose(Index f, int sign) {
    chosen_[static_cast<std::size_t>(f)] = sign > 0;
    for (Index g : inst_.groups_of(f)) deficit_[static_cast<std::size_t>(g)] -= sign;
    if (sign > 0) {
      picked_.push_back(f);
    } else {
      picked_.pop_back();
    }
  }

  bool dfs() {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const Index slots = inst_.k() - static_cast<Index>(picked_.size());
    Index target = -1;
    int max_def = 0;
    long long sum_def = 0;
    for (std::size_t g = 0; g < deficit_.size(); ++g) {
      if (deficit_[g] > 0) sum_def += deficit_[g];
      if (deficit_[g] > max_def) {
        max_def = deficit_[g];
        target = static_cast<Index>(g);
      }
    }
    if (target < 0) {
      // All bounds met; pad with the lowest unchosen ids.
      for (Index f = 0; f < inst_.num_facilities() && static_cast<Index>(picked_.size()) < inst_.k(); ++f)
        if (!chosen_[static_cast<std::size_t>(f)]) picked_.push_back(f);
      return static_cast<Index>(picked_.size()) == inst_.k();
    }
    if (slots < max_def) return false;

    // Residual groups that share no available facility need sum(deficit) slots.
    bool residue_disjoint = true;
    for (Index f = 0; f < inst_.num_facilities() && residue_disjoint; ++f)
      if (available(f) && deficient_groups_covered(f) > 1) residue_disjoint = false;
    if (residue_disjoint && slots < sum_def) return false;

    for (std::size_t g = 0; g < deficit_.size(); ++g) {
      if (deficit_[g] <= 0) continue;
      int avail = 0;
      for (Index f : inst_.group(static_cast<Index>(g)))
        if (f >= 0 && f < inst_.num_facilities() && available(f)) ++avail;
      if (avail < deficit_[g]) return false;
    }

    std::vector<std::pair<int, Index>> candidates;
    for (Index f : inst_.group(target))
      if (f >= 0 && f < inst_.num_facilities() && available(f))
        candidates.emplace_back(-deficient_groups_covered(f), f);
    std::sort(candidates.begin(), candidates.end());

    std::vector<Index> excluded;
    bool found = false;
    for (auto [score, f] : candidates) {
      choose(f, +1);
      if (dfs()) {
        found = true;
        break;
      }
      choose(f, -1);
      if (exhausted_) break;
      // Later siblings never contain f: that part of the space is covered.
      forbidden_[static_cast<std::size_t>(f)] = 1;
      excluded.push_back(f);
    }
    for (Index f : excluded) forbidden_[static_cast<std::size_t>(f)] = 0;
    return found;
  }

  const Instance<Scalar>& inst_;
  long budget_;
  long nodes_ = 0;
  bool exhausted_ = false;
  std::vector<char> chosen_;
  std::vector<char> forbidden_;
  std::vector<int> deficit_;
  std::vector<Index> picked_;
};

}  // namespace detail

// Branch and bound over the max-deficit group, candidates ordered by how many
// deficient groups they cover.
template <typename Scalar>
FeasibilityResult<Scalar> find_feasible_exact(const Instance<Scalar>& inst,
                                              long node_budget = kDefaultNodeBudget) {
  require_valid(inst);
  return detail::FeasibilitySearch<Scalar>(inst, node_budget).run();
}

// Picks the facility covering the most deficient groups (lowest id on ties)
// until the bounds are met, then pads with the lowest free ids. Heuristic:
// may miss feasible solutions.
template <typename Scalar>
std::optional<Solution<Scalar>> greedy_feasible(const Instance<Scalar>& inst) {
  require_valid(inst);
  std::vector<int> deficit(inst.lower_bounds().begin(), inst.lower_bounds().end());
  std::vector<char> chosen(static_cast<std::size_t>(inst.num_facilities()), 0);
  std::vector<Index> picked;
  while (static_cast<Index>(picked.size()) < inst.k()) {
    Index best = -1;
    int best_cover = 0;
    for (Index f = 0; f < inst.num_facilities(); ++f) {
      if (chosen[static_cast<std::size_t>(f)]) continue;
      int cover = 0;
      for (Index g : inst.groups_of(f)) cover += deficit[static_cast<std::size_t>(g)] > 0;
      if (cover > best_cover) {
        best_cover = cover;
        best = f;
      }
    }
    if (best < 0) break;
    chosen[static_cast<std::size_t>(best)] = 1;
    picked.push_back(best);
    for (Index g : inst.groups_of(best)) --deficit[static_cast<std::size_t>(g)];
  }
  for (Index f = 0; f < inst.num_facilities() && static_cast<Index>(picked.size()) < inst.k(); ++f) {
    if (!chosen[static_cast<std::size_t>(f)]) {
      chosen[static_cast<std::size_t>(f)] = 1;
      picked.push_back(f);
    }
  }
  if (!check(inst, picked)) return std::nullopt;
  return make_solution(inst, std::move(picked));
}

// Independence in the partition matroid {A : |A ∩ F_i| <= r_i}.
template <typename Scalar>
bool partition_matroid_independent(const Instance<Scalar>& inst, std::span<const Index> centers) {
  if (!inst.disjoint()) throw UsageError("partition matroid needs disjoint groups");
  const auto counts = group_counts(inst, centers);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > inst.lower_bounds()[i]) return false;
  return true;
}

template <typename Scalar>
bool partition_matroid_independent(const Instance<Scalar>& inst, const std::vector<Index>& centers) {
  return partition_matroid_independent(inst, std::span<const Index>(centers));
}

// Fills each group up to exactly r_i, choosing at every step the member that
// gives the lowest resulting cost (lowest id on ties).
template <typename Scalar>
Solution<Scalar> complete_solution(const Instance<Scalar>& inst, std::vector<Index> partial) {
  if (!inst.disjoint()) throw UsageError("completion needs disjoint groups");
  if (inst.total_lower_bound() != inst.k()) throw UsageError("completion needs sum(r) == k");
  if (!partition_matroid_independent(inst, partial)) throw UsageError("partial solution is not independent");
  for (Index i = 0; i < inst.num_groups(); ++i)
    if (static_cast<int>(inst.group(i).size()) < inst.lower_bounds()[static_cast<std::size_t>(i)])
      throw InfeasibleError("group " + std::to_string(i) + " is smaller than its lower bound");

  std::vector<char> chosen(static_cast<std::size_t>(inst.num_facilities()), 0);
  for (Index f : partial) chosen[static_cast<std::size_t>(f)] = 1;
  auto counts = group_counts(inst, std::span<const Index>(partial));
  for (Index i = 0; i < inst.num_groups(); ++i) {
    const auto gi = static_cast<std::size_t>(i);
    while (counts[gi] < inst.lower_bounds()[gi]) {
      Index best = -1;
      Scalar best_cost = 0;
      for (Index f : inst.group(i)) {
        if (chosen[static_cast<std::size_t>(f)]) continue;
        partial.push_back(f);
        const Scalar cost = kmedian_cost(inst, partial);
        partial.pop_back();
        if (best < 0 || cost < best_cost) {
          best = f;
          best_cost = cost;
        }
      }
      chosen[static_cast<std::size_t>(best)] = 1;
      partial.push_back(best);
      ++counts[gi];
    }
  }
  return make_solution(inst, std::move(partial));
}

}  // namespace divk
