#pragma once

// Brute-force ground truth: every k-subset of facilities, and exhaustive
// dominating-set / vertex-cover search for the reduction checks.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "divk/errors.hpp"
#include "divk/feasibility.hpp"
#include "divk/instance.hpp"
#include "divk/metricspace.hpp"

namespace divk {

struct OracleLimits {
  double max_subsets = 1e7;
  Index max_graph_vertices = 16;
};

inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

namespace detail {

// Calls visit(subset) for every k-subset of {0..n-1} in lexicographic order
// until visit returns false.
template <typename Visit>
void for_each_subset(Index n, Index k, Visit visit) {
  if (k < 0 || k > n) return;
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!visit(static_cast<const std::vector<Index>&>(idx))) return;
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

// Minimum-cost feasible k-subset; ties go to the lexicographically smallest set.
template <typename Scalar>
std::optional<Solution<Scalar>> exact_solve(const Instance<Scalar>& inst, const OracleLimits& limits = {}) {
  require_valid(inst);
  const double count = binomial(inst.num_facilities(), inst.k());
  if (count > limits.max_subsets) {
    throw OracleRefusal("enumeration of " + std::to_string(static_cast<long long>(count)) +
                            " subsets exceeds the oracle cap",
                        count);
  }
  std::optional<std::vector<Index>> best;
  Scalar best_cost = 0;
  detail::for_each_subset(inst.num_facilities(), inst.k(), [&](const std::vector<Index>& s) {
    if (!check(inst, s)) return true;
    const Scalar cost = kmedian_cost(inst, s);
    if (!best || cost < best_cost) {
      best = s;
      best_cost = cost;
    }
    return true;
  });
  if (!best) return std::nullopt;
  return make_solution(inst, std::move(*best));
}

namespace detail {

template <typename Covers>
std::optional<std::vector<Index>> smallest_cover(const Graph& g, Index k, const OracleLimits& limits, Covers covers) {
  if (g.num_vertices() > limits.max_graph_vertices) {
    throw OracleRefusal("graph exceeds the oracle vertex cap", static_cast<double>(g.num_vertices()));
  }
  std::optional<std::vector<Index>> found;
  for (Index size = 0; size <= std::min(k, g.num_vertices()) && !found; ++size) {
    for_each_subset(g.num_vertices(), size, [&](const std::vector<Index>& s) {
      if (covers(s)) {
        found = s;
        return false;
      }
      return true;
    });
  }
  return found;
}

}  // namespace detail

// Smallest (then lexicographically first) dominating set of size <= k.
inline std::optional<std::vector<Index>> exact_domset(const Graph& g, Index k, const OracleLimits& limits = {}) {
  return detail::smallest_cover(g, k, limits, [&](const std::vector<Index>& s) {
    std::vector<char> dominated(static_cast<std::size_t>(g.num_vertices()), 0);
    for (Index u : s) {
      dominated[static_cast<std::size_t>(u)] = 1;
      for (Index v : g.neighbors(u)) dominated[static_cast<std::size_t>(v)] = 1;
    }
    return std::all_of(dominated.begin(), dominated.end(), [](char d) { return d != 0; });
  });
}

// Smallest (then lexicographically first) vertex cover of size <= k.
inline std::optional<std::vector<Index>> exact_vertexcover(const Graph& g, Index k, const OracleLimits& limits = {}) {
  const auto edges = g.edges();
  return detail::smallest_cover(g, k, limits, [&](const std::vector<Index>& s) {
    std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
    for (Index u : s) in[static_cast<std::size_t>(u)] = 1;
    return std::all_of(edges.begin(), edges.end(), [&](const auto& e) {
      return in[static_cast<std::size_t>(e.first)] || in[static_cast<std::size_t>(e.second)];
    });
  });
}

}  // namespace divk
