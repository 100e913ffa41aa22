#pragma once

// Instance generators: the dominating-set and vertex-cover reductions, the
// four-color counterexample that traps single-swap local search, and seeded
// random point instances.

#include <random>
#include <string>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"

namespace divk {

// C = F = V, unit distances, one group {u} ∪ N(u) per vertex, every r = 1.
// Feasible iff g has a dominating set of size <= k.
template <typename Scalar = double>
Instance<Scalar> from_domset(const Graph& g, Index k) {
  const Index n = g.num_vertices();
  if (n == 0) throw UsageError("graph must be non-empty");
  typename Instance<Scalar>::Groups groups;
  groups.reserve(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u) {
    std::vector<Index> closed = g.neighbors(u);
    closed.push_back(u);
    groups.push_back(std::move(closed));
  }
  return Instance<Scalar>::from_matrix(Matrix<Scalar>::Ones(n, n), std::move(groups),
                                       std::vector<int>(static_cast<std::size_t>(n), 1), k);
}

// One group {u, v} per edge, every r = 1. Feasible iff g has a vertex cover of size <= k.
template <typename Scalar = double>
Instance<Scalar> from_vertexcover(const Graph& g, Index k) {
  const Index n = g.num_vertices();
  const auto edges = g.edges();
  if (n == 0 || edges.empty()) throw UsageError("graph needs at least one edge");
  typename Instance<Scalar>::Groups groups;
  for (auto [u, v] : edges) groups.push_back({u, v});
  const auto t = groups.size();
  return Instance<Scalar>::from_matrix(Matrix<Scalar>::Ones(n, n), std::move(groups),
                                       std::vector<int>(t, 1), k);
}

// Two clients, facilities f1..f4 (ids 0..3). f1, f2 sit at distance c from both
// clients, f3, f4 at distance 1. Groups red {f1,f3}, green {f2,f4}, blue {f1,f4},
// yellow {f2,f3}, each needing one center; k = 2.
template <typename Scalar = double>
Instance<Scalar> fig2_counterexample(Scalar c) {
  if (!(c > Scalar(1))) throw ParameterError("counterexample needs c > 1");
  Matrix<Scalar> d(2, 4);
  d << c, c, 1, 1,
       c, c, 1, 1;
  return Instance<Scalar>::from_matrix(std::move(d), {{0, 2}, {1, 3}, {0, 3}, {1, 2}},
                                       {1, 1, 1, 1}, 2);
}

struct RandomInstanceParams {
  Index n = 20;  // clients = facilities = n points
  Index t = 2;
  Index k = 4;
  std::vector<int> lower_bounds;  // empty = all zeros
  double overlap = 0.0;
  std::uint64_t seed = 0;
  Index dim = 2;
  Metric metric = Metric::L1;
  int max_retries = 100;
};

// Points uniform in [0,1]^dim. Each facility gets a uniform base group and joins
// every other group independently with probability `overlap`. Draws that leave
// some group smaller than its lower bound are regenerated.
template <typename Scalar = double>
Instance<Scalar> random_metric(const RandomInstanceParams& p) {
  if (p.n < p.k || p.k < 1) throw ParameterError("random instance needs 1 <= k <= n");
  if (p.t < 1) throw ParameterError("random instance needs t >= 1");
  if (p.dim < 1) throw ParameterError("random instance needs dim >= 1");
  if (p.overlap < 0.0 || p.overlap > 1.0) throw ParameterError("overlap must lie in [0,1]");
  std::vector<int> bounds = p.lower_bounds;
  if (bounds.empty()) bounds.assign(static_cast<std::size_t>(p.t), 0);
  if (static_cast<Index>(bounds.size()) != p.t) throw ParameterError("lower_bounds length must equal t");

  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<Index> pick_group(0, p.t - 1);

  for (int attempt = 0; attempt < p.max_retries; ++attempt) {
    PointSet<Scalar> points(p.n, p.dim);
    for (Index i = 0; i < p.n; ++i)
      for (Index j = 0; j < p.dim; ++j) points(i, j) = static_cast<Scalar>(unit(rng));

    typename Instance<Scalar>::Groups groups(static_cast<std::size_t>(p.t));
    for (Index f = 0; f < p.n; ++f) {
      const Index base = pick_group(rng);
      for (Index g = 0; g < p.t; ++g) {
        const bool extra = unit(rng) < p.overlap;
        if (g == base || extra) groups[static_cast<std::size_t>(g)].push_back(f);
      }
    }
    bool fits = true;
    for (Index g = 0; g < p.t; ++g)
      if (static_cast<int>(groups[static_cast<std::size_t>(g)].size()) < bounds[static_cast<std::size_t>(g)])
        fits = false;
    if (!fits) continue;
    PointSet<Scalar> clients = points;
    return Instance<Scalar>::from_points(std::move(clients), std::move(points), p.metric,
                                         std::move(groups), bounds, p.k);
  }
  throw InfeasibleError("could not draw groups meeting the lower bounds after " +
                        std::to_string(p.max_retries) + " attempts");
}

}  // namespace divk
