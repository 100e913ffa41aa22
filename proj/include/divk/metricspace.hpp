#pragma once

// k-median objective and the incremental structures behind fast swap
// evaluation. Nearest-center ties go to the lowest facility id everywhere.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"

namespace divk {

namespace detail {

template <typename Scalar>
void check_ids(const Instance<Scalar>& inst, std::span<const Index> centers) {
  for (Index f : centers)
    if (f < 0 || f >= inst.num_facilities()) throw UsageError("facility id out of range");
}

// (distance, id) ordering used for every nearest-center decision.
template <typename Scalar>
bool closer(Scalar da, Index a, Scalar db, Index b) {
  return da < db || (da == db && a < b);
}

inline constexpr Index kNone = -1;

}  // namespace detail

// Sum over clients of the distance to the nearest center.
template <typename Scalar>
Scalar kmedian_cost(const Instance<Scalar>& inst, std::span<const Index> centers) {
  if (centers.empty()) throw DomainError("k-median cost of an empty center set");
  detail::check_ids(inst, centers);
  Scalar total = 0;
  for (Index c = 0; c < inst.num_clients(); ++c) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (Index f : centers) best = std::min(best, inst.distance(c, f));
    total += best;
  }
  return total;
}

template <typename Scalar>
Scalar kmedian_cost(const Instance<Scalar>& inst, const std::vector<Index>& centers) {
  return kmedian_cost(inst, std::span<const Index>(centers));
}

template <typename Scalar>
Solution<Scalar> make_solution(const Instance<Scalar>& inst, std::vector<Index> centers) {
  std::sort(centers.begin(), centers.end());
  Solution<Scalar> s;
  s.per_group_counts = group_counts(inst, std::span<const Index>(centers));
  s.cost = kmedian_cost(inst, std::span<const Index>(centers));
  s.centers = std::move(centers);
  return s;
}

// Nearest and second-nearest center per client for one center set.
template <typename Scalar>
struct CostCache {
  std::uint64_t instance_id = 0;
  std::uint64_t version = 0;  // bumped by every apply_swap
  std::vector<Index> centers;  // sorted
  std::vector<char> in_set;    // per facility
  std::vector<Index> nearest;
  std::vector<Scalar> nearest_dist;
  std::vector<Index> second;
  std::vector<Scalar> second_dist;
  Scalar total = 0;

  bool contains(Index f) const {
    return f >= 0 && f < static_cast<Index>(in_set.size()) && in_set[static_cast<std::size_t>(f)];
  }
};

namespace detail {

template <typename Scalar>
void rank_client(const Instance<Scalar>& inst, CostCache<Scalar>& cache, Index c) {
  Index n1 = kNone, n2 = kNone;
  Scalar d1 = std::numeric_limits<Scalar>::infinity();
  Scalar d2 = d1;
  for (Index f : cache.centers) {
    const Scalar d = inst.distance(c, f);
    if (n1 == kNone || closer(d, f, d1, n1)) {
      n2 = n1, d2 = d1;
      n1 = f, d1 = d;
    } else if (n2 == kNone || closer(d, f, d2, n2)) {
      n2 = f, d2 = d;
    }
  }
  const auto i = static_cast<std::size_t>(c);
  cache.nearest[i] = n1;
  cache.nearest_dist[i] = d1;
  cache.second[i] = n2;
  cache.second_dist[i] = d2;
}

}  // namespace detail

template <typename Scalar>
CostCache<Scalar> build_cache(const Instance<Scalar>& inst, std::vector<Index> centers) {
  std::sort(centers.begin(), centers.end());
  if (std::adjacent_find(centers.begin(), centers.end()) != centers.end()) {
    throw UsageError("duplicate center");
  }
  if (centers.size() < 2) throw DomainError("cost cache needs at least two centers");
  detail::check_ids(inst, std::span<const Index>(centers));

  CostCache<Scalar> cache;
  cache.instance_id = inst.id();
  cache.in_set.assign(static_cast<std::size_t>(inst.num_facilities()), 0);
  for (Index f : centers) cache.in_set[static_cast<std::size_t>(f)] = 1;
  cache.centers = std::move(centers);
  const auto n = static_cast<std::size_t>(inst.num_clients());
  cache.nearest.resize(n);
  cache.nearest_dist.resize(n);
  cache.second.resize(n);
  cache.second_dist.resize(n);
  cache.total = 0;
  for (Index c = 0; c < inst.num_clients(); ++c) {
    detail::rank_client(inst, cache, c);
    cache.total += cache.nearest_dist[static_cast<std::size_t>(c)];
  }
  return cache;
}

namespace detail {
template <typename Scalar>
void check_swap(const Instance<Scalar>& inst, const CostCache<Scalar>& cache, Index out, Index in) {
  if (cache.instance_id != inst.id()) throw UsageError("stale cost cache: built for another instance");
  if (!cache.contains(out)) throw UsageError("swap-out facility is not a center");
  if (in < 0 || in >= inst.num_facilities()) throw UsageError("facility id out of range");
  if (cache.contains(in)) throw UsageError("swap-in facility is already a center");
}
}  // namespace detail

// cost(S \ {out} ∪ {in}) - cost(S) in O(n).
template <typename Scalar>
Scalar swap_delta(const Instance<Scalar>& inst, const CostCache<Scalar>& cache, Index out, Index in) {
  detail::check_swap(inst, cache, out, in);
  Scalar delta = 0;
  for (Index c = 0; c < inst.num_clients(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    const Scalar d_in = inst.distance(c, in);
    if (cache.nearest[i] == out) {
      delta += std::min(d_in, cache.second_dist[i]) - cache.nearest_dist[i];
    } else if (d_in < cache.nearest_dist[i]) {
      delta += d_in - cache.nearest_dist[i];
    }
  }
  return delta;
}

// Replace `out` by `in`, updating only the clients whose ranking changes.
template <typename Scalar>
void apply_swap(const Instance<Scalar>& inst, CostCache<Scalar>& cache, Index out, Index in) {
  detail::check_swap(inst, cache, out, in);
  cache.in_set[static_cast<std::size_t>(out)] = 0;
  cache.in_set[static_cast<std::size_t>(in)] = 1;
  auto pos = std::lower_bound(cache.centers.begin(), cache.centers.end(), out);
  cache.centers.erase(pos);
  cache.centers.insert(std::lower_bound(cache.centers.begin(), cache.centers.end(), in), in);

  cache.total = 0;
  for (Index c = 0; c < inst.num_clients(); ++c) {
    const auto i = static_cast<std::size_t>(c);
    if (cache.nearest[i] == out || cache.second[i] == out) {
      detail::rank_client(inst, cache, c);
    } else {
      const Scalar d = inst.distance(c, in);
      if (detail::closer(d, in, cache.nearest_dist[i], cache.nearest[i])) {
        cache.second[i] = cache.nearest[i];
        cache.second_dist[i] = cache.nearest_dist[i];
        cache.nearest[i] = in;
        cache.nearest_dist[i] = d;
      } else if (detail::closer(d, in, cache.second_dist[i], cache.second[i])) {
        cache.second[i] = in;
        cache.second_dist[i] = d;
      }
    }
    cache.total += cache.nearest_dist[i];
  }
  ++cache.version;
}

// Every client's centers in (distance, id) order. Evaluates swaps that remove
// several centers at once: the new nearest surviving center is found by
// walking past the removed ones.
template <typename Scalar>
class RankedCache {
 public:
  RankedCache(const Instance<Scalar>& inst, std::vector<Index> centers)
      : inst_(&inst), centers_(std::move(centers)) {
    std::sort(centers_.begin(), centers_.end());
    if (centers_.empty()) throw DomainError("ranked cache needs a center");
    detail::check_ids(inst, std::span<const Index>(centers_));
    const auto k = centers_.size();
    const auto n = static_cast<std::size_t>(inst.num_clients());
    order_.resize(n * k);
    dist_.resize(n * k);
    std::vector<std::pair<Scalar, Index>> row(k);
    total_ = 0;
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t j = 0; j < k; ++j)
        row[j] = {inst.distance(static_cast<Index>(c), centers_[j]), centers_[j]};
      std::sort(row.begin(), row.end());
      for (std::size_t j = 0; j < k; ++j) {
        dist_[c * k + j] = row[j].first;
        order_[c * k + j] = row[j].second;
      }
      total_ += row[0].first;
    }
  }

  const std::vector<Index>& centers() const { return centers_; }
  Scalar total() const { return total_; }

  // Cost of (S \ removed) ∪ added. `removed` must be centers, `added` non-centers.
  Scalar cost_after(std::span<const Index> removed, std::span<const Index> added) const {
    const auto k = centers_.size();
    Scalar total = 0;
    for (Index c = 0; c < inst_->num_clients(); ++c) {
      const auto base = static_cast<std::size_t>(c) * k;
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const Index f = order_[base + j];
        if (std::find(removed.begin(), removed.end(), f) == removed.end()) {
          best = dist_[base + j];
          break;
        }
      }
      for (Index f : added) best = std::min(best, inst_->distance(c, f));
      total += best;
    }
    return total;
  }

 private:
  const Instance<Scalar>* inst_;
  std::vector<Index> centers_;
  std::vector<Index> order_;
  std::vector<Scalar> dist_;
  Scalar total_ = 0;
};

}  // namespace divk
