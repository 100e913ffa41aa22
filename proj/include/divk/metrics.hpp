#pragma once

// Quality and representation metrics used when comparing constrained
// solutions against the unconstrained baseline.

#include <cmath>
#include <cstdlib>
#include <span>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"

namespace divk {

// Price of diversity: relative cost increase over the baseline.
inline double pod(double cost_alg, double cost_base) {
  if (!(cost_base > 0.0)) throw UndefinedMetric("price of diversity needs a positive baseline cost");
  return (cost_alg - cost_base) / cost_base;
}

// sum_i |a_i - b_i| / (k t)
inline double l1_representation(std::span<const int> counts_alg, std::span<const int> counts_base, Index k,
                                Index t) {
  if (counts_alg.size() != counts_base.size() || static_cast<Index>(counts_alg.size()) != t) {
    throw UsageError("count vectors must both have length t");
  }
  if (k < 1 || t < 1) throw UndefinedMetric("L1 representation needs k, t >= 1");
  long long total = 0;
  for (std::size_t i = 0; i < counts_alg.size(); ++i) total += std::llabs(counts_alg[i] - counts_base[i]);
  return static_cast<double>(total) / (static_cast<double>(k) * static_cast<double>(t));
}

inline double l1_representation(const std::vector<int>& a, const std::vector<int>& b, Index k, Index t) {
  return l1_representation(std::span<const int>(a), std::span<const int>(b), k, t);
}

// Total deficit sum_i max(r_i - c_i, 0) over sum_i r_i, from group counts.
inline double violation_fraction(std::span<const int> counts, std::span<const int> lower_bounds) {
  if (counts.size() != lower_bounds.size()) throw UsageError("count vector length differs from t");
  long long required = 0, deficit = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    required += lower_bounds[i];
    if (lower_bounds[i] > counts[i]) deficit += lower_bounds[i] - counts[i];
  }
  if (required <= 0) throw UndefinedMetric("violation fraction needs sum(r) > 0");
  return static_cast<double>(deficit) / static_cast<double>(required);
}

template <typename Scalar>
double violation_fraction(const Instance<Scalar>& inst, std::span<const Index> centers) {
  const auto counts = group_counts(inst, centers);
  return violation_fraction(std::span<const int>(counts), std::span<const int>(inst.lower_bounds()));
}

template <typename Scalar>
double violation_fraction(const Instance<Scalar>& inst, const std::vector<Index>& centers) {
  return violation_fraction(inst, std::span<const Index>(centers));
}

}  // namespace divk
