#pragma once

// Penalized objectives that replace the hard lower bounds. The hinge penalty
// counts missing centers; the fractional penalty sum_i r_i / (|S ∩ F_i| + 1)
// has diminishing returns per group and is supermodular, which the exact
// rational checks below expose for testing.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "divk/errors.hpp"
#include "divk/instance.hpp"
#include "divk/localsearch.hpp"
#include "divk/metrics.hpp"
#include "divk/metricspace.hpp"

namespace divk {

struct RelaxParams {
  double lambda = 0.0;

  void validate() const {
    if (!(lambda >= 0.0)) throw ParameterError("penalty weight must be >= 0");
  }
};

template <typename Scalar>
Scalar cost_hinge(const Instance<Scalar>& inst, std::span<const Index> centers, Scalar lambda) {
  const auto counts = group_counts(inst, centers);
  long long deficit = 0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    deficit += std::max(inst.lower_bounds()[i] - counts[i], 0);
  return kmedian_cost(inst, centers) + lambda * static_cast<Scalar>(deficit);
}

template <typename Scalar>
Scalar penalty_frac(const Instance<Scalar>& inst, std::span<const Index> centers) {
  return detail::frac_penalty_of_counts(inst, group_counts(inst, centers));
}

template <typename Scalar>
Scalar cost_frac(const Instance<Scalar>& inst, std::span<const Index> centers, Scalar lambda) {
  return kmedian_cost(inst, centers) + lambda * penalty_frac(inst, centers);
}

// Exact non-negative rational, kept in lowest terms.
class Fraction {
 public:
  Fraction(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ <= 0) throw DomainError("fraction denominator must be positive");
    reduce();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t scale_a = b.den_ / g;
    return Fraction(a.num_ * scale_a + b.num_ * (a.den_ / g), a.den_ * scale_a);
  }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator==(const Fraction& a, const Fraction& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return !(a < b); }

 private:
  void reduce() {
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;
};

namespace detail {

inline std::vector<Index> sorted_unique(std::span<const Index> s) {
  std::vector<Index> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::vector<Index> set_intersection(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Index> set_union(const std::vector<Index>& a, const std::vector<Index>& b) {
  std::vector<Index> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline Fraction single_group_penalty(const std::vector<Index>& group, int r, const std::vector<Index>& x) {
  return Fraction(r, static_cast<std::int64_t>(set_intersection(group, x).size()) + 1);
}

}  // namespace detail

// sum_i r_i / (|S ∩ F_i| + 1) in exact arithmetic.
template <typename Scalar>
Fraction penalty_frac_exact(const Instance<Scalar>& inst, std::span<const Index> centers) {
  const auto counts = group_counts(inst, std::span<const Index>(detail::sorted_unique(centers)));
  Fraction total;
  for (std::size_t i = 0; i < counts.size(); ++i) total = total + Fraction(inst.lower_bounds()[i], counts[i] + 1);
  return total;
}

// f(A∩B) + f(A∪B) >= f(A) + f(B) for f(X) = r / (|X ∩ F| + 1), A, B ⊆ F.
inline bool check_supermodular_triple(std::span<const Index> group, int r, std::span<const Index> a,
                                      std::span<const Index> b) {
  const auto f = detail::sorted_unique(group);
  const auto sa = detail::sorted_unique(a);
  const auto sb = detail::sorted_unique(b);
  if (!std::includes(f.begin(), f.end(), sa.begin(), sa.end()) ||
      !std::includes(f.begin(), f.end(), sb.begin(), sb.end())) {
    throw UsageError("supermodularity check needs A, B inside the group");
  }
  const auto lhs = detail::single_group_penalty(f, r, detail::set_intersection(sa, sb)) +
                   detail::single_group_penalty(f, r, detail::set_union(sa, sb));
  const auto rhs = detail::single_group_penalty(f, r, sa) + detail::single_group_penalty(f, r, sb);
  return lhs >= rhs;
}

// The same inequality for the whole penalty over all (possibly overlapping) groups.
template <typename Scalar>
bool check_supermodular(const Instance<Scalar>& inst, std::span<const Index> a, std::span<const Index> b) {
  const auto sa = detail::sorted_unique(a);
  const auto sb = detail::sorted_unique(b);
  const auto meet = detail::set_intersection(sa, sb);
  const auto join = detail::set_union(sa, sb);
  auto p = [&](const std::vector<Index>& x) { return penalty_frac_exact(inst, std::span<const Index>(x)); };
  return p(meet) + p(join) >= p(sa) + p(sb);
}

// |A∩B| |A∪B| <= |A| |B|
inline bool check_cardinality_inequality(std::span<const Index> a, std::span<const Index> b) {
  const auto sa = detail::sorted_unique(a);
  const auto sb = detail::sorted_unique(b);
  const auto meet = detail::set_intersection(sa, sb).size();
  const auto join = detail::set_union(sa, sb).size();
  return meet * join <= sa.size() * sb.size();
}

// Unconstrained single-swap descent on cost_frac from random starts. The
// report's costs are cost_frac values; solution.cost is the plain k-median cost.
template <typename Scalar>
SolveReport<Scalar> relaxed_ls(const Instance<Scalar>& inst, Scalar lambda, const LSConfig& cfg) {
  cfg.validate();
  RelaxParams{static_cast<double>(lambda)}.validate();
  const Index k = inst.k();
  if (k < 1 || k > inst.num_facilities()) throw UsageError("relaxed search needs 1 <= k <= m");
  auto runs = detail::run_restarts(cfg.restarts, cfg.threads, [&](int r) {
    auto rng = detail::restart_rng(cfg.seed, r);
    return detail::single_swap_descent(inst, detail::random_subset(inst.num_facilities(), k, rng), cfg,
                                       detail::SwapRule::Free, lambda);
  });
  auto report = detail::best_of(std::move(runs));
  if (inst.total_lower_bound() > 0) report.violation_fraction = violation_fraction(inst, report.solution.centers);
  return report;
}

}  // namespace divk
