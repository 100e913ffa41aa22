#pragma once

// Problem data for diversity-aware k-median: clients, facilities, facility
// groups with lower bounds on how many centers each group must contribute,
// and a distance source (explicit matrix or point coordinates).

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "divk/errors.hpp"

namespace divk {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// One point per row.
template <typename Scalar>
using PointSet = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Metric { L1, L2 };

inline const char* metric_name(Metric m) { return m == Metric::L1 ? "l1" : "l2"; }

// Point instances with n_clients * n_facilities at or below this are
// materialized into a dense matrix at construction.
inline constexpr Index kDefaultMaterializeThreshold = Index{1} << 24;

namespace detail {
inline std::uint64_t next_instance_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace detail

template <typename Scalar>
class Instance {
 public:
  using Groups = std::vector<std::vector<Index>>;

  static Instance from_matrix(Matrix<Scalar> distances, Groups groups,
                              std::vector<int> lower_bounds, Index k) {
    Instance inst;
    inst.n_clients_ = distances.rows();
    inst.n_facilities_ = distances.cols();
    inst.matrix_ = std::move(distances);
    inst.has_matrix_ = true;
    inst.init(std::move(groups), std::move(lower_bounds), k);
    return inst;
  }

  static Instance from_points(PointSet<Scalar> clients, PointSet<Scalar> facilities,
                              Metric metric, Groups groups, std::vector<int> lower_bounds,
                              Index k,
                              Index materialize_threshold = kDefaultMaterializeThreshold) {
    if (clients.cols() != facilities.cols()) {
      throw UsageError("client and facility points differ in dimension");
    }
    Instance inst;
    inst.n_clients_ = clients.rows();
    inst.n_facilities_ = facilities.rows();
    inst.clients_ = std::move(clients);
    inst.facilities_ = std::move(facilities);
    inst.metric_ = metric;
    inst.has_points_ = true;
    if (inst.n_clients_ * inst.n_facilities_ <= materialize_threshold) {
      inst.matrix_.resize(inst.n_clients_, inst.n_facilities_);
      for (Index f = 0; f < inst.n_facilities_; ++f) {
        for (Index c = 0; c < inst.n_clients_; ++c) {
          inst.matrix_(c, f) = inst.point_distance(c, f);
        }
      }
      inst.has_matrix_ = true;
    }
    inst.init(std::move(groups), std::move(lower_bounds), k);
    return inst;
  }

  Index num_clients() const { return n_clients_; }
  Index num_facilities() const { return n_facilities_; }
  Index num_groups() const { return static_cast<Index>(groups_.size()); }
  Index k() const { return k_; }

  const Groups& groups() const { return groups_; }
  const std::vector<Index>& group(Index i) const { return groups_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& lower_bounds() const { return lower_bounds_; }
  // Groups containing `facility`, ascending. Out-of-range group members are ignored.
  const std::vector<Index>& groups_of(Index facility) const {
    return membership_[static_cast<std::size_t>(facility)];
  }
  bool disjoint() const { return disjoint_; }
  long long total_lower_bound() const {
    return std::accumulate(lower_bounds_.begin(), lower_bounds_.end(), 0LL);
  }

  Scalar distance(Index client, Index facility) const {
    if (has_matrix_) return matrix_(client, facility);
    return point_distance(client, facility);
  }

  bool has_matrix() const { return has_matrix_; }
  bool has_points() const { return has_points_; }
  const Matrix<Scalar>& matrix() const { return matrix_; }
  const PointSet<Scalar>& client_points() const { return clients_; }
  const PointSet<Scalar>& facility_points() const { return facilities_; }
  Metric metric() const { return metric_; }

  // Full client x facility matrix, computed if it was not materialized.
  Matrix<Scalar> dense_distances() const {
    if (has_matrix_) return matrix_;
    Matrix<Scalar> d(n_clients_, n_facilities_);
    for (Index f = 0; f < n_facilities_; ++f)
      for (Index c = 0; c < n_clients_; ++c) d(c, f) = point_distance(c, f);
    return d;
  }

  // Identity used to bind caches to the data they were built from.
  std::uint64_t id() const { return id_; }

  Instance with_lower_bounds(std::vector<int> lower_bounds) const {
    Instance copy = *this;
    copy.lower_bounds_ = std::move(lower_bounds);
    copy.id_ = detail::next_instance_id();
    return copy;
  }

  Instance with_groups(Groups groups, std::vector<int> lower_bounds) const {
    Instance copy = *this;
    copy.init(std::move(groups), std::move(lower_bounds), k_);
    return copy;
  }

  Instance with_k(Index k) const {
    Instance copy = *this;
    copy.k_ = k;
    copy.id_ = detail::next_instance_id();
    return copy;
  }

  Instance with_distances(Matrix<Scalar> distances) const {
    if (distances.rows() != n_clients_ || distances.cols() != n_facilities_) {
      throw UsageError("replacement distance matrix has the wrong shape");
    }
    return from_matrix(std::move(distances), groups_, lower_bounds_, k_);
  }

 private:
  Instance() = default;

  Scalar point_distance(Index client, Index facility) const {
    auto diff = clients_.row(client) - facilities_.row(facility);
    if (metric_ == Metric::L1) return diff.cwiseAbs().sum();
    return diff.norm();
  }

  void init(Groups groups, std::vector<int> lower_bounds, Index k) {
    if (groups.size() != lower_bounds.size()) {
      throw UsageError("groups and lower_bounds differ in length");
    }
    groups_ = std::move(groups);
    for (auto& g : groups_) {
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
    }
    lower_bounds_ = std::move(lower_bounds);
    k_ = k;
    membership_.assign(static_cast<std::size_t>(n_facilities_), {});
    disjoint_ = true;
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      for (Index f : groups_[i]) {
        if (f < 0 || f >= n_facilities_) continue;
        auto& m = membership_[static_cast<std::size_t>(f)];
        if (!m.empty()) disjoint_ = false;
        m.push_back(static_cast<Index>(i));
      }
    }
    id_ = detail::next_instance_id();
  }

  Index n_clients_ = 0;
  Index n_facilities_ = 0;
  Index k_ = 0;
  Groups groups_;
  std::vector<int> lower_bounds_;
  std::vector<std::vector<Index>> membership_;
  bool disjoint_ = true;
  Matrix<Scalar> matrix_;
  PointSet<Scalar> clients_;
  PointSet<Scalar> facilities_;
  Metric metric_ = Metric::L1;
  bool has_matrix_ = false;
  bool has_points_ = false;
  std::uint64_t id_ = 0;
};

// |S ∩ F_i| for every group.
template <typename Scalar>
std::vector<int> group_counts(const Instance<Scalar>& inst, std::span<const Index> centers) {
  std::vector<int> counts(static_cast<std::size_t>(inst.num_groups()), 0);
  for (Index f : centers) {
    for (Index g : inst.groups_of(f)) ++counts[static_cast<std::size_t>(g)];
  }
  return counts;
}

template <typename Scalar>
struct Solution {
  std::vector<Index> centers;  // sorted ascending
  std::vector<int> per_group_counts;
  Scalar cost = 0;

  Index size() const { return static_cast<Index>(centers.size()); }
};

// Validation findings. Errors make an instance unusable; warnings flag
// instances that are well-formed but may be infeasible.
struct ValidationReport {
  enum class Severity { Warning, Error };
  enum class BudgetClass { Equal, Below, Above };  // sum(r) vs k

  struct Finding {
    Severity severity;
    std::string message;
  };

  std::vector<Finding> findings;
  bool disjoint = true;
  BudgetClass budget = BudgetClass::Equal;

  bool ok() const {
    return std::none_of(findings.begin(), findings.end(),
                        [](const Finding& f) { return f.severity == Severity::Error; });
  }
  std::vector<std::string> errors() const {
    std::vector<std::string> out;
    for (const auto& f : findings)
      if (f.severity == Severity::Error) out.push_back(f.message);
    return out;
  }
};

inline const char* budget_class_name(ValidationReport::BudgetClass b) {
  switch (b) {
    case ValidationReport::BudgetClass::Equal: return "=k";
    case ValidationReport::BudgetClass::Below: return "<k";
    case ValidationReport::BudgetClass::Above: return ">k";
  }
  return "?";
}

template <typename Scalar>
ValidationReport validate(const Instance<Scalar>& inst) {
  using Severity = ValidationReport::Severity;
  ValidationReport report;
  auto error = [&](std::string msg) { report.findings.push_back({Severity::Error, std::move(msg)}); };
  auto warn = [&](std::string msg) { report.findings.push_back({Severity::Warning, std::move(msg)}); };

  const Index m = inst.num_facilities();
  if (inst.k() < 1) error("k must be positive");
  if (inst.k() > m) error("k exceeds the number of facilities");
  for (Index i = 0; i < inst.num_groups(); ++i) {
    const auto& g = inst.group(i);
    const int r = inst.lower_bounds()[static_cast<std::size_t>(i)];
    for (Index f : g) {
      if (f < 0 || f >= m) error("group " + std::to_string(i) + " has invalid facility id " + std::to_string(f));
    }
    if (r < 0) error("group " + std::to_string(i) + " has negative lower bound");
    if (g.empty()) warn("group " + std::to_string(i) + " is empty");
    if (r > static_cast<int>(g.size())) warn("group " + std::to_string(i) + " undersized");
  }
  if (inst.has_matrix()) {
    const auto& d = inst.matrix();
    if (!d.allFinite() || (d.size() > 0 && d.minCoeff() < Scalar(0))) error("invalid distance entry");
  } else if (inst.has_points()) {
    if (!inst.client_points().allFinite() || !inst.facility_points().allFinite()) {
      error("invalid distance entry");
    }
  }

  report.disjoint = inst.disjoint();
  const long long total = inst.total_lower_bound();
  if (total == inst.k()) {
    report.budget = ValidationReport::BudgetClass::Equal;
  } else if (total < inst.k()) {
    report.budget = ValidationReport::BudgetClass::Below;
  } else {
    report.budget = ValidationReport::BudgetClass::Above;
  }
  return report;
}

template <typename Scalar>
void require_valid(const Instance<Scalar>& inst) {
  auto report = validate(inst);
  if (!report.ok()) throw UsageError("invalid instance: " + report.errors().front());
}

// Undirected simple graph used by the hardness-reduction generators.
class Graph {
 public:
  explicit Graph(Index n) : adj_(static_cast<std::size_t>(n)) {
    if (n < 0) throw UsageError("negative vertex count");
  }

  Index num_vertices() const { return static_cast<Index>(adj_.size()); }

  void add_edge(Index u, Index v) {
    if (u == v) throw UsageError("self-loop");
    if (u < 0 || v < 0 || u >= num_vertices() || v >= num_vertices()) throw UsageError("vertex out of range");
    auto& nu = adj_[static_cast<std::size_t>(u)];
    if (std::find(nu.begin(), nu.end(), v) != nu.end()) return;
    nu.push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
    std::sort(nu.begin(), nu.end());
    std::sort(adj_[static_cast<std::size_t>(v)].begin(), adj_[static_cast<std::size_t>(v)].end());
  }

  const std::vector<Index>& neighbors(Index u) const { return adj_[static_cast<std::size_t>(u)]; }

  std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> out;
    for (Index u = 0; u < num_vertices(); ++u)
      for (Index v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool connected() const {
    if (adj_.empty()) return true;
    std::vector<char> seen(adj_.size(), 0);
    std::vector<Index> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      Index u = stack.back();
      stack.pop_back();
      for (Index v : neighbors(u))
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          stack.push_back(v);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
  }

  static Graph path(Index n) {
    Graph g(n);
    for (Index i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }
  static Graph cycle(Index n) {
    Graph g = path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
  }
  static Graph complete(Index n) {
    Graph g(n);
    for (Index u = 0; u < n; ++u)
      for (Index v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
  }
  // Vertex 0 is the center.
  static Graph star(Index leaves) {
    Graph g(leaves + 1);
    for (Index v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
  }

 private:
  std::vector<std::vector<Index>> adj_;
};

}  // namespace divk
