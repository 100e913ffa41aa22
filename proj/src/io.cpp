#include "divk/io.hpp"

#include <fstream>
#include <sstream>

#include "divk/errors.hpp"

namespace divk::io {

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("field \"") + key + "\": " + e.what());
  }
}

PointSet<double> points_from_json(const json& rows, const char* what) {
  if (!rows.is_array()) throw SchemaError(std::string(what) + " must be an array of points");
  const auto n = static_cast<Index>(rows.size());
  const Index dim = n == 0 ? 0 : static_cast<Index>(rows.front().size());
  PointSet<double> p(n, dim);
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw SchemaError(std::string(what) + " rows must share one dimension");
    }
    for (Index d = 0; d < dim; ++d) p(i, d) = row[static_cast<std::size_t>(d)].get<double>();
  }
  return p;
}

json points_to_json(const PointSet<double>& p) {
  json rows = json::array();
  for (Index i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (Index d = 0; d < p.cols(); ++d) row.push_back(p(i, d));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Instance<double> instance_from_json(const json& j) {
  const auto n = field<Index>(j, "n_clients");
  const auto m = field<Index>(j, "n_facilities");
  const auto k = field<Index>(j, "k");
  auto groups = field<std::vector<std::vector<Index>>>(j, "groups");
  auto bounds = field<std::vector<int>>(j, "lower_bounds");
  if (groups.size() != bounds.size()) throw SchemaError("groups and lower_bounds differ in length");
  if (!j.contains("distances")) throw SchemaError("missing field \"distances\"");
  const auto& dist = j.at("distances");
  try {
    if (dist.contains("matrix")) {
      const auto& rows = dist.at("matrix");
      if (static_cast<Index>(rows.size()) != n) throw SchemaError("distance matrix needs n_clients rows");
      Matrix<double> d(n, m);
      for (Index c = 0; c < n; ++c) {
        const auto& row = rows[static_cast<std::size_t>(c)];
        if (static_cast<Index>(row.size()) != m) throw SchemaError("distance matrix needs n_facilities columns");
        for (Index f = 0; f < m; ++f) d(c, f) = row[static_cast<std::size_t>(f)].get<double>();
      }
      return Instance<double>::from_matrix(std::move(d), std::move(groups), std::move(bounds), k);
    }
    if (dist.contains("points")) {
      const auto& pts = dist.at("points");
      auto clients = points_from_json(pts.at("clients"), "clients");
      auto facilities = points_from_json(pts.at("facilities"), "facilities");
      if (clients.rows() != n || facilities.rows() != m) throw SchemaError("point counts disagree with n_clients/n_facilities");
      const auto metric = pts.value("metric", std::string("l1"));
      if (metric != "l1" && metric != "l2") throw SchemaError("metric must be \"l1\" or \"l2\"");
      return Instance<double>::from_points(std::move(clients), std::move(facilities),
                                           metric == "l1" ? Metric::L1 : Metric::L2, std::move(groups),
                                           std::move(bounds), k);
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("distances: ") + e.what());
  } catch (const UsageError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("distances must hold \"matrix\" or \"points\"");
}

ordered_json instance_to_json(const Instance<double>& inst) {
  ordered_json j;
  j["n_clients"] = inst.num_clients();
  j["n_facilities"] = inst.num_facilities();
  j["k"] = inst.k();
  j["groups"] = inst.groups();
  j["lower_bounds"] = inst.lower_bounds();
  if (inst.has_points()) {
    ordered_json pts;
    pts["clients"] = points_to_json(inst.client_points());
    pts["facilities"] = points_to_json(inst.facility_points());
    pts["metric"] = metric_name(inst.metric());
    j["distances"]["points"] = std::move(pts);
  } else {
    json rows = json::array();
    const auto& d = inst.matrix();
    for (Index c = 0; c < d.rows(); ++c) {
      json row = json::array();
      for (Index f = 0; f < d.cols(); ++f) row.push_back(d(c, f));
      rows.push_back(std::move(row));
    }
    j["distances"]["matrix"] = std::move(rows);
  }
  return j;
}

Instance<double> load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

Graph graph_from_json(const json& j) {
  const auto n = field<Index>(j, "n");
  const auto edges = field<std::vector<std::pair<Index, Index>>>(j, "edges");
  Graph g(n);
  try {
    for (auto [u, v] : edges) g.add_edge(u, v);
  } catch (const UsageError& e) {
    throw SchemaError(std::string("edges: ") + e.what());
  }
  return g;
}

Graph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

ordered_json graph_to_json(const Graph& g) {
  ordered_json j;
  j["n"] = g.num_vertices();
  j["edges"] = g.edges();
  return j;
}

ordered_json solution_to_json(const Instance<double>& inst, const SolveReport<double>& report,
                              const std::string& algo, bool include_timing) {
  ordered_json j;
  j["centers"] = report.solution.centers;
  j["cost"] = report.solution.cost;
  j["feasible"] = check(inst, report.solution.centers);
  j["per_group_counts"] = report.solution.per_group_counts;
  j["iterations"] = report.iterations;
  j["seed"] = report.seed;
  j["algo"] = algo;
  if (report.profile) j["profile"] = *report.profile;
  if (report.violation_fraction) j["violation_fraction"] = *report.violation_fraction;
  j["objective"] = report.final_cost;
  j["termination"] = termination_name(report.termination);
  j["seconds"] = include_timing ? report.seconds : 0.0;
  return j;
}

}  // namespace divk::io
