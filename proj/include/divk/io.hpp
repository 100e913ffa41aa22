#pragma once

// File formats: instance and graph JSON, CSV ingestion, solution JSON.

#include <iosfwd>
#include <string>
#include <vector>

#include "divk/instance.hpp"
#include "divk/localsearch.hpp"
#include "json.hpp"

namespace divk::io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Instance<double> instance_from_json(const json& j);
ordered_json instance_to_json(const Instance<double>& inst);
Instance<double> load_instance(const std::string& path);

// {"n": int, "edges": [[u, v], ...]}
Graph graph_from_json(const json& j);
Graph load_graph(const std::string& path);
ordered_json graph_to_json(const Graph& g);

enum class GroupMode { Disjoint, Intersect };

struct CsvSchema {
  std::vector<std::string> protected_columns;
  std::vector<std::string> feature_columns;  // empty: every non-protected column
  GroupMode mode = GroupMode::Disjoint;
  Index k = 0;                    // 0: min(10, rows)
  std::vector<int> lower_bounds;  // empty: all zeros
  Metric metric = Metric::L1;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Index column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(std::istream& in);

// Rows become both clients and facilities. Each feature column is scaled to
// unit L2 norm; groups come from the protected columns: the first column's
// values in disjoint mode, every (column, value) pair in intersect mode.
Instance<double> instance_from_csv(const CsvTable& table, const CsvSchema& schema);
Instance<double> load_csv(const std::string& path, const CsvSchema& schema);

// Group names in the order instance_from_csv creates the groups.
std::vector<std::string> csv_group_labels(const CsvTable& table, const CsvSchema& schema);

ordered_json solution_to_json(const Instance<double>& inst, const SolveReport<double>& report,
                              const std::string& algo, bool include_timing);

}  // namespace divk::io
