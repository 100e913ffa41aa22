#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>

#include "divk/errors.hpp"
#include "divk/io.hpp"

namespace divk::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// One record; quoted fields may contain commas, doubled quotes and newlines.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string cell;
  bool quoted = false, any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          cell.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(cell));
      cell.clear();
    } else if (ch == '\n') {
      break;
    } else {
      cell.push_back(ch);
    }
  }
  if (!any) return false;
  fields.push_back(trim(cell));
  return true;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("row " + std::to_string(row + 1) + ", column \"" + column + "\": not a number: \"" + cell + "\"");
  }
  return value;
}

struct GroupSpec {
  std::vector<std::string> labels;
  std::vector<std::vector<Index>> members;
};

GroupSpec build_groups(const CsvTable& table, const CsvSchema& schema) {
  if (schema.protected_columns.empty()) throw SchemaError("at least one protected column is required");
  std::vector<Index> cols;
  for (const auto& name : schema.protected_columns) {
    const Index c = table.column(name);
    if (c < 0) throw SchemaError("missing column \"" + name + "\"");
    cols.push_back(c);
  }
  if (schema.mode == GroupMode::Disjoint) cols.resize(1);

  GroupSpec spec;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    std::map<std::string, std::size_t> index;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& value = table.rows[r][static_cast<std::size_t>(cols[p])];
      auto [it, fresh] = index.emplace(value, spec.members.size());
      if (fresh) {
        spec.labels.push_back(table.header[static_cast<std::size_t>(cols[p])] + "=" + value);
        spec.members.emplace_back();
      }
      spec.members[it->second].push_back(static_cast<Index>(r));
    }
  }
  return spec;
}

}  // namespace

Index CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<Index>(it - header.begin());
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::vector<std::string> fields;
  if (!read_record(in, table.header)) throw ParseError("empty CSV input");
  std::size_t line = 1;
  while (read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line) + ": expected " + std::to_string(table.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(fields);
  }
  return table;
}

std::vector<std::string> csv_group_labels(const CsvTable& table, const CsvSchema& schema) {
  return build_groups(table, schema).labels;
}

Instance<double> instance_from_csv(const CsvTable& table, const CsvSchema& schema) {
  auto groups = build_groups(table, schema);

  std::vector<std::string> features = schema.feature_columns;
  if (features.empty()) {
    for (const auto& h : table.header)
      if (std::find(schema.protected_columns.begin(), schema.protected_columns.end(), h) ==
          schema.protected_columns.end())
        features.push_back(h);
  }
  if (features.empty()) throw SchemaError("no numeric feature columns");

  const auto n = static_cast<Index>(table.rows.size());
  PointSet<double> x(n, static_cast<Index>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) {
    const Index c = table.column(features[j]);
    if (c < 0) throw SchemaError("missing column \"" + features[j] + "\"");
    for (Index r = 0; r < n; ++r)
      x(r, static_cast<Index>(j)) = parse_number(table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                                 static_cast<std::size_t>(r), features[j]);
  }
  const Eigen::RowVectorXd norms = x.colwise().norm();
  for (Index j = 0; j < x.cols(); ++j)
    if (norms(j) > 0.0) x.col(j) /= norms(j);

  std::vector<int> bounds = schema.lower_bounds;
  if (bounds.empty()) bounds.assign(groups.members.size(), 0);
  if (bounds.size() != groups.members.size()) {
    throw SchemaError("expected " + std::to_string(groups.members.size()) + " lower bounds, got " +
                      std::to_string(bounds.size()));
  }
  const Index k = schema.k > 0 ? schema.k : std::min<Index>(10, n);
  PointSet<double> clients = x;
  return Instance<double>::from_points(std::move(clients), std::move(x), schema.metric, std::move(groups.members),
                                       std::move(bounds), k);
}

Instance<double> load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path);
  return instance_from_csv(read_csv(in), schema);
}

}  // namespace divk::io
