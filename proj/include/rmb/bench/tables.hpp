#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "rmb/bench/records.hpp"
#include "rmb/evaluation.hpp"

namespace rmb::bench {

struct SummaryKey {
  MapType map_type;
  DimensionClass dimension;
  Algorithm algorithm;
  int rmb_n;

  auto operator<=>(const SummaryKey&) const = default;
};

struct SummaryCell {
  MeanAccumulator acc;
  std::size_t errors = 0;
};

/// Means over Found runs per (type, dimension, algorithm, n).
inline std::map<SummaryKey, SummaryCell> summarize(const std::vector<RunRecord>& records) {
  std::map<SummaryKey, SummaryCell> out;
  for (const auto& r : records) {
    auto& cell = out[{r.map_type, r.dimension, r.algorithm, r.rmb_n}];
    switch (r.status) {
      case RunStatus::Found:
        cell.acc.add_found(static_cast<double>(r.expanded_cells), r.path_cost, r.wall_time_s);
        break;
      case RunStatus::NotFound: cell.acc.add_not_found(); break;
      case RunStatus::Error: ++cell.errors; break;
    }
  }
  return out;
}

inline std::string summary_to_csv(const std::map<SummaryKey, SummaryCell>& s) {
  std::string out =
      "map_type,dimension_class,algorithm,rmb_n,found,not_found,errors,mean_search_cells,"
      "mean_path_cost,mean_time_s\n";
  for (const auto& [k, c] : s) {
    out += std::string(to_string(k.map_type)) + ',' + std::string(to_string(k.dimension)) + ',' +
           std::string(to_string(k.algorithm)) + ',' + std::to_string(k.rmb_n) + ',' +
           std::to_string(c.acc.found) + ',' + std::to_string(c.acc.not_found) + ',' +
           std::to_string(c.errors);
    if (const auto m = c.acc.mean())
      out += ',' + csv::format_double(m->search_cells) + ',' + csv::format_double(m->path_cost) +
             ',' + csv::format_double(m->time_s) + '\n';
    else
      out += ",,,\n";
  }
  return out;
}

/// rmb-astar means arranged by group and n.
inline SweepTable sweep_from_summary(const std::map<SummaryKey, SummaryCell>& s) {
  SweepTable t;
  std::set<int> sizes;
  for (const auto& [k, _] : s)
    if (k.algorithm == Algorithm::RmbAStar) sizes.insert(k.rmb_n);
  t.sizes.assign(sizes.begin(), sizes.end());
  for (const auto& [k, c] : s) {
    if (k.algorithm != Algorithm::RmbAStar) continue;
    auto& row = t.groups[{k.map_type, k.dimension}];
    row.resize(t.sizes.size());
    if (const auto m = c.acc.mean()) row[t.column_of(k.rmb_n)] = *m;
  }
  return t;
}

namespace detail {

inline std::string size_header(const std::vector<int>& sizes) {
  std::string out = "map_type,dimension_class,parameter";
  for (int n : sizes) out += ",n=" + std::to_string(n);
  return out + '\n';
}

inline std::vector<int> parse_size_header(const std::vector<std::string>& f) {
  if (f.size() < 4 || f[0] != "map_type" || f[1] != "dimension_class" || f[2] != "parameter")
    throw std::invalid_argument("table csv: unexpected header");
  std::vector<int> sizes;
  for (std::size_t i = 3; i < f.size(); ++i) {
    if (f[i].rfind("n=", 0) != 0) throw std::invalid_argument("table csv: bad column " + f[i]);
    sizes.push_back(csv::parse_int<int>(std::string_view(f[i]).substr(2)));
  }
  return sizes;
}

inline void append_row(std::string& out, const GroupKey& k, std::string_view param,
                       const std::vector<std::optional<double>>& v) {
  out += std::string(to_string(k.map_type)) + ',' + std::string(to_string(k.dimension)) + ',' +
         std::string(param);
  for (const auto& x : v) out += ',' + (x ? csv::format_double(*x) : std::string());
  out += '\n';
}

}  // namespace detail

/// One row per (group, metric), one column per n. Missing means are blank.
inline std::string sweep_to_csv(const SweepTable& t) {
  std::string out = detail::size_header(t.sizes);
  for (const auto& [k, row] : t.groups)
    for (Metric m : kAllMetrics) {
      std::vector<std::optional<double>> v;
      for (const auto& cell : row) v.push_back(cell ? std::optional(get(*cell, m)) : std::nullopt);
      v.resize(t.sizes.size());
      detail::append_row(out, k, to_string(m), v);
    }
  return out;
}

inline SweepTable sweep_from_csv(const std::string& text) {
  const auto lines = csv::lines_of(text);
  if (lines.empty()) throw std::invalid_argument("sweep csv: empty");
  SweepTable t;
  t.sizes = detail::parse_size_header(csv::split_line(lines[0]));
  // group -> metric -> values
  std::map<GroupKey, std::array<std::vector<std::optional<double>>, 3>> cols;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv::split_line(lines[i]);
    if (f.size() != t.sizes.size() + 3)
      throw std::invalid_argument("sweep csv: wrong field count on line " + std::to_string(i + 1));
    const auto type = parse_map_type(f[0]);
    const auto dim = parse_dimension_class(f[1]);
    if (!type || !dim) throw std::invalid_argument("sweep csv: bad group on line " + std::to_string(i + 1));
    std::size_t metric = 3;
    for (std::size_t m = 0; m < 3; ++m)
      if (f[2] == to_string(kAllMetrics[m])) metric = m;
    if (metric == 3) throw std::invalid_argument("sweep csv: unknown parameter " + f[2]);
    auto& dst = cols[{*type, *dim}][metric];
    for (std::size_t j = 3; j < f.size(); ++j)
      dst.push_back(f[j].empty() ? std::nullopt : std::optional(csv::parse_double(f[j])));
  }
  for (const auto& [k, metrics] : cols) {
    auto& row = t.groups[k];
    row.resize(t.sizes.size());
    for (std::size_t j = 0; j < t.sizes.size(); ++j) {
      const bool all = std::all_of(metrics.begin(), metrics.end(), [&](const auto& v) {
        return j < v.size() && v[j].has_value();
      });
      if (all) row[j] = MetricTriple{*metrics[0][j], *metrics[1][j], *metrics[2][j]};
    }
  }
  return t;
}

/// Scaled rows plus the average row per group.
inline std::string ranged_to_csv(const RangedTable& t) {
  std::string out = detail::size_header(t.sizes);
  for (const auto& [k, g] : t.groups) {
    for (std::size_t m = 0; m < 3; ++m)
      detail::append_row(out, k, to_string(kAllMetrics[m]),
                         {g.rows[m].begin(), g.rows[m].end()});
    detail::append_row(out, k, "average", {g.average.begin(), g.average.end()});
  }
  return out;
}

inline nlohmann::json selection_json(const SelectionReport& rep) {
  auto key_json = [](const GroupKey& k) {
    return nlohmann::json{{"map_type", to_string(k.map_type)},
                          {"dimension_class", to_string(k.dimension)}};
  };
  nlohmann::json j;
  j["optimal_n"] = rep.n_star;
  j["sizes"] = rep.ranged.sizes;
  j["overall"] = rep.overall;
  j["group_minimum"] = nlohmann::json::array();
  for (const auto& [k, n] : rep.group_minimum) {
    auto e = key_json(k);
    e["n"] = n;
    e["agrees"] = n == rep.n_star;
    j["group_minimum"].push_back(e);
  }
  j["excluded"] = nlohmann::json::array();
  for (const auto& k : rep.excluded) j["excluded"].push_back(key_json(k));
  return j;
}

// --- algorithm comparison ----------------------------------------------------

/// Per-dimension means of one algorithm, plus their average.
struct ComparisonRow {
  std::string algorithm;
  std::map<DimensionClass, MetricTriple> per_dimension;

  MetricTriple average() const {
    if (per_dimension.empty()) throw std::invalid_argument("comparison: no dimensions for " + algorithm);
    MetricTriple a;
    for (const auto& [_, m] : per_dimension) {
      a.search_cells += m.search_cells;
      a.path_cost += m.path_cost;
      a.time_s += m.time_s;
    }
    const double k = static_cast<double>(per_dimension.size());
    return {a.search_cells / k, a.path_cost / k, a.time_s / k};
  }

  std::vector<double> column(Metric m) const {
    std::vector<double> out;
    for (const auto& [_, t] : per_dimension) out.push_back(get(t, m));
    return out;
  }
};

struct Comparison {
  std::vector<ComparisonRow> rows;  ///< in display order

  const ComparisonRow* find(std::string_view algo) const {
    for (const auto& r : rows)
      if (r.algorithm == algo) return &r;
    return nullptr;
  }
};

/// Builds the comparison from run records: every baseline present, and
/// rmb-astar at size `rmb_n`. Map types are pooled within a dimension.
inline Comparison comparison_from_records(const std::vector<RunRecord>& records, int rmb_n) {
  std::map<std::pair<Algorithm, DimensionClass>, MeanAccumulator> acc;
  for (const auto& r : records) {
    if (r.algorithm == Algorithm::RmbAStar && r.rmb_n != rmb_n) continue;
    auto& a = acc[{r.algorithm, r.dimension}];
    if (r.status == RunStatus::Found)
      a.add_found(static_cast<double>(r.expanded_cells), r.path_cost, r.wall_time_s);
    else
      a.add_not_found();
  }
  Comparison c;
  for (Algorithm algo : {Algorithm::Dijkstra, Algorithm::Dfs, Algorithm::Bfs, Algorithm::AStar,
                         Algorithm::RmbAStar}) {
    ComparisonRow row{std::string(to_string(algo)), {}};
    for (const auto& [key, a] : acc)
      if (key.first == algo)
        if (const auto m = a.mean()) row.per_dimension[key.second] = *m;
    if (!row.per_dimension.empty()) c.rows.push_back(std::move(row));
  }
  return c;
}

inline std::string comparison_to_csv(const Comparison& c) {
  std::string out = "algorithm,dimension_class,search_cells,path_cost,time_s\n";
  auto line = [&](const std::string& algo, std::string_view dim, const MetricTriple& m) {
    out += algo + ',' + std::string(dim) + ',' + csv::format_double(m.search_cells) + ',' +
           csv::format_double(m.path_cost) + ',' + csv::format_double(m.time_s) + '\n';
  };
  for (const auto& r : c.rows) {
    for (const auto& [d, m] : r.per_dimension) line(r.algorithm, to_string(d), m);
    line(r.algorithm, "average", r.average());
  }
  return out;
}

/// Reductions of every algorithm against conventional A* over the dimensions
/// both share, and each algorithm's averages as a share of the assumed ranges.
inline nlohmann::json comparison_metrics(const Comparison& c) {
  nlohmann::json j;
  j["performance_percent"] = nlohmann::json::object();
  for (const auto& r : c.rows) {
    nlohmann::json pc;
    for (Metric m : kAllMetrics)
      pc[std::string(to_string(m))] = performance_calc(r.column(m), performance_range(m));
    j["performance_percent"][r.algorithm] = pc;
  }
  j["reduction_vs_astar_percent"] = nlohmann::json::object();
  const ComparisonRow* astar = c.find(to_string(Algorithm::AStar));
  if (!astar) return j;
  for (const auto& r : c.rows) {
    if (r.algorithm == astar->algorithm) continue;
    nlohmann::json ie;
    for (Metric m : kAllMetrics) {
      std::vector<double> x, y;
      for (const auto& [d, t] : r.per_dimension)
        if (const auto it = astar->per_dimension.find(d); it != astar->per_dimension.end()) {
          x.push_back(get(it->second, m));
          y.push_back(get(t, m));
        }
      if (!x.empty()) ie[std::string(to_string(m))] = impact_evaluation(x, y);
    }
    j["reduction_vs_astar_percent"][r.algorithm] = ie;
  }
  return j;
}

}  // namespace rmb::bench
