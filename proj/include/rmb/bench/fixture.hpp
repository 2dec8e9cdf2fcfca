#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmb/bench/tables.hpp"
#include "rmb/evaluation.hpp"
#include "rmb/ingest.hpp"

namespace rmb::bench {

inline constexpr int kFixtureVersion = 1;

/// Published reference numbers: the n-sweep means, their scaled form as
/// printed, and the algorithm comparison.
struct ReferenceTables {
  SweepTable sweep;
  std::map<GroupKey, RangedGroup> ranged;  ///< as printed
  std::vector<GroupKey> anomalous;         ///< groups whose printed metric rows are unusable
  int expected_optimal_n = 0;
  std::vector<std::pair<MapType, int>> expected_overrides;

  MetricTriple astar_n1_baseline;  ///< conventional A* in the n = 1 comparison
  MetricTriple rmb_n1;
  MetricTriple expected_n1_reduction;

  Comparison comparison;
  std::map<std::string, MetricTriple> stated_averages;
  double expected_cells_reduction = 0.0;
  double expected_time_reduction = 0.0;
};

namespace detail {

inline GroupKey group_key(const nlohmann::json& e) {
  const auto t = parse_map_type(e.at("map_type").get<std::string>());
  const auto d = parse_dimension_class(e.at("dimension_class").get<std::string>());
  if (!t || !d) throw std::invalid_argument("fixture: bad group key");
  return {*t, *d};
}

inline MetricTriple triple(const nlohmann::json& e) {
  return {e.at("search_cells").get<double>(), e.at("path_cost").get<double>(),
          e.at("time_s").get<double>()};
}

}  // namespace detail

inline ReferenceTables parse_reference_tables(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != kFixtureVersion)
    throw std::invalid_argument("fixture: unsupported schema_version");
  ReferenceTables ref;
  ref.sweep.sizes = j.at("rmb_sizes").get<std::vector<int>>();
  for (const auto& e : j.at("sweep_means")) {
    const GroupKey k = detail::group_key(e);
    const auto cells = e.at("search_cells").get<std::vector<double>>();
    const auto cost = e.at("path_cost").get<std::vector<double>>();
    const auto time = e.at("time_s").get<std::vector<double>>();
    if (cells.size() != ref.sweep.sizes.size() || cost.size() != cells.size() ||
        time.size() != cells.size())
      throw std::invalid_argument("fixture: sweep row length mismatch for " + to_string(k));
    for (std::size_t i = 0; i < cells.size(); ++i)
      ref.sweep.set(k, ref.sweep.sizes[i], {cells[i], cost[i], time[i]});
  }
  for (const auto& e : j.at("ranged")) {
    const GroupKey k = detail::group_key(e);
    RangedGroup g;
    g.rows = {e.at("search_cells").get<std::vector<double>>(),
              e.at("path_cost").get<std::vector<double>>(),
              e.at("time_s").get<std::vector<double>>()};
    g.average = e.at("average").get<std::vector<double>>();
    ref.ranged[k] = g;
    if (e.value("anomalous_parameter_rows", false)) ref.anomalous.push_back(k);
  }
  ref.expected_optimal_n = j.at("expected_optimal_n").get<int>();
  for (const auto& e : j.at("expected_group_minimum_overrides")) {
    const auto t = parse_map_type(e.at("map_type").get<std::string>());
    if (!t) throw std::invalid_argument("fixture: bad override map_type");
    ref.expected_overrides.emplace_back(*t, e.at("n").get<int>());
  }
  const auto& n1 = j.at("rmb_vs_astar_n1");
  ref.astar_n1_baseline = detail::triple(n1.at("astar"));
  ref.rmb_n1 = detail::triple(n1.at("rmb_n1"));
  ref.expected_n1_reduction = detail::triple(n1.at("expected_reduction_percent"));

  for (const auto& [algo, dims] : j.at("algorithm_comparison").items()) {
    ComparisonRow row{algo, {}};
    for (const auto& e : dims) {
      const auto d = parse_dimension_class(e.at("dimension_class").get<std::string>());
      if (!d) throw std::invalid_argument("fixture: bad dimension in comparison");
      row.per_dimension[*d] = detail::triple(e);
    }
    ref.comparison.rows.push_back(std::move(row));
  }
  for (const auto& [algo, e] : j.at("algorithm_comparison_averages").items())
    ref.stated_averages[algo] = detail::triple(e);
  const auto& red = j.at("expected_rmb_n3_vs_astar_reduction_percent");
  ref.expected_cells_reduction = red.at("search_cells").get<double>();
  ref.expected_time_reduction = red.at("time_s").get<double>();
  return ref;
}

inline ReferenceTables load_reference_tables(const std::filesystem::path& p) {
  return parse_reference_tables(nlohmann::json::parse(read_file(p)));
}

/// Recomputes the derived numbers of the comparison fixture (averages,
/// reductions) and lists every disagreement with the stated values. Printed
/// values carry 2 decimals (4 for times), hence the tolerances.
inline std::vector<std::string> check_comparison_fixture(const ReferenceTables& ref) {
  std::vector<std::string> bad;
  auto expect = [&](const std::string& what, double got, double want, double tol) {
    if (std::abs(got - want) > tol) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s: computed %.6f, reference %.6f", what.c_str(), got, want);
      bad.emplace_back(buf);
    }
  };
  for (const auto& row : ref.comparison.rows) {
    const auto it = ref.stated_averages.find(row.algorithm);
    if (it == ref.stated_averages.end()) {
      bad.push_back(row.algorithm + ": no stated average");
      continue;
    }
    const MetricTriple avg = row.average();
    expect(row.algorithm + " average search_cells", avg.search_cells, it->second.search_cells, 0.01);
    expect(row.algorithm + " average path_cost", avg.path_cost, it->second.path_cost, 0.01);
    expect(row.algorithm + " average time_s", avg.time_s, it->second.time_s, 0.0001);
  }
  const ComparisonRow* astar = ref.comparison.find("astar");
  const ComparisonRow* rmb = ref.comparison.find("rmb-astar");
  if (!astar || !rmb) {
    bad.emplace_back("comparison lacks astar or rmb-astar");
  } else {
    expect("search_cells reduction vs astar",
           impact_evaluation(astar->column(Metric::SearchCells), rmb->column(Metric::SearchCells)),
           ref.expected_cells_reduction, 0.01);
    expect("time reduction vs astar",
           impact_evaluation(astar->column(Metric::Time), rmb->column(Metric::Time)),
           ref.expected_time_reduction, 0.01);
  }
  for (Metric m : kAllMetrics)
    expect(std::string("n=1 ") + std::string(to_string(m)) + " reduction",
           impact_evaluation({get(ref.astar_n1_baseline, m)}, {get(ref.rmb_n1, m)}),
           get(ref.expected_n1_reduction, m), 0.01);
  return bad;
}

}  // namespace rmb::bench
