#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rmb/grid.hpp"

namespace rmb {

/// Mean search cells, geometric path cost and wall time of a group of runs.
struct MetricTriple {
  double search_cells = 0.0;
  double path_cost = 0.0;
  double time_s = 0.0;

  bool valid() const noexcept { return search_cells >= 0.0 && path_cost >= 0.0 && time_s >= 0.0; }
  bool operator==(const MetricTriple&) const = default;
};

enum class Metric : std::uint8_t { SearchCells, PathCost, Time };

inline constexpr std::array<Metric, 3> kAllMetrics = {Metric::SearchCells, Metric::PathCost,
                                                      Metric::Time};

inline std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::SearchCells: return "search_cells";
    case Metric::PathCost: return "path_cost";
    case Metric::Time: return "time_s";
  }
  return "?";
}

inline double get(const MetricTriple& t, Metric m) {
  switch (m) {
    case Metric::SearchCells: return t.search_cells;
    case Metric::PathCost: return t.path_cost;
    case Metric::Time: return t.time_s;
  }
  return 0.0;
}

inline constexpr double kRangeScale = 1000.0;

/// Assumed upper ends of the metric ranges used by performance_calc.
inline constexpr double kSearchCellRange = 133654.33;
inline constexpr double kPathCostRange = 4500.0;
inline constexpr double kTimeRange = 20.0;

inline double performance_range(Metric m) {
  switch (m) {
    case Metric::SearchCells: return kSearchCellRange;
    case Metric::PathCost: return kPathCostRange;
    case Metric::Time: return kTimeRange;
  }
  return 0.0;
}

/// Min-max scaling of `a` onto [0, r]. A constant row maps to all zeros.
inline std::vector<double> range_scale(const std::vector<double>& a, double r = kRangeScale) {
  if (a.empty()) throw std::invalid_argument("range_scale: empty array");
  const auto [lo_it, hi_it] = std::minmax_element(a.begin(), a.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  std::vector<double> out(a.size(), 0.0);
  if (span == 0.0) return out;
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = r * (a[j] - lo) / span;
  return out;
}

/// Element-wise mean of equal-length rows.
inline std::vector<double> param_average(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("param_average: no rows");
  const std::size_t len = rows.front().size();
  std::vector<double> out(len, 0.0);
  for (const auto& row : rows) {
    if (row.size() != len) throw std::invalid_argument("param_average: row length mismatch");
    for (std::size_t j = 0; j < len; ++j) out[j] += row[j];
  }
  for (double& v : out) v /= static_cast<double>(rows.size());
  return out;
}

/// Position (0-based) of the smallest value; the first one wins ties.
inline std::size_t argmin_first(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("argmin_first: empty array");
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (v[j] < v[best]) best = j;
  return best;
}

/// Averages the per-group rows element-wise and returns the 1-based position
/// of the minimum. Ties go to the smaller position.
inline int optimal_rmb(const std::vector<std::vector<double>>& group_averages) {
  if (group_averages.empty()) throw std::invalid_argument("optimal_rmb: no groups");
  return static_cast<int>(argmin_first(param_average(group_averages))) + 1;
}

/// Percentage reduction of sum(y) relative to sum(x).
inline double impact_evaluation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("impact_evaluation: arrays must be non-empty and equal length");
  double sx = 0.0, sy = 0.0;
  for (double v : x) sx += v;
  for (double v : y) sy += v;
  if (sx == 0.0) throw std::invalid_argument("impact_evaluation: sum of x is zero");
  return (sx - sy) / sx * 100.0;
}

/// mean(values) as a percentage of the assumed range mx.
inline double performance_calc(const std::vector<double>& dimension_avgs, double mx) {
  if (!(mx > 0.0)) throw std::invalid_argument("performance_calc: range must be positive");
  if (dimension_avgs.empty()) throw std::invalid_argument("performance_calc: empty array");
  double s = 0.0;
  for (double v : dimension_avgs) s += v;
  return s / static_cast<double>(dimension_avgs.size()) / mx * 100.0;
}

/// (map type, dimension class) pair identifying one table group.
struct GroupKey {
  MapType map_type = MapType::Forest;
  DimensionClass dimension = DimensionClass::D261x261;

  auto operator<=>(const GroupKey&) const = default;
};

inline std::string to_string(const GroupKey& k) {
  return std::string(to_string(k.map_type)) + "/" + std::string(to_string(k.dimension));
}

/// Per-group means indexed by RMB size. A missing entry marks a (group, n)
/// pair without any successful run.
struct SweepTable {
  std::vector<int> sizes;  ///< the n value of each column
  std::map<GroupKey, std::vector<std::optional<MetricTriple>>> groups;

  void set(const GroupKey& k, int n, const MetricTriple& m) {
    const auto col = column_of(n);
    auto& row = groups[k];
    row.resize(sizes.size());
    row[col] = m;
  }

  std::size_t column_of(int n) const {
    const auto it = std::find(sizes.begin(), sizes.end(), n);
    if (it == sizes.end()) throw std::invalid_argument("SweepTable: n not in the size list");
    return static_cast<std::size_t>(it - sizes.begin());
  }

  bool complete(const GroupKey& k) const {
    const auto it = groups.find(k);
    if (it == groups.end() || it->second.size() != sizes.size()) return false;
    return std::all_of(it->second.begin(), it->second.end(),
                       [](const auto& m) { return m.has_value(); });
  }

  /// One metric across the size columns of a complete group.
  std::vector<double> row(const GroupKey& k, Metric m) const {
    if (!complete(k)) throw std::invalid_argument("SweepTable: incomplete group " + to_string(k));
    std::vector<double> out;
    for (const auto& cell : groups.at(k)) out.push_back(get(*cell, m));
    return out;
  }
};

/// Range-scaled rows of one group plus their element-wise average.
struct RangedGroup {
  std::array<std::vector<double>, 3> rows;  ///< indexed like kAllMetrics
  std::vector<double> average;
};

struct RangedTable {
  std::vector<int> sizes;
  double scale = kRangeScale;
  std::map<GroupKey, RangedGroup> groups;
};

inline RangedGroup range_group(const std::array<std::vector<double>, 3>& raw, double r = kRangeScale) {
  RangedGroup g;
  for (std::size_t i = 0; i < raw.size(); ++i) g.rows[i] = range_scale(raw[i], r);
  g.average = param_average({g.rows[0], g.rows[1], g.rows[2]});
  return g;
}

struct SelectionReport {
  RangedTable ranged;
  int n_star = 0;                           ///< chosen RMB size
  std::vector<double> overall;              ///< mean of the group averages
  std::map<GroupKey, int> group_minimum;    ///< each group's own argmin
  std::vector<GroupKey> disagreeing;        ///< groups whose minimum differs from n_star
  std::vector<GroupKey> excluded;           ///< incomplete groups left out
};

/// Scales every complete group, averages the three metrics, then picks the
/// size with the smallest mean over all groups.
inline SelectionReport select_optimal(const SweepTable& sweep, double r = kRangeScale) {
  if (sweep.sizes.empty()) throw std::invalid_argument("select_optimal: no RMB sizes");
  SelectionReport rep;
  rep.ranged.sizes = sweep.sizes;
  rep.ranged.scale = r;
  std::vector<std::vector<double>> avgs;
  for (const auto& [key, _] : sweep.groups) {
    if (!sweep.complete(key)) {
      rep.excluded.push_back(key);
      continue;
    }
    const RangedGroup g = range_group(
        {sweep.row(key, Metric::SearchCells), sweep.row(key, Metric::PathCost),
         sweep.row(key, Metric::Time)},
        r);
    avgs.push_back(g.average);
    rep.group_minimum[key] = sweep.sizes[argmin_first(g.average)];
    rep.ranged.groups[key] = g;
  }
  if (avgs.empty()) throw std::invalid_argument("select_optimal: no complete group");
  rep.overall = param_average(avgs);
  rep.n_star = sweep.sizes[argmin_first(rep.overall)];
  for (const auto& [key, n] : rep.group_minimum)
    if (n != rep.n_star) rep.disagreeing.push_back(key);
  return rep;
}

/// Running mean that ignores failed runs but counts them.
struct MeanAccumulator {
  double cells = 0.0, cost = 0.0, time = 0.0;
  std::size_t found = 0;
  std::size_t not_found = 0;

  void add_found(double c, double p, double t) {
    cells += c;
    cost += p;
    time += t;
    ++found;
  }
  void add_not_found() { ++not_found; }

  std::optional<MetricTriple> mean() const {
    if (found == 0) return std::nullopt;
    const double k = static_cast<double>(found);
    return MetricTriple{cells / k, cost / k, time / k};
  }
};

}  // namespace rmb
