#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rmb/bench/parallel.hpp"
#include "rmb/bench/prepare.hpp"
#include "rmb/bench/records.hpp"
#include "rmb/ingest.hpp"
#include "rmb/planners.hpp"

namespace rmb::bench {

/// Direction (1..4) of the i-th map of a (type, dimension) group.
inline int round_robin_direction(std::size_t index_in_group) {
  return static_cast<int>(index_in_group % 4) + 1;
}

inline RmbOptions rmb_options(const RunConfig& cfg, int n) {
  RmbOptions opt;
  opt.n = n;
  opt.cost = AdaptiveCostParams::checked(cfg.alpha, /*allow_override=*/true);
  opt.cost_model = cfg.cost_model;
  return opt;
}

/// Every configured algorithm (and every n for rmb-astar) on one map and
/// scenario. Searches whose endpoints are blocked are recorded as errors.
inline std::vector<RunRecord> run_map(const GridMap& map, const std::string& map_id, MapType type,
                                      const Scenario& sc, const RunConfig& cfg) {
  std::vector<RunRecord> out;
  auto run_one = [&](Algorithm algo, int n) {
    try {
      const SearchResult r = algo == Algorithm::RmbAStar
                                 ? rmb_astar(map, sc, rmb_options(cfg, n))
                                 : baseline_search(algo, map, sc);
      out.push_back(make_record(map_id, type, map.dimension_class(), sc.direction_id, r));
    } catch (const SearchPreconditionError&) {
      RunRecord rec;
      rec.map_id = map_id;
      rec.map_type = type;
      rec.dimension = map.dimension_class();
      rec.direction_id = sc.direction_id;
      rec.algorithm = algo;
      rec.rmb_n = algo == Algorithm::RmbAStar ? n : 0;
      rec.status = RunStatus::Error;
      out.push_back(rec);
    }
  };
  for (Algorithm algo : cfg.algorithms) {
    if (algo == Algorithm::RmbAStar)
      for (int n : cfg.rmb_sizes) run_one(algo, n);
    else
      run_one(algo, 0);
  }
  return out;
}

/// A map of the sweep with its assigned scenario direction.
struct SweepItem {
  const PreparedMapInfo* info;
  int direction_id;
};

/// Maps passing the filters, in cache order, each with its round-robin
/// direction. A cap keeps `cap` 261x261 maps per type and proportionally fewer
/// of the larger classes; with a seed the kept maps are a seeded sample.
inline std::vector<SweepItem> plan_sweep(const PreparedCache& cache, const RunConfig& cfg) {
  std::map<std::pair<MapType, DimensionClass>, std::vector<const PreparedMapInfo*>> groups;
  for (const auto& m : cache.maps) {
    if (cfg.map_type && *cfg.map_type != m.map_type) continue;
    if (cfg.dimension && *cfg.dimension != m.dimension) continue;
    groups[{m.map_type, m.dimension}].push_back(&m);
  }
  std::map<std::pair<MapType, DimensionClass>, std::vector<const PreparedMapInfo*>> kept;
  for (auto& [key, maps] : groups) {
    auto& dst = kept[key];
    const std::size_t limit =
        cfg.cap ? *cfg.cap / tile_count(layout_for(key.second)) : maps.size();
    if (limit >= maps.size()) {
      dst = maps;
    } else if (cfg.seed) {
      std::vector<std::size_t> order(maps.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::mt19937_64 rng(*cfg.seed);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(limit);
      std::sort(order.begin(), order.end());
      for (std::size_t i : order) dst.push_back(maps[i]);
    } else {
      dst.assign(maps.begin(), maps.begin() + static_cast<std::ptrdiff_t>(limit));
    }
  }
  // Back to cache order, numbering maps within their group.
  std::vector<SweepItem> items;
  std::map<std::pair<MapType, DimensionClass>, std::size_t> seen;
  for (const auto& m : cache.maps) {
    const auto it = kept.find({m.map_type, m.dimension});
    if (it == kept.end() || std::find(it->second.begin(), it->second.end(), &m) == it->second.end())
      continue;
    const std::size_t idx = seen[{m.map_type, m.dimension}]++;
    items.push_back({&m, round_robin_direction(idx)});
  }
  return items;
}

/// Runs the whole sweep. Maps are processed concurrently, but records come
/// back in plan order regardless of `cfg.jobs`.
inline std::vector<RunRecord> run_sweep(const PreparedCache& cache, const RunConfig& cfg,
                                        const ScenarioOverrides& overrides = {}) {
  const auto items = plan_sweep(cache, cfg);
  std::vector<std::vector<RunRecord>> per_map(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t i) {
    const auto& item = items[i];
    const GridMap map = cache.load(*item.info);
    const Scenario sc = generate_scenarios(item.info->dimension, overrides)[item.direction_id - 1];
    per_map[i] = run_map(map, item.info->id, item.info->map_type, sc, cfg);
  });
  std::vector<RunRecord> out;
  for (auto& v : per_map)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

}  // namespace rmb::bench
