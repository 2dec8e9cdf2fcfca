#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rmb/grid.hpp"
#include "rmb/motion.hpp"
#include "rmb/open_list.hpp"
#include "rmb/scenario.hpp"

namespace rmb {

enum class Algorithm : std::uint8_t { RmbAStar, AStar, Dijkstra, Bfs, Dfs };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::RmbAStar, Algorithm::AStar,
                                               Algorithm::Dijkstra, Algorithm::Bfs,
                                               Algorithm::Dfs};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::RmbAStar: return "rmb-astar";
    case Algorithm::AStar: return "astar";
    case Algorithm::Dijkstra: return "dijkstra";
    case Algorithm::Bfs: return "bfs";
    case Algorithm::Dfs: return "dfs";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

enum class SearchStatus : std::uint8_t { Found, NotFound };

inline std::string_view to_string(SearchStatus s) {
  return s == SearchStatus::Found ? "found" : "not_found";
}

/// Raised when the start or goal is not a free in-bounds cell. Distinct from a
/// search that simply finds no path.
class SearchPreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SearchResult {
  SearchStatus status = SearchStatus::NotFound;
  std::vector<Coord> path;  ///< jump endpoints, start first
  double path_cost = 0.0;   ///< geometric length of `path`
  std::uint64_t expanded_cells = 0;
  std::uint64_t inspected_cells = 0;
  double wall_time_s = 0.0;
  Algorithm algorithm = Algorithm::AStar;
  int rmb_n = 0;
  bool fell_back_to_n1 = false;
  std::vector<Coord> expansions;  ///< expansion order, only when requested

  bool found() const noexcept { return status == SearchStatus::Found; }
};

struct SearchOptions {
  bool record_expansions = false;
};

/// How the motion-block costs drive the search.
enum class CostModel : std::uint8_t {
  /// A node carries C' (accumulated geometric length) as its cost; the
  /// open list is ordered by C + h, so the alpha goal term biases the order
  /// without accumulating along the path.
  GoalBiasedKey,
  /// A node carries the direction-weighted adaptive cost d * C, and the
  /// open list is ordered by that cost + h. The sqrt(2) factor then
  /// compounds over every diagonal move.
  CompoundingProduct,
};

inline std::string_view to_string(CostModel m) {
  return m == CostModel::GoalBiasedKey ? "goal-bias" : "product";
}

inline std::optional<CostModel> parse_cost_model(std::string_view s) {
  if (s == "goal-bias") return CostModel::GoalBiasedKey;
  if (s == "product") return CostModel::CompoundingProduct;
  return std::nullopt;
}

struct RmbOptions {
  int n = 3;
  CostModel cost_model = CostModel::GoalBiasedKey;
  AdaptiveCostParams cost;
  SuccessorPolicy successor;
  /// Re-run with n = 1 when a larger block finds nothing.
  bool fallback_to_n1 = false;
  SearchOptions search;
};

/// Sum of segment lengths. Every segment must be axis-aligned or a 45 degree
/// diagonal.
inline double path_geometric_cost(const std::vector<Coord>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Coord d = path[i] - path[i - 1];
    if (d.x != 0 && d.y != 0 && std::abs(d.x) != std::abs(d.y))
      throw std::invalid_argument("path_geometric_cost: segment is not axis or diagonal aligned");
    total += euclidean(path[i - 1], path[i]);
  }
  return total;
}

/// True when the path runs from the scenario start to its goal through ray
/// segments whose every cell is free.
inline bool path_is_valid(const GridMap& map, const Scenario& sc, const std::vector<Coord>& path) {
  if (path.empty() || path.front() != sc.start || path.back() != sc.goal) return false;
  if (!map.is_free(path.front())) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Coord d = path[i] - path[i - 1];
    if (d.x == 0 && d.y == 0) return false;
    if (d.x != 0 && d.y != 0 && std::abs(d.x) != std::abs(d.y)) return false;
    const Coord unit{(d.x > 0) - (d.x < 0), (d.y > 0) - (d.y < 0)};
    const int steps = std::max(std::abs(d.x), std::abs(d.y));
    for (Coord c : ray_cells(path[i - 1], unit, steps))
      if (!map.is_free(c)) return false;
  }
  return true;
}

/// Number of unit cell moves along the path.
inline std::int64_t path_hop_count(const std::vector<Coord>& path) {
  std::int64_t hops = 0;
  for (std::size_t i = 1; i < path.size(); ++i) hops += chebyshev(path[i - 1], path[i]);
  return hops;
}

namespace detail {

inline constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

inline void check_endpoints(const GridMap& map, const Scenario& sc) {
  if (!map.is_free(sc.start)) throw SearchPreconditionError("start is not a free cell");
  if (!map.is_free(sc.goal)) throw SearchPreconditionError("goal is not a free cell");
}

/// Scratch state sized to the map. Reused between searches on the same
/// thread: only the cells touched by the previous search are reset. Every
/// write goes to a cell that has been inspected first, so the inspected list
/// doubles as the touched list.
class Workspace {
 public:
  static constexpr std::uint8_t kClosed = 1;
  static constexpr std::uint8_t kInspected = 2;

  void prepare(std::size_t cells) {
    if (g.size() != cells) {
      g.assign(cells, std::numeric_limits<double>::infinity());
      parent.assign(cells, kNoParent);
      flags_.assign(cells, 0);
    } else {
      for (std::uint32_t idx : touched_) {
        g[idx] = std::numeric_limits<double>::infinity();
        parent[idx] = kNoParent;
        flags_[idx] = 0;
      }
    }
    touched_.clear();
    open.clear();
  }

  void inspect(std::size_t idx) {
    if (!(flags_[idx] & kInspected)) {
      flags_[idx] |= kInspected;
      touched_.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  bool closed(std::size_t idx) const { return flags_[idx] & kClosed; }
  void close(std::size_t idx) { flags_[idx] |= kClosed; }
  std::uint64_t inspected_count() const { return touched_.size(); }

  std::vector<double> g;
  std::vector<std::uint32_t> parent;
  OpenList open;

 private:
  std::vector<std::uint8_t> flags_;
  std::vector<std::uint32_t> touched_;
};

inline Workspace& acquire_workspace(const GridMap& map) {
  thread_local Workspace ws;
  ws.prepare(map.size());
  return ws;
}

inline std::vector<Coord> trace_path(const GridMap& map, const std::vector<std::uint32_t>& parent,
                                     std::uint32_t goal_idx) {
  std::vector<Coord> path;
  for (std::uint32_t cur = goal_idx; cur != kNoParent; cur = parent[cur])
    path.push_back(map.coord(cur));
  std::reverse(path.begin(), path.end());
  return path;
}

// 8-neighbourhood in the fixed order N, NE, E, SE, S, SW, W, NW (y grows down).
inline constexpr Coord kEightNeighbours[] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                                             {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline void finish(SearchResult& r, const GridMap& map, const Workspace& ws,
                   std::optional<std::uint32_t> goal_idx,
                   std::optional<Coord> goal_corner = std::nullopt) {
  r.inspected_cells = ws.inspected_count();
  if (goal_idx) {
    r.status = SearchStatus::Found;
    r.path = trace_path(map, ws.parent, *goal_idx);
    if (goal_corner && r.path.size() >= 2) r.path.insert(r.path.end() - 1, *goal_corner);
    r.path_cost = path_geometric_cost(r.path);
  } else {
    r.status = SearchStatus::NotFound;
    r.path.clear();
    r.path_cost = 0.0;
  }
}

/// Best-first search over the unit 8-neighbourhood with geometric step costs.
/// `heuristic_weight` 1 gives A*, 0 gives Dijkstra.
inline SearchResult best_first_8(const GridMap& map, const Scenario& sc, double heuristic_weight,
                                 Algorithm algo, const SearchOptions& opt) {
  check_endpoints(map, sc);
  SearchResult r;
  r.algorithm = algo;
  // Scratch reset is setup, not search: the clock starts after it.
  Workspace& ws = acquire_workspace(map);
  Stopwatch clock;
  OpenList& open = ws.open;
  const auto start_idx = static_cast<std::uint32_t>(map.index(sc.start));
  const auto goal_idx = static_cast<std::uint32_t>(map.index(sc.goal));
  ws.g[start_idx] = 0.0;
  ws.inspect(start_idx);
  open.push(start_idx, heuristic_weight * euclidean(sc.start, sc.goal));
  std::optional<std::uint32_t> reached;
  while (!open.empty()) {
    const auto e = open.pop();
    if (ws.closed(e.cell)) continue;  // stale: a cheaper copy was popped already
    ws.close(e.cell);
    ++r.expanded_cells;
    const Coord cur = map.coord(e.cell);
    if (opt.record_expansions) r.expansions.push_back(cur);
    if (e.cell == goal_idx) {
      reached = e.cell;
      break;
    }
    for (Coord d : kEightNeighbours) {
      const Coord nb = cur + d;
      if (!map.in_bounds(nb)) continue;
      const auto idx = static_cast<std::uint32_t>(map.index(nb));
      ws.inspect(idx);
      if (map.obstacle_flags()[idx] || ws.closed(idx)) continue;
      const double g = ws.g[e.cell] + ((d.x != 0 && d.y != 0) ? kDiagonalBaseCost : kCardinalBaseCost);
      if (g < ws.g[idx]) {
        ws.g[idx] = g;
        ws.parent[idx] = e.cell;
        open.push(idx, g + heuristic_weight * euclidean(nb, sc.goal));
      }
    }
  }
  finish(r, map, ws, reached);
  r.wall_time_s = clock.seconds();
  return r;
}

inline SearchResult rmb_search_once(const GridMap& map, const Scenario& sc, int n,
                                    const RmbOptions& opt) {
  check_endpoints(map, sc);
  const MotionBlock block(n);
  SearchResult r;
  r.algorithm = Algorithm::RmbAStar;
  r.rmb_n = n;
  Workspace& ws = acquire_workspace(map);
  Stopwatch clock;
  OpenList& open = ws.open;
  const auto start_idx = static_cast<std::uint32_t>(map.index(sc.start));
  const auto goal_idx = static_cast<std::uint32_t>(map.index(sc.goal));
  ws.g[start_idx] = 0.0;
  ws.inspect(start_idx);
  open.push(start_idx, euclidean(sc.start, sc.goal));
  std::optional<std::uint32_t> reached;
  std::optional<Coord> goal_corner;
  const auto on_inspect = [&ws](std::size_t idx) { ws.inspect(idx); };
  const bool goal_biased = opt.cost_model == CostModel::GoalBiasedKey;
  while (!open.empty()) {
    const auto e = open.pop();
    if (ws.closed(e.cell)) continue;  // stale: a cheaper copy was popped already
    ws.close(e.cell);
    ++r.expanded_cells;
    const Coord cur = map.coord(e.cell);
    if (opt.search.record_expansions) r.expansions.push_back(cur);
    if (e.cell == goal_idx) {
      reached = e.cell;
      break;
    }
    for_each_successor(map, cur, ws.g[e.cell], sc.goal, block, opt.cost, opt.successor, on_inspect,
                       [&](const Successor& s) {
                         const auto idx = static_cast<std::uint32_t>(s.index);
                         const double g = goal_biased ? s.path_cost : s.arrival_cost;
                         const double key = goal_biased ? s.adaptive + s.goal_distance
                                                        : g + s.goal_distance;
                         if (g < ws.g[idx]) {
                           ws.g[idx] = g;
                           ws.parent[idx] = e.cell;
                           if (idx == goal_idx) goal_corner = s.corner;
                           open.push(idx, key);
                         }
                       },
                       [&](std::size_t idx, double path_cost) {
                         if (ws.closed(idx)) return false;
                         // Under the product model g needs the goal term, so
                         // only closed cells can be rejected early.
                         return !goal_biased || path_cost < ws.g[idx];
                       });
  }
  finish(r, map, ws, reached, goal_corner);
  r.wall_time_s = clock.seconds();
  return r;
}

}  // namespace detail

/// A* over a size-n motion block with the adaptive goal-tracking cost. Only
/// jump end cells (and the goal, when a ray crosses it) enter the open list.
inline SearchResult rmb_astar(const GridMap& map, const Scenario& scenario, const RmbOptions& opt) {
  if (opt.n < 1) throw std::invalid_argument("rmb_astar: n must be >= 1");
  SearchResult r = detail::rmb_search_once(map, scenario, opt.n, opt);
  if (!r.found() && opt.fallback_to_n1 && opt.n > 1) {
    SearchResult retry = detail::rmb_search_once(map, scenario, 1, opt);
    retry.rmb_n = opt.n;
    retry.fell_back_to_n1 = true;
    retry.expanded_cells += r.expanded_cells;
    retry.wall_time_s += r.wall_time_s;
    retry.inspected_cells = std::max(retry.inspected_cells, r.inspected_cells);
    return retry;
  }
  return r;
}

inline SearchResult rmb_astar(const GridMap& map, const Scenario& scenario, int n,
                              const AdaptiveCostParams& params = {}) {
  RmbOptions opt;
  opt.n = n;
  opt.cost = params;
  return rmb_astar(map, scenario, opt);
}

/// Conventional A*: unit 8-neighbourhood, step costs 1 / sqrt(2), Euclidean
/// heuristic.
inline SearchResult astar_conventional(const GridMap& map, const Scenario& scenario,
                                       const SearchOptions& opt = {}) {
  return detail::best_first_8(map, scenario, 1.0, Algorithm::AStar, opt);
}

inline SearchResult dijkstra(const GridMap& map, const Scenario& scenario,
                             const SearchOptions& opt = {}) {
  return detail::best_first_8(map, scenario, 0.0, Algorithm::Dijkstra, opt);
}

/// Breadth-first search by hop count over the 8-neighbourhood.
inline SearchResult bfs(const GridMap& map, const Scenario& sc, const SearchOptions& opt = {}) {
  detail::check_endpoints(map, sc);
  SearchResult r;
  r.algorithm = Algorithm::Bfs;
  detail::Workspace& ws = detail::acquire_workspace(map);
  detail::Stopwatch clock;
  const auto start_idx = static_cast<std::uint32_t>(map.index(sc.start));
  const auto goal_idx = static_cast<std::uint32_t>(map.index(sc.goal));
  std::deque<std::uint32_t> queue{start_idx};
  ws.close(start_idx);  // "discovered"
  ws.inspect(start_idx);
  std::optional<std::uint32_t> reached;
  while (!queue.empty()) {
    const auto cell = queue.front();
    queue.pop_front();
    ++r.expanded_cells;
    const Coord cur = map.coord(cell);
    if (opt.record_expansions) r.expansions.push_back(cur);
    if (cell == goal_idx) {
      reached = cell;
      break;
    }
    for (Coord d : detail::kEightNeighbours) {
      const Coord nb = cur + d;
      if (!map.in_bounds(nb)) continue;
      const auto idx = static_cast<std::uint32_t>(map.index(nb));
      ws.inspect(idx);
      if (map.obstacle_flags()[idx] || ws.closed(idx)) continue;
      ws.close(idx);
      ws.parent[idx] = cell;
      queue.push_back(idx);
    }
  }
  detail::finish(r, map, ws, reached);
  r.wall_time_s = clock.seconds();
  return r;
}

/// Depth-first search. Neighbours are explored in the order N, NE, E, SE, S,
/// SW, W, NW; the first path to reach the goal is returned.
inline SearchResult dfs(const GridMap& map, const Scenario& sc, const SearchOptions& opt = {}) {
  detail::check_endpoints(map, sc);
  SearchResult r;
  r.algorithm = Algorithm::Dfs;
  detail::Workspace& ws = detail::acquire_workspace(map);
  detail::Stopwatch clock;
  struct Frame {
    std::uint32_t cell;
    std::uint32_t parent;
  };
  const auto start_idx = static_cast<std::uint32_t>(map.index(sc.start));
  const auto goal_idx = static_cast<std::uint32_t>(map.index(sc.goal));
  std::vector<Frame> stack{{start_idx, detail::kNoParent}};
  ws.inspect(start_idx);
  std::optional<std::uint32_t> reached;
  constexpr std::size_t kDirs = std::size(detail::kEightNeighbours);
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (ws.closed(f.cell)) continue;
    ws.close(f.cell);
    ws.parent[f.cell] = f.parent;
    ++r.expanded_cells;
    const Coord cur = map.coord(f.cell);
    if (opt.record_expansions) r.expansions.push_back(cur);
    if (f.cell == goal_idx) {
      reached = f.cell;
      break;
    }
    // Pushed in reverse so that N is popped first.
    for (std::size_t i = kDirs; i-- > 0;) {
      const Coord nb = cur + detail::kEightNeighbours[i];
      if (!map.in_bounds(nb)) continue;
      const auto idx = static_cast<std::uint32_t>(map.index(nb));
      ws.inspect(idx);
      if (map.obstacle_flags()[idx] || ws.closed(idx)) continue;
      stack.push_back({idx, f.cell});
    }
  }
  detail::finish(r, map, ws, reached);
  r.wall_time_s = clock.seconds();
  return r;
}

/// Runs one of the unit-neighbourhood baselines.
inline SearchResult baseline_search(Algorithm algo, const GridMap& map, const Scenario& sc,
                                    const SearchOptions& opt = {}) {
  switch (algo) {
    case Algorithm::AStar: return astar_conventional(map, sc, opt);
    case Algorithm::Dijkstra: return dijkstra(map, sc, opt);
    case Algorithm::Bfs: return bfs(map, sc, opt);
    case Algorithm::Dfs: return dfs(map, sc, opt);
    case Algorithm::RmbAStar: break;
  }
  throw std::invalid_argument("baseline_search: rmb-astar is not a baseline");
}

/// Dispatch on algorithm id; `rmb` is used only for rmb-astar.
inline SearchResult run_planner(Algorithm algo, const GridMap& map, const Scenario& sc,
                                const RmbOptions& rmb) {
  if (algo == Algorithm::RmbAStar) return rmb_astar(map, sc, rmb);
  return baseline_search(algo, map, sc, rmb.search);
}

}  // namespace rmb
