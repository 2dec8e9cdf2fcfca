#pragma once

// Helpers shared by the unit tests and the acceptance runner. The checks here
// are written independently of the library so they can serve as oracles.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "rmb/grid.hpp"
#include "rmb/scenario.hpp"

namespace rmb::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rmb_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Random w x h map with the given obstacle probability. The two corners used
/// as start and goal are kept free.
inline GridMap random_map(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution obstacle(density);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * h);
  for (auto& c : cells) c = obstacle(rng) ? 1 : 0;
  cells.front() = 0;
  cells.back() = 0;
  return GridMap(w, h, std::move(cells));
}

inline Scenario corner_scenario(const GridMap& m) {
  return {{0, 0}, {m.width() - 1, m.height() - 1}, 0};
}

/// Walks each segment cell by cell. Segments must be axis-aligned or exact
/// diagonals and every visited cell must be free.
inline bool valid_path(const GridMap& m, const Scenario& sc, const std::vector<Coord>& path) {
  if (path.empty() || path.front() != sc.start || path.back() != sc.goal) return false;
  auto free_at = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < m.width() && y < m.height() &&
           !m.obstacle_flags()[static_cast<std::size_t>(y) * m.width() + x];
  };
  if (!free_at(path[0].x, path[0].y)) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const int dx = path[i].x - path[i - 1].x, dy = path[i].y - path[i - 1].y;
    if (dx == 0 && dy == 0) return false;
    if (dx != 0 && dy != 0 && std::abs(dx) != std::abs(dy)) return false;
    const int sx = (dx > 0) - (dx < 0), sy = (dy > 0) - (dy < 0);
    int x = path[i - 1].x, y = path[i - 1].y;
    while (x != path[i].x || y != path[i].y) {
      x += sx;
      y += sy;
      if (!free_at(x, y)) return false;
    }
  }
  return true;
}

inline double polyline_length(const std::vector<Coord>& path) {
  double s = 0;
  for (std::size_t i = 1; i < path.size(); ++i)
    s += std::hypot(double(path[i].x - path[i - 1].x), double(path[i].y - path[i - 1].y));
  return s;
}

/// Plain textbook Dijkstra over the 8-neighbourhood; returns the optimal cost
/// or +inf when the goal is unreachable.
inline double reference_shortest(const GridMap& m, Coord s, Coord g) {
  const int w = m.width(), h = m.height();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[s.y * w + s.x] = 0;
  pq.push({0, s.y * w + s.x});
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    const int x = i % w, y = i / w;
    if (x == g.x && y == g.y) return d;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if (!dx && !dy) continue;
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || m.obstacle_flags()[ny * w + nx]) continue;
        const double nd = d + ((dx && dy) ? std::sqrt(2.0) : 1.0);
        if (nd < dist[ny * w + nx]) {
          dist[ny * w + nx] = nd;
          pq.push({nd, ny * w + nx});
        }
      }
  }
  return std::numeric_limits<double>::infinity();
}

/// Minimum number of 8-neighbour moves, or -1 when unreachable.
inline int reference_hops(const GridMap& m, Coord s, Coord g) {
  const int w = m.width(), h = m.height();
  std::vector<int> hops(static_cast<std::size_t>(w) * h, -1);
  std::queue<int> q;
  hops[s.y * w + s.x] = 0;
  q.push(s.y * w + s.x);
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    const int x = i % w, y = i / w;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || m.obstacle_flags()[ny * w + nx]) continue;
        if (hops[ny * w + nx] >= 0) continue;
        hops[ny * w + nx] = hops[i] + 1;
        q.push(ny * w + nx);
      }
  }
  return hops[g.y * w + g.x];
}

}  // namespace rmb::testing
