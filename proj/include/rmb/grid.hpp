#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rmb {

/// Integer cell coordinate. x grows to the right (columns), y grows downwards
/// (rows), matching image pixel order. Negative values are legal and simply
/// address cells outside every map.
struct Coord {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(const Coord&, const Coord&) = default;
  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;

  friend constexpr Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Coord operator*(std::int32_t k, Coord a) { return {k * a.x, k * a.y}; }
};

inline double euclidean(Coord p, Coord q) {
  const double dx = static_cast<double>(q.x) - static_cast<double>(p.x);
  const double dy = static_cast<double>(q.y) - static_cast<double>(p.y);
  return std::sqrt(dx * dx + dy * dy);
}

inline std::int64_t chebyshev(Coord p, Coord q) {
  const std::int64_t dx = std::abs(static_cast<std::int64_t>(q.x) - p.x);
  const std::int64_t dy = std::abs(static_cast<std::int64_t>(q.y) - p.y);
  return dx > dy ? dx : dy;
}

enum class CellState : std::uint8_t { Free, Obstacle, OutOfBounds };

enum class MapType : std::uint8_t { AlternatingGaps, Forest, BugtrapForest, GapsAndForest, Mazes };

inline constexpr MapType kAllMapTypes[] = {MapType::AlternatingGaps, MapType::Forest,
                                           MapType::BugtrapForest, MapType::GapsAndForest,
                                           MapType::Mazes};

inline std::string_view to_string(MapType t) {
  switch (t) {
    case MapType::AlternatingGaps: return "alternating_gaps";
    case MapType::Forest: return "forest";
    case MapType::BugtrapForest: return "bugtrap_forest";
    case MapType::GapsAndForest: return "gaps_and_forest";
    case MapType::Mazes: return "mazes";
  }
  return "?";
}

inline std::optional<MapType> parse_map_type(std::string_view s) {
  for (MapType t : kAllMapTypes)
    if (to_string(t) == s) return t;
  // Some published tables spell it "bugtraq".
  if (s == "bugtraq_forest") return MapType::BugtrapForest;
  return std::nullopt;
}

/// The three prepared map sizes, plus Raw for anything not produced by the
/// preparation pipeline. Names are width x height.
enum class DimensionClass : std::uint8_t { Raw, D261x261, D462x261, D462x462 };

inline constexpr DimensionClass kPreparedDimensions[] = {
    DimensionClass::D261x261, DimensionClass::D462x261, DimensionClass::D462x462};

inline std::string_view to_string(DimensionClass d) {
  switch (d) {
    case DimensionClass::Raw: return "raw";
    case DimensionClass::D261x261: return "261x261";
    case DimensionClass::D462x261: return "462x261";
    case DimensionClass::D462x462: return "462x462";
  }
  return "?";
}

inline std::optional<DimensionClass> parse_dimension_class(std::string_view s) {
  for (DimensionClass d : {DimensionClass::Raw, DimensionClass::D261x261,
                           DimensionClass::D462x261, DimensionClass::D462x462})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

/// Width and height of a prepared dimension class.
inline std::pair<int, int> dimensions_of(DimensionClass d) {
  switch (d) {
    case DimensionClass::D261x261: return {261, 261};
    case DimensionClass::D462x261: return {462, 261};
    case DimensionClass::D462x462: return {462, 462};
    case DimensionClass::Raw: break;
  }
  throw std::invalid_argument("raw maps have no fixed dimensions");
}

inline DimensionClass classify_dimensions(int width, int height) {
  for (DimensionClass d : kPreparedDimensions)
    if (dimensions_of(d) == std::pair{width, height}) return d;
  return DimensionClass::Raw;
}

/// Immutable binary occupancy grid, row-major.
class GridMap {
 public:
  GridMap() = default;

  /// `obstacles[i]` is true where cell i (row-major) is blocked.
  GridMap(int width, int height, std::vector<std::uint8_t> obstacles,
          std::optional<MapType> map_type = std::nullopt,
          DimensionClass dimension_class = DimensionClass::Raw, std::string source_id = {})
      : width_(width),
        height_(height),
        blocked_(std::move(obstacles)),
        map_type_(map_type),
        dimension_class_(dimension_class),
        source_id_(std::move(source_id)) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("GridMap: empty dimensions");
    if (blocked_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw std::invalid_argument("GridMap: cell count does not match width*height");
    for (auto& b : blocked_) b = b ? 1 : 0;
  }

  /// All-free map.
  static GridMap empty(int width, int height) {
    return GridMap(width, height,
                   std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0));
  }

  /// Parse rows of '.' (free) and '#' (obstacle). Handy for tests.
  static GridMap from_rows(const std::vector<std::string>& rows) {
    if (rows.empty()) throw std::invalid_argument("GridMap::from_rows: no rows");
    const int w = static_cast<int>(rows.front().size());
    std::vector<std::uint8_t> cells;
    cells.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != w)
        throw std::invalid_argument("GridMap::from_rows: ragged rows");
      for (char c : r) cells.push_back(c == '#' ? 1 : 0);
    }
    return GridMap(w, static_cast<int>(rows.size()), std::move(cells));
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return blocked_.size(); }
  std::optional<MapType> map_type() const noexcept { return map_type_; }
  DimensionClass dimension_class() const noexcept { return dimension_class_; }
  const std::string& source_id() const noexcept { return source_id_; }

  bool in_bounds(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }

  std::size_t index(Coord c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  Coord coord(std::size_t idx) const noexcept {
    return {static_cast<std::int32_t>(idx % static_cast<std::size_t>(width_)),
            static_cast<std::int32_t>(idx / static_cast<std::size_t>(width_))};
  }

  CellState state(Coord c) const noexcept {
    if (!in_bounds(c)) return CellState::OutOfBounds;
    return blocked_[index(c)] ? CellState::Obstacle : CellState::Free;
  }

  bool is_free(Coord c) const noexcept { return state(c) == CellState::Free; }

  std::size_t obstacle_count() const noexcept {
    std::size_t n = 0;
    for (auto b : blocked_) n += b;
    return n;
  }

  /// Row-major obstacle flags (1 = obstacle).
  const std::vector<std::uint8_t>& obstacle_flags() const noexcept { return blocked_; }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.blocked_ == b.blocked_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> blocked_;
  std::optional<MapType> map_type_;
  DimensionClass dimension_class_ = DimensionClass::Raw;
  std::string source_id_;
};

inline CellState cell_state(const GridMap& map, Coord c) noexcept { return map.state(c); }

/// Cells origin + k*unit for k = 1..n, in order.
inline std::vector<Coord> ray_cells(Coord origin, Coord unit, int n) {
  if (unit.x < -1 || unit.x > 1 || unit.y < -1 || unit.y > 1)
    throw std::invalid_argument("ray_cells: offset components must be in {-1,0,1}");
  if (unit.x == 0 && unit.y == 0) throw std::invalid_argument("ray_cells: zero offset");
  if (n < 1) throw std::invalid_argument("ray_cells: n must be >= 1");
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) out.push_back(origin + k * unit);
  return out;
}

}  // namespace rmb

template <>
struct std::hash<rmb::Coord> {
  std::size_t operator()(const rmb::Coord& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x))
                                       << 32) |
                                      static_cast<std::uint32_t>(c.y));
  }
};
