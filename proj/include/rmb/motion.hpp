#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rmb/grid.hpp"

namespace rmb {

enum class DirectionClass : std::uint8_t { Cardinal, Diagonal };

inline constexpr double kCardinalBaseCost = 1.0;
inline constexpr double kDiagonalBaseCost = std::numbers::sqrt2;

inline constexpr double base_cost(DirectionClass c) noexcept {
  return c == DirectionClass::Cardinal ? kCardinalBaseCost : kDiagonalBaseCost;
}

/// One row of the motion block: a jump offset and its direction class.
struct MotionVector {
  Coord offset;
  DirectionClass direction_class = DirectionClass::Cardinal;
  double base_cost = kCardinalBaseCost;

  /// Offset with each component reduced to its sign.
  constexpr Coord unit() const noexcept {
    return {(offset.x > 0) - (offset.x < 0), (offset.y > 0) - (offset.y < 0)};
  }
};

/// The eight jump directions of a size-n motion block. Cardinal rows come
/// first, then diagonals, in a fixed order.
inline constexpr std::array<Coord, 8> kBlockUnits = {
    Coord{1, 0},   Coord{0, 1},  Coord{-1, 0}, Coord{0, -1},
    Coord{-1, -1}, Coord{-1, 1}, Coord{1, -1}, Coord{1, 1},
};

class MotionBlock {
 public:
  explicit MotionBlock(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("MotionBlock: size must be >= 1");
    constexpr const auto& kUnits = kBlockUnits;
    for (std::size_t i = 0; i < kUnits.size(); ++i) {
      const auto cls = i < 4 ? DirectionClass::Cardinal : DirectionClass::Diagonal;
      entries_[i] = MotionVector{n * kUnits[i], cls, rmb::base_cost(cls)};
      units_[i] = kUnits[i];
      ray_lengths_[i] = n * rmb::base_cost(cls);
    }
  }

  int size() const noexcept { return n_; }
  const std::array<MotionVector, 8>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  /// Unit step of entry i.
  Coord unit(std::size_t i) const noexcept { return units_[i]; }
  /// Length of the full jump of entry i: n or n * sqrt(2).
  double ray_length(std::size_t i) const noexcept { return ray_lengths_[i]; }

 private:
  int n_;
  std::array<MotionVector, 8> entries_{};
  std::array<Coord, 8> units_{};
  std::array<double, 8> ray_lengths_{};
};

inline MotionBlock build_motion_block(int n) { return MotionBlock(n); }

/// Goal-bias weight of the adaptive cost.
struct AdaptiveCostParams {
  static constexpr double kDefaultAlpha = 0.007;
  static constexpr double kMinAlpha = 0.001;
  static constexpr double kMaxAlpha = 0.009;

  double alpha = kDefaultAlpha;

  /// Range-checked construction. `allow_override` admits values outside
  /// [0.001, 0.009] (alpha = 0 for ablation); negative values are always
  /// rejected.
  static AdaptiveCostParams checked(double alpha, bool allow_override = false) {
    if (!std::isfinite(alpha) || alpha < 0.0)
      throw std::invalid_argument("alpha must be a finite non-negative value");
    if (!allow_override && (alpha < kMinAlpha || alpha > kMaxAlpha))
      throw std::invalid_argument("alpha outside [0.001, 0.009]; pass an explicit override");
    return AdaptiveCostParams{alpha};
  }
};

/// C' = Ccn + |cn q|, then C = C' + alpha * |gn q|.
inline double adaptive_cost(double current_cost, Coord current, Coord candidate, Coord goal,
                            double alpha) {
  const double step = current_cost + euclidean(current, candidate);
  return step + euclidean(goal, candidate) * alpha;
}

/// Direction-class multiplier applied to the adaptive cost: 1 for cardinal,
/// sqrt(2) for diagonal.
inline double move_cost(DirectionClass cls, double adaptive) { return base_cost(cls) * adaptive; }

/// One candidate move produced by a motion block expansion.
struct Successor {
  Coord cell;
  /// Row-major index of `cell`.
  std::size_t index = 0;
  /// Direction-weighted adaptive cost d * C assigned to `cell`.
  double arrival_cost = 0.0;
  /// C' : the node cost plus the geometric length of the move.
  double path_cost = 0.0;
  /// C : C' plus the alpha-weighted distance from `cell` to the goal.
  double adaptive = 0.0;
  /// |cell goal|, kept so callers need not recompute it.
  double goal_distance = 0.0;
  /// Motion block entry the move follows (the final leg for a two-leg move).
  std::uint8_t direction = 0;
  DirectionClass direction_class = DirectionClass::Cardinal;
  /// Set when the goal is reached by a two-leg move; the bend cell.
  std::optional<Coord> corner;
};

struct SuccessorPolicy {
  /// When a ray is blocked at step k > 1, emit the last free cell (k - 1)
  /// instead of nothing.
  bool emit_truncated_steps = false;
  /// When the goal lies inside the block's square but on none of its rays,
  /// reach it with a diagonal leg followed by a cardinal leg (or the reverse)
  /// if every cell on both legs is free.
  bool two_leg_goal_approach = true;
};

namespace detail {

/// Length of a straight k-cell ray move, k * 1 or k * sqrt(2).
inline double ray_length(Coord from, Coord to) {
  const Coord d = to - from;
  if (d.x == 0 || d.y == 0) return static_cast<double>(std::abs(d.x) + std::abs(d.y));
  if (std::abs(d.x) == std::abs(d.y)) return std::abs(d.x) * kDiagonalBaseCost;
  return euclidean(from, to);
}

// Same terms as adaptive_cost/move_cost, evaluated with one square root.
// `length` is |node cell|.
inline Successor make_successor(double node_cost, Coord cell, std::size_t index, double length,
                                Coord goal, std::size_t direction, DirectionClass cls,
                                double alpha) {
  Successor s;
  s.cell = cell;
  s.index = index;
  s.direction = static_cast<std::uint8_t>(direction);
  s.direction_class = cls;
  s.goal_distance = euclidean(goal, cell);
  s.path_cost = node_cost + length;
  s.adaptive = s.path_cost + s.goal_distance * alpha;
  s.arrival_cost = move_cost(cls, s.adaptive);
  return s;
}

/// Position of a unit step in the motion block order.
inline constexpr std::size_t direction_index(Coord unit) noexcept {
  for (std::size_t i = 0; i < kBlockUnits.size(); ++i)
    if (kBlockUnits[i] == unit) return i;
  return kBlockUnits.size();
}

inline constexpr Coord sign_of(Coord d) noexcept {
  return {(d.x > 0) - (d.x < 0), (d.y > 0) - (d.y < 0)};
}

template <typename InspectFn>
bool leg_is_free(const GridMap& map, Coord from, Coord unit, int steps, InspectFn& inspect) {
  Coord c = from;
  for (int k = 0; k < steps; ++k) {
    c = c + unit;
    if (!map.in_bounds(c)) return false;
    const std::size_t idx = map.index(c);
    inspect(idx);
    if (map.obstacle_flags()[idx]) return false;
  }
  return true;
}

// Steps from `from` along `unit` that stay on the map, capped at n.
inline int steps_in_bounds(const GridMap& map, Coord from, Coord unit, int n) noexcept {
  int lim = n;
  if (unit.x > 0) lim = std::min(lim, map.width() - 1 - from.x);
  if (unit.x < 0) lim = std::min(lim, from.x);
  if (unit.y > 0) lim = std::min(lim, map.height() - 1 - from.y);
  if (unit.y < 0) lim = std::min(lim, from.y);
  return lim;
}

}  // namespace detail

/// Expands `node` through every direction of `block`. Every cell on a ray is
/// checked in order; a ray whose cells are all free emits its end cell. A goal
/// met part-way along a free ray is emitted too. `inspect(index)` sees every
/// in-bounds cell whose occupancy is read; `emit(const Successor&)` receives
/// the candidates. `wanted(index, path_cost)` may reject a candidate before
/// its goal terms are computed.
template <typename InspectFn, typename EmitFn, typename WantedFn>
void for_each_successor(const GridMap& map, Coord node, double node_cost, Coord goal,
                        const MotionBlock& block, const AdaptiveCostParams& params,
                        const SuccessorPolicy& policy, InspectFn&& inspect, EmitFn&& emit,
                        WantedFn&& wanted) {
  if (!map.is_free(node)) throw std::invalid_argument("successors: node is not a free cell");
  const int n = block.size();
  const double alpha = params.alpha;
  const std::uint8_t* blocked = map.obstacle_flags().data();
  const std::ptrdiff_t width = map.width();
  const std::ptrdiff_t node_idx = static_cast<std::ptrdiff_t>(map.index(node));
  const std::ptrdiff_t goal_idx =
      map.in_bounds(goal) ? static_cast<std::ptrdiff_t>(map.index(goal)) : -1;
  for (std::size_t i = 0; i < 8; ++i) {
    const MotionVector& mv = block.entries()[i];
    const Coord unit = block.unit(i);
    const int lim = detail::steps_in_bounds(map, node, unit, n);
    const std::ptrdiff_t step = unit.y * width + unit.x;
    std::ptrdiff_t idx = node_idx;
    int k = 1;
    for (; k <= lim; ++k) {
      idx += step;
      inspect(static_cast<std::size_t>(idx));
      if (blocked[idx]) break;
      if (k < n && idx == goal_idx &&
          wanted(static_cast<std::size_t>(idx), node_cost + k * mv.base_cost))
        emit(detail::make_successor(node_cost, goal, static_cast<std::size_t>(idx),
                                    k * mv.base_cost, goal, i, mv.direction_class, alpha));
    }
    if (k > n) {
      if (wanted(static_cast<std::size_t>(idx), node_cost + block.ray_length(i)))
        emit(detail::make_successor(node_cost, node + mv.offset, static_cast<std::size_t>(idx),
                                    block.ray_length(i), goal, i, mv.direction_class, alpha));
    } else if (policy.emit_truncated_steps && k > 1) {
      const Coord last = node + (k - 1) * unit;
      if (last != goal && wanted(map.index(last), node_cost + (k - 1) * mv.base_cost))
        emit(detail::make_successor(node_cost, last, map.index(last),
                                    (k - 1) * mv.base_cost, goal, i, mv.direction_class, alpha));
    }
  }

  if (!policy.two_leg_goal_approach || n == 1 || node == goal || chebyshev(node, goal) > n) return;
  const Coord d = goal - node;
  if (d.x == 0 || d.y == 0 || std::abs(d.x) == std::abs(d.y)) return;  // on a ray
  const Coord diag = detail::sign_of(d);
  const int diag_steps = std::min(std::abs(d.x), std::abs(d.y));
  const int card_steps = std::max(std::abs(d.x), std::abs(d.y)) - diag_steps;
  const Coord card = std::abs(d.x) > std::abs(d.y) ? Coord{diag.x, 0} : Coord{0, diag.y};

  struct Leg {
    DirectionClass cls;
    Coord unit;
    int steps;
  };
  const Leg orders[2][2] = {
      {{DirectionClass::Diagonal, diag, diag_steps}, {DirectionClass::Cardinal, card, card_steps}},
      {{DirectionClass::Cardinal, card, card_steps}, {DirectionClass::Diagonal, diag, diag_steps}}};
  for (const auto& legs : orders) {
    const Coord corner = node + legs[0].steps * legs[0].unit;
    if (!detail::leg_is_free(map, node, legs[0].unit, legs[0].steps, inspect)) continue;
    if (!detail::leg_is_free(map, corner, legs[1].unit, legs[1].steps, inspect)) continue;
    // Both legs chain the cost terms as two consecutive moves.
    const double len0 = legs[0].steps * base_cost(legs[0].cls);
    const double len1 = legs[1].steps * base_cost(legs[1].cls);
    if (!wanted(map.index(goal), node_cost + len0 + len1)) return;
    const Successor first = detail::make_successor(node_cost, corner, map.index(corner), len0, goal,
                                                   detail::direction_index(legs[0].unit),
                                                   legs[0].cls, alpha);
    Successor s = detail::make_successor(first.path_cost, goal, map.index(goal), len1, goal,
                                         detail::direction_index(legs[1].unit), legs[1].cls, alpha);
    s.arrival_cost = move_cost(legs[1].cls, first.arrival_cost + len1);
    s.corner = corner;
    emit(s);
    return;
  }
}

template <typename InspectFn, typename EmitFn>
void for_each_successor(const GridMap& map, Coord node, double node_cost, Coord goal,
                        const MotionBlock& block, const AdaptiveCostParams& params,
                        const SuccessorPolicy& policy, InspectFn&& inspect, EmitFn&& emit) {
  for_each_successor(map, node, node_cost, goal, block, params, policy, inspect, emit,
                     [](std::size_t, double) { return true; });
}

inline std::vector<Successor> successors(const GridMap& map, Coord node, double node_cost,
                                         Coord goal, const MotionBlock& block,
                                         const AdaptiveCostParams& params,
                                         const SuccessorPolicy& policy = {}) {
  std::vector<Successor> out;
  for_each_successor(map, node, node_cost, goal, block, params, policy, [](std::size_t) {},
                     [&](const Successor& s) { out.push_back(s); });
  return out;
}

}  // namespace rmb
