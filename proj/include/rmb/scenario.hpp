#pragma once

#include "rmb/grid.hpp"

namespace rmb {

/// A start/goal pair. `direction_id` is 1..4 for the standard corner pairs and
/// 0 for ad-hoc queries.
struct Scenario {
  Coord start;
  Coord goal;
  int direction_id = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace rmb
