#include <gtest/gtest.h>

#include <climits>
#include <cmath>
#include <random>

#include "rmb/grid.hpp"
#include "rmb/ingest.hpp"

using namespace rmb;

TEST(Euclidean, PythagoreanTriple) { EXPECT_DOUBLE_EQ(euclidean({0, 0}, {3, 4}), 5.0); }

TEST(Euclidean, IdentityIsZero) { EXPECT_EQ(euclidean({7, 2}, {7, 2}), 0.0); }

TEST(Euclidean, UnitDiagonal) { EXPECT_NEAR(euclidean({0, 0}, {1, 1}), 1.4142135623730951, 1e-15); }

TEST(Euclidean, SymmetricAndTriangle) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-1000, 1000);
  for (int i = 0; i < 5000; ++i) {
    const Coord a{c(rng), c(rng)}, b{c(rng), c(rng)}, d{c(rng), c(rng)};
    EXPECT_EQ(euclidean(a, b), euclidean(b, a));
    EXPECT_LE(euclidean(a, d), euclidean(a, b) + euclidean(b, d) + 1e-9);
    EXPECT_EQ(euclidean(a, b) == 0.0, a == b);
  }
}

TEST(Euclidean, ExtremeCoordinatesDoNotOverflow) {
  EXPECT_NEAR(euclidean({INT_MIN, 0}, {INT_MAX, 0}), 4294967295.0, 1e-3);
}

TEST(Chebyshev, MaxOfAxisDistances) {
  EXPECT_EQ(chebyshev({0, 0}, {3, -7}), 7);
  EXPECT_EQ(chebyshev({2, 2}, {2, 2}), 0);
}

TEST(CellState, PreparedMapBorderAndInterior) {
  const GridMap m = prepare_map({RawBitmap(201, 201, std::uint8_t{255})}, DimensionClass::D261x261);
  EXPECT_EQ(cell_state(m, {0, 0}), CellState::Obstacle);
  EXPECT_EQ(cell_state(m, {20, 20}), CellState::Free);
  EXPECT_EQ(cell_state(m, {-1, 0}), CellState::OutOfBounds);
}

TEST(CellState, OutOfBoundsExactlyOutsideGrid) {
  const GridMap m = GridMap::from_rows({"..#", "#..", "..."});
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> any(INT_MIN, INT_MAX);
  std::uniform_int_distribution<int> near(-5, 8);
  for (int i = 0; i < 20000; ++i) {
    const Coord c = i % 2 ? Coord{any(rng), any(rng)} : Coord{near(rng), near(rng)};
    const bool inside = c.x >= 0 && c.y >= 0 && c.x < 3 && c.y < 3;
    EXPECT_EQ(cell_state(m, c) == CellState::OutOfBounds, !inside);
  }
  EXPECT_EQ(cell_state(m, {2, 0}), CellState::Obstacle);
  EXPECT_EQ(cell_state(m, {0, 1}), CellState::Obstacle);
  EXPECT_EQ(cell_state(m, {1, 1}), CellState::Free);
  EXPECT_EQ(cell_state(m, {3, 0}), CellState::OutOfBounds);
  EXPECT_EQ(cell_state(m, {0, 3}), CellState::OutOfBounds);
}

TEST(RayCells, CardinalProgression) {
  EXPECT_EQ(ray_cells({5, 5}, {1, 0}, 3), (std::vector<Coord>{{6, 5}, {7, 5}, {8, 5}}));
}

TEST(RayCells, DiagonalProgression) {
  EXPECT_EQ(ray_cells({5, 5}, {-1, -1}, 2), (std::vector<Coord>{{4, 4}, {3, 3}}));
}

TEST(RayCells, SingleStep) { EXPECT_EQ(ray_cells({0, 0}, {0, 1}, 1), (std::vector<Coord>{{0, 1}})); }

TEST(RayCells, RejectsBadOffsets) {
  EXPECT_THROW(ray_cells({0, 0}, {0, 0}, 1), std::invalid_argument);
  EXPECT_THROW(ray_cells({0, 0}, {2, 0}, 1), std::invalid_argument);
  EXPECT_THROW(ray_cells({0, 0}, {0, -2}, 1), std::invalid_argument);
  EXPECT_THROW(ray_cells({0, 0}, {1, 0}, 0), std::invalid_argument);
}

TEST(RayCells, LengthAndStride) {
  for (int ux = -1; ux <= 1; ++ux)
    for (int uy = -1; uy <= 1; ++uy) {
      if (!ux && !uy) continue;
      for (int n = 1; n <= 9; ++n) {
        const auto r = ray_cells({-3, 4}, {ux, uy}, n);
        ASSERT_EQ(r.size(), static_cast<std::size_t>(n));
        Coord prev{-3, 4};
        for (Coord c : r) {
          EXPECT_EQ(c - prev, (Coord{ux, uy}));
          prev = c;
        }
      }
    }
}

TEST(GridMap, RejectsInconsistentStorage) {
  EXPECT_THROW(GridMap(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
  EXPECT_THROW(GridMap(0, 2, {}), std::invalid_argument);
  EXPECT_THROW(GridMap::from_rows({"..", "."}), std::invalid_argument);
}

TEST(GridMap, RowMajorIndexing) {
  const GridMap m = GridMap::from_rows({"....", "...#"});
  EXPECT_EQ(m.index({3, 1}), 7u);
  EXPECT_EQ(m.coord(7), (Coord{3, 1}));
  EXPECT_EQ(m.obstacle_count(), 1u);
}

TEST(DimensionClass, ClassifiesPreparedSizes) {
  EXPECT_EQ(classify_dimensions(261, 261), DimensionClass::D261x261);
  EXPECT_EQ(classify_dimensions(462, 261), DimensionClass::D462x261);
  EXPECT_EQ(classify_dimensions(462, 462), DimensionClass::D462x462);
  EXPECT_EQ(classify_dimensions(261, 462), DimensionClass::Raw);
  EXPECT_THROW(dimensions_of(DimensionClass::Raw), std::invalid_argument);
}

TEST(MapType, NamesRoundTrip) {
  for (MapType t : kAllMapTypes) EXPECT_EQ(parse_map_type(to_string(t)), t);
  EXPECT_EQ(parse_map_type("bugtraq_forest"), MapType::BugtrapForest);
  EXPECT_FALSE(parse_map_type("shifting_gaps"));
}
