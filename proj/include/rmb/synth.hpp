#pragma once

// Procedural 201x201 tiles in the style of the five benchmark map families.
// Used when the public dataset is not available locally, and by the tests.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rmb/grid.hpp"
#include "rmb/ingest.hpp"

namespace rmb::synth {

inline constexpr int kTileSize = 201;

namespace detail {

using Rng = std::mt19937_64;

inline void fill_rect(RawBitmap& img, int x0, int y0, int x1, int y1, std::uint8_t v) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, img.width - 1);
  y1 = std::min(y1, img.height - 1);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) img.at(x, y) = v;
}

inline void fill_disc(RawBitmap& img, int cx, int cy, int r) {
  for (int y = cy - r; y <= cy + r; ++y)
    for (int x = cx - r; x <= cx + r; ++x)
      if (x >= 0 && y >= 0 && x < img.width && y < img.height &&
          (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
        img.at(x, y) = 0;
}

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline void scatter_trees(RawBitmap& img, Rng& rng, int count, int rmin, int rmax) {
  for (int i = 0; i < count; ++i)
    fill_disc(img, uniform(rng, 0, img.width - 1), uniform(rng, 0, img.height - 1),
              uniform(rng, rmin, rmax));
}

/// Vertical or horizontal walls across the tile, each pierced by one gap.
/// Consecutive gaps alternate between the two halves of the wall.
inline void gapped_walls(RawBitmap& img, Rng& rng, int walls, int thickness, int gap_min,
                         int gap_max) {
  const bool vertical = uniform(rng, 0, 1) == 0;
  const int span = vertical ? img.width : img.height;
  const int len = vertical ? img.height : img.width;
  const int spacing = span / (walls + 1);
  for (int w = 0; w < walls; ++w) {
    const int pos = spacing * (w + 1) + uniform(rng, -spacing / 6, spacing / 6);
    const int gap = uniform(rng, gap_min, gap_max);
    const int half = len / 2;
    const int gap_start = (w % 2 == 0) ? uniform(rng, 5, half - gap) : uniform(rng, half, len - gap - 5);
    for (int t = 0; t < thickness; ++t)
      for (int s = 0; s < len; ++s) {
        if (s >= gap_start && s < gap_start + gap) continue;
        if (vertical)
          img.at(pos + t, s) = 0;
        else
          img.at(s, pos + t) = 0;
      }
  }
}

/// A U-shaped trap opening in a random direction.
inline void bugtrap(RawBitmap& img, Rng& rng) {
  const int size = uniform(rng, 50, 80);
  const int t = 4;
  const int cx = uniform(rng, 60, img.width - 60);
  const int cy = uniform(rng, 60, img.height - 60);
  const int x0 = cx - size / 2, y0 = cy - size / 2, x1 = cx + size / 2, y1 = cy + size / 2;
  const int open = uniform(rng, 0, 3);
  const int mouth = size / 4;
  if (open != 0) fill_rect(img, x0, y0, x1, y0 + t - 1, 0);  // top
  if (open != 1) fill_rect(img, x0, y1 - t + 1, x1, y1, 0);  // bottom
  if (open != 2) fill_rect(img, x0, y0, x0 + t - 1, y1, 0);  // left
  if (open != 3) fill_rect(img, x1 - t + 1, y0, x1, y1, 0);  // right
  // lips narrowing the open side
  switch (open) {
    case 0:
      fill_rect(img, x0, y0, cx - mouth, y0 + t - 1, 0);
      fill_rect(img, cx + mouth, y0, x1, y0 + t - 1, 0);
      break;
    case 1:
      fill_rect(img, x0, y1 - t + 1, cx - mouth, y1, 0);
      fill_rect(img, cx + mouth, y1 - t + 1, x1, y1, 0);
      break;
    case 2:
      fill_rect(img, x0, y0, x0 + t - 1, cy - mouth, 0);
      fill_rect(img, x0, cy + mouth, x0 + t - 1, y1, 0);
      break;
    default:
      fill_rect(img, x1 - t + 1, y0, x1, cy - mouth, 0);
      fill_rect(img, x1 - t + 1, cy + mouth, x1, y1, 0);
      break;
  }
}

/// Recursive-backtracker maze on a coarse lattice of `cells` x `cells` rooms,
/// with a few openings in the outer wall.
inline void maze(RawBitmap& img, Rng& rng, int cells, int wall) {
  const int pitch = (img.width - wall) / cells;
  const int extent = pitch * cells + wall;
  const int off = (img.width - extent) / 2;
  std::vector<std::uint8_t> visited(static_cast<std::size_t>(cells) * cells, 0);
  // walls: right[i] between (x,y) and (x+1,y); down[i] between (x,y) and (x,y+1)
  std::vector<std::uint8_t> right(visited.size(), 1), down(visited.size(), 1);
  std::vector<int> stack{0};
  visited[0] = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    const int x = cur % cells, y = cur / cells;
    int options[4], k = 0;
    if (x > 0 && !visited[cur - 1]) options[k++] = cur - 1;
    if (x + 1 < cells && !visited[cur + 1]) options[k++] = cur + 1;
    if (y > 0 && !visited[cur - cells]) options[k++] = cur - cells;
    if (y + 1 < cells && !visited[cur + cells]) options[k++] = cur + cells;
    if (k == 0) {
      stack.pop_back();
      continue;
    }
    const int nxt = options[uniform(rng, 0, k - 1)];
    if (nxt == cur + 1) right[cur] = 0;
    else if (nxt == cur - 1) right[nxt] = 0;
    else if (nxt == cur + cells) down[cur] = 0;
    else down[nxt] = 0;
    visited[nxt] = 1;
    stack.push_back(nxt);
  }
  // Knock out a few extra walls so the maze has loops.
  for (int i = 0; i < cells; ++i) {
    const int c = uniform(rng, 0, cells * cells - 1);
    if (uniform(rng, 0, 1) && c % cells + 1 < cells) right[c] = 0;
    else if (c / cells + 1 < cells) down[c] = 0;
  }
  // Outer frame.
  fill_rect(img, off, off, off + extent - 1, off + wall - 1, 0);
  fill_rect(img, off, off + extent - wall, off + extent - 1, off + extent - 1, 0);
  fill_rect(img, off, off, off + wall - 1, off + extent - 1, 0);
  fill_rect(img, off + extent - wall, off, off + extent - 1, off + extent - 1, 0);
  for (int y = 0; y < cells; ++y)
    for (int x = 0; x < cells; ++x) {
      const int c = y * cells + x;
      const int px = off + x * pitch, py = off + y * pitch;
      if (right[c] && x + 1 < cells)
        fill_rect(img, px + pitch, py, px + pitch + wall - 1, py + pitch + wall - 1, 0);
      if (down[c] && y + 1 < cells)
        fill_rect(img, px, py + pitch, px + pitch + wall - 1, py + pitch + wall - 1, 0);
    }
  // Two doors per side of the frame.
  for (int side = 0; side < 4; ++side)
    for (int d = 0; d < 2; ++d) {
      const int room = uniform(rng, 0, cells - 1);
      const int a = off + room * pitch + wall, b = a + pitch - wall - 1;
      switch (side) {
        case 0: fill_rect(img, a, off, b, off + wall - 1, 255); break;
        case 1: fill_rect(img, a, off + extent - wall, b, off + extent - 1, 255); break;
        case 2: fill_rect(img, off, a, off + wall - 1, b, 255); break;
        default: fill_rect(img, off + extent - wall, a, off + extent - 1, b, 255); break;
      }
    }
}

}  // namespace detail

/// One deterministic tile for (type, seed).
inline RawBitmap make_tile(MapType type, std::uint64_t seed, int size = kTileSize) {
  detail::Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(type) + 1);
  RawBitmap img(size, size, std::uint8_t{255});
  switch (type) {
    case MapType::Forest:
      detail::scatter_trees(img, rng, detail::uniform(rng, 45, 70), 2, 7);
      break;
    case MapType::AlternatingGaps:
      detail::gapped_walls(img, rng, detail::uniform(rng, 3, 5), 4, 14, 24);
      break;
    case MapType::BugtrapForest:
      detail::scatter_trees(img, rng, detail::uniform(rng, 25, 40), 2, 6);
      detail::bugtrap(img, rng);
      break;
    case MapType::GapsAndForest:
      detail::gapped_walls(img, rng, detail::uniform(rng, 2, 3), 4, 14, 22);
      detail::scatter_trees(img, rng, detail::uniform(rng, 30, 45), 2, 6);
      break;
    case MapType::Mazes:
      detail::maze(img, rng, detail::uniform(rng, 7, 9), 3);
      break;
  }
  return img;
}

/// Writes `<root>/<type>/<type>_<i>.png` for i in [0, count) for each type.
template <typename WritePng>
void write_dataset(const std::filesystem::path& root, std::size_t count, std::uint64_t seed,
                   WritePng&& write_png) {
  for (MapType t : kAllMapTypes)
    for (std::size_t i = 0; i < count; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%s_%05zu.png", std::string(to_string(t)).c_str(), i);
      write_png(root / std::string(to_string(t)) / name, make_tile(t, seed + i));
    }
}

}  // namespace rmb::synth
