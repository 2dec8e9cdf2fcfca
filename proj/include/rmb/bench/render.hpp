#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmb/grid.hpp"
#include "rmb/planners.hpp"
#include "rmb/scenario.hpp"

namespace rmb::bench {

struct RenderStyle {
  int cell_px = 4;  ///< output pixels per grid cell
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline void check_inside(const GridMap& map, Coord c, const char* what) {
  if (!map.in_bounds(c))
    throw std::invalid_argument(std::string("render: ") + what + " lies outside the map");
}

}  // namespace detail

/// SVG picture of a search: white background, black obstacles (one rect per
/// horizontal run), cyan crosses on expanded cells, the path as a red
/// polyline through cell centres, a green start and a blue goal circle.
/// Coordinates are in cell units; the output is a pure function of its input.
inline std::string render_svg(const GridMap& map, const Scenario& sc, const SearchResult& r,
                              const RenderStyle& style = {}) {
  detail::check_inside(map, sc.start, "start");
  detail::check_inside(map, sc.goal, "goal");
  for (Coord c : r.path) detail::check_inside(map, c, "path point");
  for (Coord c : r.expansions) detail::check_inside(map, c, "expanded cell");
  if (style.cell_px < 1) throw std::invalid_argument("render: cell_px must be >= 1");

  const int w = map.width(), h = map.height();
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w * style.cell_px) +
         "\" height=\"" + std::to_string(h * style.cell_px) + "\" viewBox=\"0 0 " +
         std::to_string(w) + " " + std::to_string(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" fill=\"#ffffff\"/>\n";

  out += "<g fill=\"#000000\" shape-rendering=\"crispEdges\">\n";
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w;) {
      if (map.is_free({x, y})) {
        ++x;
        continue;
      }
      int run = 1;
      while (x + run < w && !map.is_free({x + run, y})) ++run;
      out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(run) + "\" height=\"1\"/>\n";
      x += run;
    }
  out += "</g>\n";

  if (!r.expansions.empty()) {
    out += "<g stroke=\"#00ffff\" stroke-width=\"0.12\">\n";
    for (Coord c : r.expansions) {
      const std::string x0 = detail::num(c.x + 0.2), x1 = detail::num(c.x + 0.8);
      const std::string y0 = detail::num(c.y + 0.2), y1 = detail::num(c.y + 0.8);
      out += "<path d=\"M" + x0 + " " + y0 + "L" + x1 + " " + y1 + "M" + x0 + " " + y1 + "L" + x1 +
             " " + y0 + "\"/>\n";
    }
    out += "</g>\n";
  }

  if (r.found() && r.path.size() >= 2) {
    out += "<polyline fill=\"none\" stroke=\"#ff0000\" stroke-width=\"0.3\" points=\"";
    for (std::size_t i = 0; i < r.path.size(); ++i) {
      if (i) out += ' ';
      out += detail::num(r.path[i].x + 0.5) + "," + detail::num(r.path[i].y + 0.5);
    }
    out += "\"/>\n";
  }

  auto circle = [&](Coord c, const char* colour) {
    out += "<circle cx=\"" + detail::num(c.x + 0.5) + "\" cy=\"" + detail::num(c.y + 0.5) +
           "\" r=\"0.8\" fill=\"" + colour + "\"/>\n";
  };
  circle(sc.start, "#00b000");
  circle(sc.goal, "#0000ff");
  out += "</svg>\n";
  return out;
}

}  // namespace rmb::bench
