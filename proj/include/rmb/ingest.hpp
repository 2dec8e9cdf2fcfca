#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"  // vendored nlohmann/json

#include "rmb/grid.hpp"
#include "rmb/scenario.hpp"

namespace rmb {

/// 8-bit grayscale image, row-major.
struct RawBitmap {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> luminance;

  RawBitmap() = default;
  RawBitmap(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), luminance(static_cast<std::size_t>(w) * h, fill) {
    if (w < 0 || h < 0) throw std::invalid_argument("RawBitmap: negative dimensions");
  }
  RawBitmap(int w, int h, std::vector<std::uint8_t> pixels)
      : width(w), height(h), luminance(std::move(pixels)) {
    if (w < 0 || h < 0 || luminance.size() != static_cast<std::size_t>(w) * h)
      throw std::invalid_argument("RawBitmap: pixel count does not match dimensions");
  }

  bool empty() const noexcept { return width == 0 || height == 0; }
  std::uint8_t& at(int x, int y) { return luminance[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const {
    return luminance[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const RawBitmap&, const RawBitmap&) = default;
};

inline constexpr std::uint8_t kFreeThreshold = 128;
inline constexpr int kBorderRing = 15;
inline constexpr int kScenarioInset = 20;

/// Luminance >= 128 is free, anything darker is an obstacle.
inline GridMap threshold_bitmap(const RawBitmap& raw, std::optional<MapType> type = std::nullopt,
                                std::string source_id = {}) {
  if (raw.empty()) throw std::invalid_argument("threshold_bitmap: empty bitmap");
  std::vector<std::uint8_t> blocked(raw.luminance.size());
  std::transform(raw.luminance.begin(), raw.luminance.end(), blocked.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v < kFreeThreshold); });
  return GridMap(raw.width, raw.height, std::move(blocked), type,
                 classify_dimensions(raw.width, raw.height), std::move(source_id));
}

/// Canonical image of a grid: 0 for obstacles, 255 for free cells.
inline RawBitmap to_bitmap(const GridMap& map) {
  RawBitmap out(map.width(), map.height());
  const auto& flags = map.obstacle_flags();
  for (std::size_t i = 0; i < flags.size(); ++i) out.luminance[i] = flags[i] ? 0 : 255;
  return out;
}

enum class StitchLayout : std::uint8_t { Single, SideBySide, Square };

inline std::size_t tile_count(StitchLayout l) {
  switch (l) {
    case StitchLayout::Single: return 1;
    case StitchLayout::SideBySide: return 2;
    case StitchLayout::Square: return 4;
  }
  return 0;
}

/// Places tiles left-to-right, top-to-bottom: 1x1, 2x1 or 2x2.
inline RawBitmap stitch(const std::vector<RawBitmap>& tiles, StitchLayout layout) {
  if (tiles.size() != tile_count(layout))
    throw std::invalid_argument("stitch: tile count does not match layout");
  const int tw = tiles.front().width;
  const int th = tiles.front().height;
  for (const auto& t : tiles)
    if (t.width != tw || t.height != th)
      throw std::invalid_argument("stitch: tiles have mismatched dimensions");
  if (layout == StitchLayout::Single) return tiles.front();
  const int cols = 2;
  const int rows = layout == StitchLayout::Square ? 2 : 1;
  RawBitmap out(tw * cols, th * rows);
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const int ox = static_cast<int>(t % cols) * tw;
    const int oy = static_cast<int>(t / cols) * th;
    for (int y = 0; y < th; ++y)
      std::copy_n(tiles[t].luminance.begin() + static_cast<std::ptrdiff_t>(y) * tw, tw,
                  out.luminance.begin() + static_cast<std::ptrdiff_t>(oy + y) * out.width + ox);
  }
  return out;
}

/// Surrounds the image with a 15-pixel free ring and then a 15-pixel obstacle
/// ring, so each side grows by 30.
inline RawBitmap add_borders(const RawBitmap& raw) {
  constexpr int pad = 2 * kBorderRing;
  RawBitmap out(raw.width + 2 * pad, raw.height + 2 * pad, std::uint8_t{0});
  for (int y = kBorderRing; y < out.height - kBorderRing; ++y)
    for (int x = kBorderRing; x < out.width - kBorderRing; ++x) out.at(x, y) = 255;
  for (int y = 0; y < raw.height; ++y)
    std::copy_n(raw.luminance.begin() + static_cast<std::ptrdiff_t>(y) * raw.width, raw.width,
                out.luminance.begin() + static_cast<std::ptrdiff_t>(y + pad) * out.width + pad);
  return out;
}

inline StitchLayout layout_for(DimensionClass d) {
  switch (d) {
    case DimensionClass::D261x261: return StitchLayout::Single;
    case DimensionClass::D462x261: return StitchLayout::SideBySide;
    case DimensionClass::D462x462: return StitchLayout::Square;
    case DimensionClass::Raw: break;
  }
  throw std::invalid_argument("no stitch layout for raw maps");
}

/// Stitch, border and binarize tiles into one prepared map.
inline GridMap prepare_map(const std::vector<RawBitmap>& tiles, DimensionClass dim,
                           std::optional<MapType> type = std::nullopt, std::string source_id = {}) {
  GridMap map = threshold_bitmap(add_borders(stitch(tiles, layout_for(dim))), type,
                                 std::move(source_id));
  if (map.dimension_class() != dim)
    throw std::invalid_argument("prepare_map: tiles do not produce the requested dimensions");
  return map;
}

/// How many maps of each prepared class are evaluated per start/goal direction.
inline int maps_per_direction(DimensionClass d) {
  switch (d) {
    case DimensionClass::D261x261: return 200;
    case DimensionClass::D462x261: return 100;
    case DimensionClass::D462x462: return 50;
    case DimensionClass::Raw: break;
  }
  throw std::invalid_argument("maps_per_direction: raw class");
}

/// User-supplied start/goal coordinates keyed by (dimension class, direction).
class ScenarioOverrides {
 public:
  void set(DimensionClass d, int direction_id, Coord start, Coord goal) {
    if (direction_id < 1 || direction_id > 4)
      throw std::invalid_argument("scenario direction_id must be 1..4");
    table_[{d, direction_id}] = Scenario{start, goal, direction_id};
  }

  std::optional<Scenario> find(DimensionClass d, int direction_id) const {
    auto it = table_.find({d, direction_id});
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  bool empty() const noexcept { return table_.empty(); }

  /// Parses `[{"dimension_class": "261x261", "direction_id": 1, "start": [x, y],
  /// "goal": [x, y]}, ...]`.
  static ScenarioOverrides from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("scenario overrides must be a JSON array");
    ScenarioOverrides out;
    for (const auto& e : j) {
      const auto dim = parse_dimension_class(e.at("dimension_class").get<std::string>());
      if (!dim || *dim == DimensionClass::Raw)
        throw std::invalid_argument("scenario override: unknown dimension_class");
      const auto s = e.at("start").get<std::array<int, 2>>();
      const auto g = e.at("goal").get<std::array<int, 2>>();
      out.set(*dim, e.at("direction_id").get<int>(), {s[0], s[1]}, {g[0], g[1]});
    }
    return out;
  }

  static ScenarioOverrides load(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open scenario file " + p.string());
    return from_json(nlohmann::json::parse(in));
  }

 private:
  std::map<std::pair<DimensionClass, int>, Scenario> table_;
};

/// The four opposite-corner start/goal pairs, inset 20 cells from the edge.
inline std::vector<Scenario> generate_scenarios(DimensionClass dim,
                                                const ScenarioOverrides& overrides = {}) {
  if (dim == DimensionClass::Raw) throw std::invalid_argument("generate_scenarios: raw class");
  const auto [w, h] = dimensions_of(dim);
  const int lo = kScenarioInset;
  const int hx = w - 1 - kScenarioInset;
  const int hy = h - 1 - kScenarioInset;
  std::vector<Scenario> out = {
      {{lo, lo}, {hx, hy}, 1},
      {{hx, lo}, {lo, hy}, 2},
      {{lo, hy}, {hx, lo}, 3},
      {{hx, hy}, {lo, lo}, 4},
  };
  for (auto& s : out)
    if (auto o = overrides.find(dim, s.direction_id)) s = *o;
  return out;
}

// --- canonical PGM cache -----------------------------------------------------

/// Binary P5 graymap, maxval 255, obstacles 0 and free cells 255.
inline std::string encode_pgm(const GridMap& map) {
  std::string out = "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) +
                    "\n255\n";
  const auto& flags = map.obstacle_flags();
  out.reserve(out.size() + flags.size());
  for (auto b : flags) out.push_back(static_cast<char>(b ? 0 : 255));
  return out;
}

inline RawBitmap decode_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("not a binary PGM (P5) file");
  auto next_int = [&in]() {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string skip;
      std::getline(in, skip);
      in >> std::ws;
    }
    int v = -1;
    if (!(in >> v)) throw std::runtime_error("malformed PGM header");
    return v;
  };
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("unsupported PGM header");
  in.get();  // single whitespace byte before the raster
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (in.gcount() != static_cast<std::streamsize>(px.size()))
    throw std::runtime_error("truncated PGM raster");
  return RawBitmap(w, h, std::move(px));
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& p, const std::string& bytes) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const auto tmp = std::filesystem::path(p.string() + ".partial");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, p);
}

inline GridMap load_pgm_map(const std::filesystem::path& p, std::optional<MapType> type = {},
                            std::string source_id = {}) {
  return threshold_bitmap(decode_pgm(read_file(p)), type, std::move(source_id));
}

// --- dataset inventory -------------------------------------------------------

struct InventoryEntry {
  MapType map_type;
  std::string source_id;  ///< path relative to the type directory, without extension
  std::filesystem::path path;
};

struct DatasetInventory {
  std::vector<InventoryEntry> entries;  ///< grouped by type, lexicographic within a type
  std::map<MapType, std::size_t> counts;

  std::vector<InventoryEntry> of_type(MapType t) const {
    std::vector<InventoryEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [t](const InventoryEntry& e) { return e.map_type == t; });
    return out;
  }
  std::size_t group_count() const {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](const auto& kv) { return kv.second > 0; }));
  }
};

inline constexpr std::size_t kDefaultMapsPerType = 800;

/// Lists `<root>/<map_type>/**/*.png` for the five known types. Directories
/// with other names are ignored. `cap` limits the entries per type, keeping
/// the lexicographically first ones.
inline DatasetInventory load_dataset(const std::filesystem::path& root,
                                     std::optional<MapType> filter = std::nullopt,
                                     std::size_t cap = kDefaultMapsPerType) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw std::runtime_error("dataset root not found: " + root.string());
  DatasetInventory inv;
  for (MapType t : kAllMapTypes) {
    if (filter && *filter != t) continue;
    inv.counts[t] = 0;
    fs::path dir = root / std::string(to_string(t));
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      auto ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".png") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.size() > cap) files.resize(cap);
    for (const auto& f : files) {
      auto rel = fs::relative(f, dir);
      rel.replace_extension();
      inv.entries.push_back({t, rel.generic_string(), f});
    }
    inv.counts[t] = files.size();
  }
  return inv;
}

}  // namespace rmb
