#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rmb/bench/parallel.hpp"
#include "rmb/grid.hpp"
#include "rmb/ingest.hpp"

namespace rmb::bench {

inline constexpr int kTileEdge = 201;
inline constexpr int kManifestVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";

/// One prepared map in the cache.
struct PreparedMapInfo {
  std::string id;
  MapType map_type = MapType::Forest;
  DimensionClass dimension = DimensionClass::D261x261;
  std::string file;                  ///< relative to the cache root
  std::vector<std::string> sources;  ///< tile source ids, stitch order

  bool operator==(const PreparedMapInfo&) const = default;
};

struct SkippedTile {
  std::string path;
  std::string reason;
};

struct PrepareSummary {
  std::vector<PreparedMapInfo> maps;
  std::vector<SkippedTile> skipped;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;

  std::size_t count(MapType t, DimensionClass d) const {
    return static_cast<std::size_t>(std::count_if(maps.begin(), maps.end(), [&](const auto& m) {
      return m.map_type == t && m.dimension == d;
    }));
  }
};

/// Number of maps prepared per class from `tiles` usable tiles: one map per
/// tile, one per consecutive pair, one per consecutive group of four.
inline std::size_t prepared_count(DimensionClass d, std::size_t tiles) {
  return tiles / tile_count(layout_for(d));
}

inline std::string prepared_id(MapType t, DimensionClass d, std::size_t k) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%05zu", k);
  return std::string(to_string(t)) + "_" + std::string(to_string(d)) + "_" + buf;
}

inline std::string prepared_file(MapType t, DimensionClass d, std::size_t k) {
  return std::string(to_string(d)) + "/" + std::string(to_string(t)) + "/" + prepared_id(t, d, k) +
         ".pgm";
}

/// Picks the tiles of one type. Without a seed the first `cap` entries in
/// inventory order are kept; with a seed a seeded sample of `cap` entries is
/// drawn and then put back in inventory order.
inline std::vector<InventoryEntry> select_tiles(std::vector<InventoryEntry> entries,
                                                std::optional<std::size_t> cap,
                                                std::optional<std::uint64_t> seed) {
  const std::size_t keep = std::min(entries.size(), cap.value_or(kDefaultMapsPerType));
  if (seed && keep < entries.size()) {
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(*seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(keep);
    std::sort(order.begin(), order.end());
    std::vector<InventoryEntry> out;
    for (std::size_t i : order) out.push_back(entries[i]);
    return out;
  }
  entries.resize(keep);
  return entries;
}

/// Decodes, stitches, borders and binarizes the inventory into the three
/// prepared classes. `decode(path) -> RawBitmap` reads one tile; `sink(info,
/// map)` receives every prepared map in a fixed order. Tiles that fail to
/// decode or are not 201x201 are skipped and reported.
template <typename Decode, typename Sink>
PrepareSummary prepare_dataset(const DatasetInventory& inventory, std::optional<std::size_t> cap,
                               std::optional<std::uint64_t> seed, unsigned jobs, Decode&& decode,
                               Sink&& sink,
                               const std::vector<DimensionClass>& dims = {
                                   std::begin(kPreparedDimensions), std::end(kPreparedDimensions)}) {
  PrepareSummary summary;
  summary.seed = seed;
  summary.cap = cap;
  for (MapType t : kAllMapTypes) {
    const auto chosen = select_tiles(inventory.of_type(t), cap, seed);
    if (chosen.empty()) continue;
    std::vector<std::optional<RawBitmap>> decoded(chosen.size());
    std::vector<std::string> errors(chosen.size());
    parallel_for(chosen.size(), jobs, [&](std::size_t i) {
      try {
        RawBitmap img = decode(chosen[i].path);
        if (img.width != kTileEdge || img.height != kTileEdge)
          errors[i] = "tile is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                      ", expected 201x201";
        else
          decoded[i] = std::move(img);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    std::vector<const RawBitmap*> tiles;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (decoded[i]) {
        tiles.push_back(&*decoded[i]);
        ids.push_back(chosen[i].source_id);
      } else {
        summary.skipped.push_back({chosen[i].path.generic_string(), errors[i]});
      }
    }
    for (DimensionClass d : dims) {
      const std::size_t per_map = tile_count(layout_for(d));
      const std::size_t count = prepared_count(d, tiles.size());
      for (std::size_t k = 0; k < count; ++k) {
        std::vector<RawBitmap> group;
        PreparedMapInfo info{prepared_id(t, d, k), t, d, prepared_file(t, d, k), {}};
        for (std::size_t j = 0; j < per_map; ++j) {
          group.push_back(*tiles[k * per_map + j]);
          info.sources.push_back(ids[k * per_map + j]);
        }
        const GridMap map = prepare_map(group, d, t, info.id);
        sink(info, map);
        summary.maps.push_back(std::move(info));
      }
    }
  }
  return summary;
}

inline nlohmann::json manifest_json(const PrepareSummary& s) {
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : s.maps)
    maps.push_back({{"id", m.id},
                    {"map_type", to_string(m.map_type)},
                    {"dimension_class", to_string(m.dimension)},
                    {"file", m.file},
                    {"sources", m.sources}});
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& k : s.skipped) skipped.push_back({{"path", k.path}, {"reason", k.reason}});
  nlohmann::json j;
  j["version"] = kManifestVersion;
  j["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  j["cap"] = s.cap ? nlohmann::json(*s.cap) : nlohmann::json(nullptr);
  j["maps"] = std::move(maps);
  j["skipped"] = std::move(skipped);
  return j;
}

/// Writes each map as a canonical PGM under `root`. Files whose bytes are
/// already correct are left alone.
class FileSink {
 public:
  explicit FileSink(std::filesystem::path root) : root_(std::move(root)) {}

  void operator()(const PreparedMapInfo& info, const GridMap& map) {
    const auto path = root_ / info.file;
    const std::string bytes = encode_pgm(map);
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec) &&
        std::filesystem::file_size(path, ec) == bytes.size() && read_file(path) == bytes) {
      ++unchanged_;
      return;
    }
    write_file_atomic(path, bytes);
    ++written_;
  }

  std::size_t written() const noexcept { return written_; }
  std::size_t unchanged() const noexcept { return unchanged_; }

 private:
  std::filesystem::path root_;
  std::size_t written_ = 0;
  std::size_t unchanged_ = 0;
};

/// Removes leftover `*.partial` files below `root`.
inline void remove_partials(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return;
  std::vector<fs::path> doomed;
  for (const auto& e : fs::recursive_directory_iterator(root, ec))
    if (e.is_regular_file() && e.path().extension() == ".partial") doomed.push_back(e.path());
  for (const auto& p : doomed) fs::remove(p, ec);
}

/// Full prepare step onto disk: PGM files plus manifest.json (written last).
/// On failure, temporary files are removed before the error propagates.
template <typename Decode>
PrepareSummary prepare_to_directory(const DatasetInventory& inventory,
                                    const std::filesystem::path& out_dir,
                                    std::optional<std::size_t> cap,
                                    std::optional<std::uint64_t> seed, unsigned jobs,
                                    Decode&& decode) {
  try {
    FileSink sink(out_dir);
    PrepareSummary s = prepare_dataset(inventory, cap, seed, jobs, decode, sink);
    write_file_atomic(out_dir / kManifestName, manifest_json(s).dump(1) + "\n");
    return s;
  } catch (...) {
    remove_partials(out_dir);
    throw;
  }
}

/// A prepared cache as described by its manifest.
struct PreparedCache {
  std::filesystem::path root;
  std::vector<PreparedMapInfo> maps;

  GridMap load(const PreparedMapInfo& m) const {
    GridMap map = load_pgm_map(root / m.file, m.map_type, m.id);
    if (map.dimension_class() != m.dimension)
      throw std::runtime_error("prepared map " + m.id + " has unexpected dimensions");
    return map;
  }
};

inline PreparedCache load_prepared(const std::filesystem::path& root) {
  const auto manifest = root / kManifestName;
  if (!std::filesystem::is_regular_file(manifest))
    throw std::runtime_error("no prepared cache at " + root.string() + " (run prepare first)");
  const auto j = nlohmann::json::parse(read_file(manifest));
  if (j.value("version", 0) != kManifestVersion)
    throw std::runtime_error("unsupported manifest version in " + manifest.string());
  PreparedCache cache{root, {}};
  for (const auto& e : j.at("maps")) {
    const auto t = parse_map_type(e.at("map_type").get<std::string>());
    const auto d = parse_dimension_class(e.at("dimension_class").get<std::string>());
    if (!t || !d) throw std::runtime_error("manifest: bad map_type or dimension_class");
    cache.maps.push_back({e.at("id").get<std::string>(), *t, *d, e.at("file").get<std::string>(),
                          e.at("sources").get<std::vector<std::string>>()});
  }
  return cache;
}

}  // namespace rmb::bench
