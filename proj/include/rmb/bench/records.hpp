#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "rmb/grid.hpp"
#include "rmb/motion.hpp"
#include "rmb/planners.hpp"

namespace rmb::bench {

enum class OutputFormat : std::uint8_t { Csv, Json };

struct RunConfig {
  std::filesystem::path dataset_root;
  std::filesystem::path out_dir;
  std::optional<MapType> map_type;
  std::optional<DimensionClass> dimension;
  std::vector<Algorithm> algorithms{Algorithm::RmbAStar};
  std::vector<int> rmb_sizes{1, 2, 3, 4, 5, 6};
  double alpha = AdaptiveCostParams::kDefaultAlpha;
  std::optional<std::size_t> cap;  ///< 261x261 maps per type; the others scale by 1/2 and 1/4
  std::optional<std::filesystem::path> scenario_file;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  OutputFormat format = OutputFormat::Csv;
  CostModel cost_model = CostModel::GoalBiasedKey;
};

enum class RunStatus : std::uint8_t { Found, NotFound, Error };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Found: return "found";
    case RunStatus::NotFound: return "not_found";
    case RunStatus::Error: return "error";
  }
  return "?";
}

inline std::optional<RunStatus> parse_run_status(std::string_view s) {
  if (s == "found") return RunStatus::Found;
  if (s == "not_found") return RunStatus::NotFound;
  if (s == "error") return RunStatus::Error;
  return std::nullopt;
}

/// One (map, scenario, algorithm, n) execution, flattened for tables.
struct RunRecord {
  std::string map_id;
  MapType map_type = MapType::Forest;
  DimensionClass dimension = DimensionClass::D261x261;
  int direction_id = 0;
  Algorithm algorithm = Algorithm::AStar;
  int rmb_n = 0;  ///< 0 for the unit-step baselines
  RunStatus status = RunStatus::NotFound;
  std::uint64_t expanded_cells = 0;
  std::uint64_t inspected_cells = 0;
  double path_cost = 0.0;
  std::int64_t path_hops = 0;
  double wall_time_s = 0.0;
  bool fell_back_to_n1 = false;

  bool operator==(const RunRecord&) const = default;
};

inline RunRecord make_record(std::string map_id, MapType type, DimensionClass dim, int direction,
                             const SearchResult& r) {
  RunRecord rec;
  rec.map_id = std::move(map_id);
  rec.map_type = type;
  rec.dimension = dim;
  rec.direction_id = direction;
  rec.algorithm = r.algorithm;
  rec.rmb_n = r.rmb_n;
  rec.status = r.found() ? RunStatus::Found : RunStatus::NotFound;
  rec.expanded_cells = r.expanded_cells;
  rec.inspected_cells = r.inspected_cells;
  rec.path_cost = r.path_cost;
  rec.path_hops = path_hop_count(r.path);
  rec.wall_time_s = r.wall_time_s;
  rec.fell_back_to_n1 = r.fell_back_to_n1;
  return rec;
}

// --- CSV ---------------------------------------------------------------------

namespace csv {

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("csv: not a number: '" + std::string(s) + "'");
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("csv: not an integer: '" + std::string(s) + "'");
  return v;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
  out.push_back(std::move(cur));
  return out;
}

/// Lines of a CSV document with trailing '\r' removed and blank lines dropped.
inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace csv

inline constexpr std::string_view kRecordHeader =
    "map_id,map_type,dimension_class,direction_id,algorithm,rmb_n,status,expanded_cells,"
    "inspected_cells,path_cost,path_hops,wall_time_s,fell_back_to_n1";

inline std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& r : records) {
    out += csv::quote(r.map_id);
    out += ',' + std::string(to_string(r.map_type));
    out += ',' + std::string(to_string(r.dimension));
    out += ',' + std::to_string(r.direction_id);
    out += ',' + std::string(to_string(r.algorithm));
    out += ',' + std::to_string(r.rmb_n);
    out += ',' + std::string(to_string(r.status));
    out += ',' + std::to_string(r.expanded_cells);
    out += ',' + std::to_string(r.inspected_cells);
    out += ',' + csv::format_double(r.path_cost);
    out += ',' + std::to_string(r.path_hops);
    out += ',' + csv::format_double(r.wall_time_s);
    out += r.fell_back_to_n1 ? ",1\n" : ",0\n";
  }
  return out;
}

inline std::vector<RunRecord> records_from_csv(const std::string& text) {
  const auto lines = csv::lines_of(text);
  if (lines.empty() || lines.front() != kRecordHeader)
    throw std::invalid_argument("records csv: missing or unexpected header");
  std::vector<RunRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv::split_line(lines[i]);
    if (f.size() != 13)
      throw std::invalid_argument("records csv: line " + std::to_string(i + 1) + " has " +
                                  std::to_string(f.size()) + " fields");
    RunRecord r;
    r.map_id = f[0];
    const auto type = parse_map_type(f[1]);
    const auto dim = parse_dimension_class(f[2]);
    const auto algo = parse_algorithm(f[4]);
    const auto status = parse_run_status(f[6]);
    if (!type || !dim || !algo || !status)
      throw std::invalid_argument("records csv: bad enum value on line " + std::to_string(i + 1));
    r.map_type = *type;
    r.dimension = *dim;
    r.direction_id = csv::parse_int<int>(f[3]);
    r.algorithm = *algo;
    r.rmb_n = csv::parse_int<int>(f[5]);
    r.status = *status;
    r.expanded_cells = csv::parse_int<std::uint64_t>(f[7]);
    r.inspected_cells = csv::parse_int<std::uint64_t>(f[8]);
    r.path_cost = csv::parse_double(f[9]);
    r.path_hops = csv::parse_int<std::int64_t>(f[10]);
    r.wall_time_s = csv::parse_double(f[11]);
    r.fell_back_to_n1 = f[12] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::json to_json(const RunRecord& r) {
  return {
      {"map_id", r.map_id},
      {"map_type", to_string(r.map_type)},
      {"dimension_class", to_string(r.dimension)},
      {"direction_id", r.direction_id},
      {"algorithm", to_string(r.algorithm)},
      {"rmb_n", r.rmb_n},
      {"status", to_string(r.status)},
      {"expanded_cells", r.expanded_cells},
      {"inspected_cells", r.inspected_cells},
      {"path_cost", r.path_cost},
      {"path_hops", r.path_hops},
      {"wall_time_s", r.wall_time_s},
      {"fell_back_to_n1", r.fell_back_to_n1},
  };
}

inline RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.map_id = j.at("map_id").get<std::string>();
  const auto type = parse_map_type(j.at("map_type").get<std::string>());
  const auto dim = parse_dimension_class(j.at("dimension_class").get<std::string>());
  const auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
  const auto status = parse_run_status(j.at("status").get<std::string>());
  if (!type || !dim || !algo || !status) throw std::invalid_argument("record json: bad enum value");
  r.map_type = *type;
  r.dimension = *dim;
  r.direction_id = j.at("direction_id").get<int>();
  r.algorithm = *algo;
  r.rmb_n = j.at("rmb_n").get<int>();
  r.status = *status;
  r.expanded_cells = j.at("expanded_cells").get<std::uint64_t>();
  r.inspected_cells = j.at("inspected_cells").get<std::uint64_t>();
  r.path_cost = j.at("path_cost").get<double>();
  r.path_hops = j.at("path_hops").get<std::int64_t>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.fell_back_to_n1 = j.at("fell_back_to_n1").get<bool>();
  return r;
}

inline std::string records_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr.dump(1) + "\n";
}

inline std::vector<RunRecord> records_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_array()) throw std::invalid_argument("records json: expected an array");
  std::vector<RunRecord> out;
  for (const auto& e : j) out.push_back(record_from_json(e));
  return out;
}

/// Same records with the hardware-dependent timing zeroed, for comparisons.
inline std::vector<RunRecord> without_timing(std::vector<RunRecord> records) {
  for (auto& r : records) r.wall_time_s = 0.0;
  return records;
}

}  // namespace rmb::bench
