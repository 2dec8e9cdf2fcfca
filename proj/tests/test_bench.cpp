#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <set>

#include "rmb/bench/fixture.hpp"
#include "rmb/bench/parallel.hpp"
#include "rmb/bench/prepare.hpp"
#include "rmb/bench/records.hpp"
#include "rmb/bench/render.hpp"
#include "rmb/bench/runner.hpp"
#include "rmb/bench/tables.hpp"
#include "rmb/synth.hpp"
#include "support.hpp"

using namespace rmb;
using namespace rmb::bench;
using rmb::testing::TempDir;

namespace {

/// Inventory of synthetic tiles; the path encodes (type, index) for the decoder.
DatasetInventory synthetic_inventory(std::size_t per_type) {
  DatasetInventory inv;
  for (MapType t : kAllMapTypes) {
    for (std::size_t i = 0; i < per_type; ++i) {
      const std::string id = std::string(to_string(t)) + "_" + std::to_string(1000 + i);
      inv.entries.push_back({t, id, std::filesystem::path(std::string(to_string(t))) / (id + ".png")});
    }
    inv.counts[t] = per_type;
  }
  return inv;
}

RawBitmap decode_synthetic(const std::filesystem::path& p) {
  const auto type = parse_map_type(p.parent_path().string());
  const std::string stem = p.stem().string();
  return synth::make_tile(*type, std::stoull(stem.substr(stem.rfind('_') + 1)));
}

struct MemorySink {
  std::vector<std::pair<PreparedMapInfo, GridMap>> maps;
  void operator()(const PreparedMapInfo& i, const GridMap& m) { maps.emplace_back(i, m); }
};

RunRecord sample_record(int k) {
  RunRecord r;
  r.map_id = k % 2 ? "forest_261x261_00001" : "odd,\"id\"";
  r.map_type = k % 2 ? MapType::Forest : MapType::Mazes;
  r.dimension = DimensionClass::D462x261;
  r.direction_id = k % 4 + 1;
  r.algorithm = kAllAlgorithms[k % 5];
  r.rmb_n = r.algorithm == Algorithm::RmbAStar ? k % 6 + 1 : 0;
  r.status = static_cast<RunStatus>(k % 3);
  r.expanded_cells = 12345u + k;
  r.inspected_cells = 99999u + k;
  r.path_cost = 0.1 + 389.94 * k / 7.0;
  r.path_hops = 300 + k;
  r.wall_time_s = 1e-7 * k + 0.3;
  r.fell_back_to_n1 = k % 2;
  return r;
}

/// A prepared cache on disk built from synthetic tiles.
struct CacheFixture {
  TempDir dir{"cache"};
  PreparedCache cache;
  explicit CacheFixture(std::size_t tiles_per_type) {
    prepare_to_directory(synthetic_inventory(tiles_per_type), dir.path(), std::nullopt, std::nullopt, 2,
                         decode_synthetic);
    cache = load_prepared(dir.path());
  }
};

}  // namespace

TEST(Records, CsvRoundTrip) {
  std::vector<RunRecord> recs;
  for (int k = 0; k < 40; ++k) recs.push_back(sample_record(k));
  const std::string text = records_to_csv(recs);
  EXPECT_EQ(text.substr(0, text.find('\n')), kRecordHeader);
  EXPECT_EQ(records_from_csv(text), recs);
}

TEST(Records, JsonRoundTrip) {
  std::vector<RunRecord> recs;
  for (int k = 0; k < 40; ++k) recs.push_back(sample_record(k));
  EXPECT_EQ(records_from_json(records_to_json(recs)), recs);
}

TEST(Records, MalformedCsvRejected) {
  EXPECT_THROW(records_from_csv("nope\n"), std::invalid_argument);
  const std::string h = std::string(kRecordHeader) + "\n";
  EXPECT_THROW(records_from_csv(h + "a,forest,261x261,1,astar,0,found,1,1,1.0,1\n"), std::invalid_argument);
  EXPECT_THROW(records_from_csv(h + "a,forest,261x261,1,astar,0,found,x,1,1.0,1,0.1,0\n"),
               std::invalid_argument);
  EXPECT_THROW(records_from_csv(h + "a,woods,261x261,1,astar,0,found,1,1,1.0,1,0.1,0\n"),
               std::invalid_argument);
  EXPECT_THROW(records_from_csv(h + "\"a,forest\n"), std::invalid_argument);
}

TEST(Csv, QuotingAndDoubles) {
  EXPECT_EQ(csv::split_line("a,\"b,c\",\"d\"\"e\","), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  for (double v : {0.0, 1.0 / 3, 389.94, 1e-300, 123456789.123456789})
    EXPECT_EQ(csv::parse_double(csv::format_double(v)), v);
}

TEST(Parallel, RunsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  EXPECT_NO_THROW(parallel_for(0, 4, [](std::size_t) { FAIL(); }));
}

TEST(Prepare, CapTwentyGivesProportionalCounts) {
  MemorySink sink;
  const auto s = prepare_dataset(synthetic_inventory(30), 20, std::nullopt, 4, decode_synthetic, std::ref(sink));
  for (MapType t : kAllMapTypes) {
    EXPECT_EQ(s.count(t, DimensionClass::D261x261), 20u);
    EXPECT_EQ(s.count(t, DimensionClass::D462x261), 10u);
    EXPECT_EQ(s.count(t, DimensionClass::D462x462), 5u);
  }
  EXPECT_EQ(sink.maps.size(), 175u);
  for (const auto& [info, map] : sink.maps) {
    EXPECT_EQ(map.dimension_class(), info.dimension);
    EXPECT_EQ(map.map_type(), info.map_type);
    EXPECT_EQ(info.sources.size(), tile_count(layout_for(info.dimension)));
  }
}

TEST(Prepare, ConsecutiveTilesAreGrouped) {
  MemorySink sink;
  prepare_dataset(synthetic_inventory(4), std::nullopt, std::nullopt, 1, decode_synthetic, std::ref(sink));
  const auto& [info, map] = sink.maps.back();
  EXPECT_EQ(info.id, "mazes_462x462_00000");
  EXPECT_EQ(info.file, "462x462/mazes/mazes_462x462_00000.pgm");
  EXPECT_EQ(info.sources, (std::vector<std::string>{"mazes_1000", "mazes_1001", "mazes_1002", "mazes_1003"}));
  for (const auto& [i, m] : sink.maps)
    if (i.id == "forest_462x261_00001") {
      EXPECT_EQ(i.sources, (std::vector<std::string>{"forest_1002", "forest_1003"}));
    }
}

TEST(Prepare, SeededSampleIsReproducibleAndOrdered) {
  auto ids = [](std::optional<std::uint64_t> seed) {
    return select_tiles(synthetic_inventory(50).of_type(MapType::Forest), 10, seed);
  };
  const auto a = ids(42), b = ids(42), c = ids(43), plain = ids(std::nullopt);
  ASSERT_EQ(a.size(), 10u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].source_id, b[i].source_id);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs |= a[i].source_id != c[i].source_id;
  EXPECT_TRUE(differs);
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_LT(a[i - 1].source_id, a[i].source_id);
  EXPECT_EQ(plain.back().source_id, "forest_1009");
}

TEST(Prepare, BadTilesSkippedAndReported) {
  auto inv = synthetic_inventory(3);
  inv.entries.insert(inv.entries.begin(), {MapType::AlternatingGaps, "broken", "alternating_gaps/broken.png"});
  MemorySink sink;
  const auto s = prepare_dataset(
      inv, std::nullopt, std::nullopt, 2,
      [](const std::filesystem::path& p) {
        if (p.stem() == "broken") return RawBitmap(50, 50);
        return decode_synthetic(p);
      },
      std::ref(sink));
  ASSERT_EQ(s.skipped.size(), 1u);
  EXPECT_NE(s.skipped[0].reason.find("201x201"), std::string::npos);
  EXPECT_EQ(s.count(MapType::AlternatingGaps, DimensionClass::D261x261), 3u);
}

TEST(Prepare, OnDiskCacheIsIdempotent) {
  TempDir dir("prep");
  const auto inv = synthetic_inventory(4);
  prepare_to_directory(inv, dir.path(), std::nullopt, std::nullopt, 2, decode_synthetic);
  std::map<std::string, std::string> first;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path()))
    if (e.is_regular_file()) first[e.path().string()] = read_file(e.path());
  EXPECT_EQ(first.size(), 5u * 7 + 1);

  FileSink sink(dir.path());
  prepare_dataset(inv, std::nullopt, std::nullopt, 1, decode_synthetic, std::ref(sink));
  EXPECT_EQ(sink.written(), 0u);
  EXPECT_EQ(sink.unchanged(), 35u);

  prepare_to_directory(inv, dir.path(), std::nullopt, std::nullopt, 3, decode_synthetic);
  std::map<std::string, std::string> second;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path()))
    if (e.is_regular_file()) second[e.path().string()] = read_file(e.path());
  EXPECT_EQ(first, second);
}

TEST(Prepare, FailureLeavesNoPartialFiles) {
  TempDir dir("prep");
  auto failing = [](const std::filesystem::path&) -> RawBitmap { throw std::logic_error("decoder bug"); };
  // Decoder errors are per-tile skips.
  const auto s = prepare_to_directory(synthetic_inventory(1), dir.path(), std::nullopt, std::nullopt, 1, failing);
  EXPECT_EQ(s.maps.size(), 0u);
  EXPECT_EQ(s.skipped.size(), 5u);
  // A file where a class directory belongs makes the write itself fail.
  std::filesystem::remove(dir.path() / kManifestName);
  std::ofstream(dir.path() / "261x261") << "x";
  std::ofstream(dir.path() / "stale.pgm.partial") << "x";
  EXPECT_ANY_THROW(prepare_to_directory(synthetic_inventory(1), dir.path(), std::nullopt, std::nullopt, 1,
                                        decode_synthetic));
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "stale.pgm.partial"));
  EXPECT_FALSE(std::filesystem::exists(dir.path() / kManifestName));
}

TEST(Prepare, ManifestRoundTrip) {
  CacheFixture f(2);
  EXPECT_EQ(f.cache.maps.size(), 5u * 3);
  for (const auto& m : f.cache.maps) {
    const GridMap g = f.cache.load(m);
    EXPECT_EQ(g.dimension_class(), m.dimension);
  }
  EXPECT_THROW(load_prepared(f.dir.path() / "nothing"), std::runtime_error);
}

TEST(Runner, RoundRobinDirections) {
  EXPECT_EQ(round_robin_direction(0), 1);
  EXPECT_EQ(round_robin_direction(3), 4);
  EXPECT_EQ(round_robin_direction(4), 1);
  CacheFixture f(8);
  RunConfig cfg;
  cfg.map_type = MapType::Forest;
  cfg.dimension = DimensionClass::D261x261;
  const auto plan = plan_sweep(f.cache, cfg);
  ASSERT_EQ(plan.size(), 8u);
  for (std::size_t i = 0; i < plan.size(); ++i) EXPECT_EQ(plan[i].direction_id, static_cast<int>(i % 4) + 1);
}

TEST(Runner, CapScalesPerClass) {
  CacheFixture f(8);
  RunConfig cfg;
  cfg.cap = 4;
  std::map<DimensionClass, int> n;
  for (const auto& it : plan_sweep(f.cache, cfg)) n[it.info->dimension]++;
  EXPECT_EQ(n[DimensionClass::D261x261], 20);
  EXPECT_EQ(n[DimensionClass::D462x261], 10);
  EXPECT_EQ(n[DimensionClass::D462x462], 5);
  cfg.seed = 5;
  const auto a = plan_sweep(f.cache, cfg), b = plan_sweep(f.cache, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].info, b[i].info);
}

TEST(Runner, Cardinality) {
  CacheFixture f(2);
  RunConfig cfg;
  cfg.map_type = MapType::Forest;
  cfg.dimension = DimensionClass::D261x261;
  cfg.algorithms = {Algorithm::AStar, Algorithm::Bfs};
  EXPECT_EQ(run_sweep(f.cache, cfg).size(), 4u);
  cfg.algorithms = {Algorithm::RmbAStar, Algorithm::Dijkstra};
  cfg.rmb_sizes = {1, 3};
  EXPECT_EQ(run_sweep(f.cache, cfg).size(), 6u);
}

TEST(Runner, BlockedEndpointsRecordedAsErrors) {
  const GridMap m = threshold_bitmap(add_borders(RawBitmap(201, 201, std::uint8_t{255})));
  ScenarioOverrides ov;
  ov.set(DimensionClass::D261x261, 1, {0, 0}, {100, 100});
  const Scenario sc = generate_scenarios(DimensionClass::D261x261, ov)[0];
  RunConfig cfg;
  cfg.algorithms = {Algorithm::AStar, Algorithm::RmbAStar};
  cfg.rmb_sizes = {2};
  const auto recs = run_map(m, "x", MapType::Forest, sc, cfg);
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) EXPECT_EQ(r.status, RunStatus::Error);
  EXPECT_EQ(recs[1].rmb_n, 2);
}

TEST(Runner, ParallelMatchesSerialAndRepeats) {
  CacheFixture f(4);
  RunConfig cfg;
  cfg.algorithms = {Algorithm::RmbAStar, Algorithm::AStar, Algorithm::Dfs};
  cfg.rmb_sizes = {1, 4};
  cfg.jobs = 1;
  const auto serial = without_timing(run_sweep(f.cache, cfg));
  cfg.jobs = 4;
  const auto parallel = without_timing(run_sweep(f.cache, cfg));
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(records_to_csv(serial), records_to_csv(without_timing(run_sweep(f.cache, cfg))));
}

TEST(Tables, SweepHasOneCellPerGroupAndSize) {
  CacheFixture f(4);
  RunConfig cfg;
  cfg.jobs = 4;
  const auto recs = run_sweep(f.cache, cfg);
  const SweepTable t = sweep_from_summary(summarize(recs));
  EXPECT_EQ(t.groups.size(), 15u);
  std::size_t cells = 0;
  for (const auto& [k, row] : t.groups) cells += row.size();
  EXPECT_EQ(cells, 15u * 6);
  const std::string csv_text = sweep_to_csv(t);
  EXPECT_EQ(csv::lines_of(csv_text).size(), 1 + 15u * 3);
  const SweepTable back = sweep_from_csv(csv_text);
  EXPECT_EQ(back.sizes, t.sizes);
  for (const auto& [k, row] : t.groups)
    for (std::size_t j = 0; j < row.size(); ++j) {
      ASSERT_EQ(back.groups.at(k)[j].has_value(), row[j].has_value());
      if (row[j]) { EXPECT_EQ(back.groups.at(k)[j]->path_cost, row[j]->path_cost); }
    }
}

TEST(Tables, SweepCsvBlankCellsStayMissing) {
  const std::string text =
      "map_type,dimension_class,parameter,n=1,n=2\n"
      "forest,261x261,search_cells,10,\n"
      "forest,261x261,path_cost,5,6\n"
      "forest,261x261,time_s,1,2\n";
  const SweepTable t = sweep_from_csv(text);
  EXPECT_FALSE(t.complete({MapType::Forest, DimensionClass::D261x261}));
  EXPECT_THROW(sweep_from_csv("map_type,dimension_class,parameter,x=1\n"), std::invalid_argument);
  EXPECT_THROW(sweep_from_csv(text + "forest,261x261,bogus,1,2\n"), std::invalid_argument);
}

TEST(Tables, SummaryCountsFailuresSeparately) {
  std::vector<RunRecord> recs(3, sample_record(0));
  for (auto& r : recs) r.algorithm = Algorithm::AStar, r.rmb_n = 0;
  recs[0].status = RunStatus::Found;
  recs[1].status = RunStatus::NotFound;
  recs[2].status = RunStatus::Error;
  const auto s = summarize(recs);
  ASSERT_EQ(s.size(), 1u);
  const auto& c = s.begin()->second;
  EXPECT_EQ(c.acc.found, 1u);
  EXPECT_EQ(c.acc.not_found, 1u);
  EXPECT_EQ(c.errors, 1u);
}

TEST(Comparison, FromRecords) {
  std::vector<RunRecord> recs;
  auto add = [&](Algorithm a, int n, DimensionClass d, double cells, double cost) {
    RunRecord r;
    r.algorithm = a;
    r.rmb_n = n;
    r.dimension = d;
    r.status = RunStatus::Found;
    r.expanded_cells = static_cast<std::uint64_t>(cells);
    r.path_cost = cost;
    r.wall_time_s = 1;
    recs.push_back(r);
  };
  add(Algorithm::AStar, 0, DimensionClass::D261x261, 100, 10);
  add(Algorithm::AStar, 0, DimensionClass::D462x462, 300, 30);
  add(Algorithm::RmbAStar, 3, DimensionClass::D261x261, 10, 11);
  add(Algorithm::RmbAStar, 3, DimensionClass::D462x462, 30, 33);
  add(Algorithm::RmbAStar, 1, DimensionClass::D261x261, 99999, 1);
  const Comparison c = comparison_from_records(recs, 3);
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.rows[0].algorithm, "astar");
  EXPECT_EQ(c.rows[1].average().search_cells, 20);
  const auto j = comparison_metrics(c);
  EXPECT_NEAR(j["reduction_vs_astar_percent"]["rmb-astar"]["search_cells"].get<double>(), 90.0, 1e-12);
  EXPECT_NEAR(j["reduction_vs_astar_percent"]["rmb-astar"]["path_cost"].get<double>(), -10.0, 1e-12);
  EXPECT_NEAR(j["performance_percent"]["astar"]["path_cost"].get<double>(), 20.0 / 4500 * 100, 1e-12);
  EXPECT_NE(comparison_to_csv(c).find("rmb-astar,average,20,22,1\n"), std::string::npos);
}

TEST(Fixture, ComparisonIsSelfConsistent) {
  const auto ref = load_reference_tables(RMB_FIXTURE_DIR "/reference_tables.json");
  EXPECT_TRUE(check_comparison_fixture(ref).empty());
  EXPECT_EQ(ref.comparison.rows.size(), 5u);
  EXPECT_EQ(ref.sweep.groups.size(), 15u);
  ASSERT_EQ(ref.anomalous.size(), 1u);
  EXPECT_EQ(ref.anomalous[0], (GroupKey{MapType::BugtrapForest, DimensionClass::D261x261}));
}

TEST(Fixture, TamperedValuesAreReported) {
  auto j = nlohmann::json::parse(read_file(RMB_FIXTURE_DIR "/reference_tables.json"));
  j["algorithm_comparison_averages"]["astar"]["search_cells"] = 40000.0;
  j["expected_rmb_n3_vs_astar_reduction_percent"]["time_s"] = 90.0;
  const auto bad = check_comparison_fixture(parse_reference_tables(j));
  EXPECT_EQ(bad.size(), 2u);
  j["schema_version"] = 99;
  EXPECT_THROW(parse_reference_tables(j), std::invalid_argument);
}

// --- rendering ---------------------------------------------------------------

TEST(Render, GoldenFiveByFive) {
  const GridMap m = GridMap::empty(5, 5);
  const Scenario sc{{0, 0}, {4, 2}, 0};
  SearchResult r;
  r.status = SearchStatus::Found;
  r.path = {{0, 0}, {2, 2}, {4, 2}};
  r.expansions = {{0, 0}, {2, 2}};
  const std::string svg = render_svg(m, sc, r);
  EXPECT_EQ(svg, read_file(RMB_GOLDEN_DIR "/render_5x5.svg"));
  EXPECT_EQ(render_svg(m, sc, r), svg);
}

TEST(Render, NotFoundHasNoPath) {
  const GridMap m = GridMap::from_rows({"..#", ".#.", "#.."});
  SearchResult r;
  r.expansions = {{0, 0}, {1, 0}, {0, 1}};
  const std::string svg = render_svg(m, {{0, 0}, {2, 2}, 0}, r);
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("#00ffff"), std::string::npos);
  EXPECT_NE(svg.find("#00b000"), std::string::npos);
  EXPECT_NE(svg.find("#0000ff"), std::string::npos);
}

TEST(Render, PreparedMapShowsBlackFrame) {
  const GridMap m = prepare_map({RawBitmap(201, 201, std::uint8_t{255})}, DimensionClass::D261x261);
  const Scenario sc = generate_scenarios(DimensionClass::D261x261)[0];
  const std::string svg = render_svg(m, sc, rmb_astar(m, sc, 3));
  for (int y = 0; y < 15; ++y)
    EXPECT_NE(svg.find("<rect x=\"0\" y=\"" + std::to_string(y) + "\" width=\"261\" height=\"1\"/>"),
              std::string::npos);
  EXPECT_NE(svg.find("<rect x=\"0\" y=\"15\" width=\"15\" height=\"1\"/>"), std::string::npos);
  EXPECT_NE(svg.find("<rect x=\"246\" y=\"15\" width=\"15\" height=\"1\"/>"), std::string::npos);
}

TEST(Render, MismatchedResultRejected) {
  const GridMap m = GridMap::empty(5, 5);
  SearchResult r;
  r.status = SearchStatus::Found;
  r.path = {{0, 0}, {6, 6}};
  EXPECT_THROW(render_svg(m, {{0, 0}, {4, 4}, 0}, r), std::invalid_argument);
  EXPECT_THROW(render_svg(m, {{0, 0}, {9, 4}, 0}, SearchResult{}), std::invalid_argument);
  EXPECT_THROW(render_svg(m, {{0, 0}, {4, 4}, 0}, SearchResult{}, {0}), std::invalid_argument);
}
