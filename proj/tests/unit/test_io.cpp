// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "wdmtwin/csv.hpp"
#include "wdmtwin/topology.hpp"

using namespace wdmtwin;

TEST_CASE("default scenario topology resolves to the documented paths") {
  const Topology t = default_scenario_topology();

  const auto train = resolve_path(t, "train");
  REQUIRE(train.size() == 2);
  CHECK(train[0].amplified);
  CHECK_FALSE(train[1].amplified);

  const auto short_hops = resolve_path(t, "short");
  const auto long_hops = resolve_path(t, "long");
  auto total = [](const std::vector<ResolvedHop>& hops) {
    double km = 0.0;
    int amps = 0;
    for (const auto& h : hops) {
      km += h.span.length_km;
      amps += h.amplified ? 1 : 0;
    }
    return std::pair<double, int>(km, amps);
  };
  CHECK(total(short_hops).first == doctest::Approx(439.4).epsilon(1e-12));
  CHECK(total(short_hops).second == 4);
  CHECK(total(long_hops).first == doctest::Approx(592.4).epsilon(1e-12));
  CHECK(total(long_hops).second == 6);

  // the long path consumes every amplifier exactly once
  std::vector<std::size_t> devices;
  for (const auto& h : long_hops) {
    if (h.amplified) devices.push_back(h.edfa_index);
  }
  std::sort(devices.begin(), devices.end());
  CHECK(devices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("topology json round trip") {
  const Topology t = default_scenario_topology();
  const nlohmann::json j = topology_to_json(t);
  const Topology back = topology_from_json(j);
  CHECK(back.grid.fingerprint == t.grid.fingerprint);
  CHECK(back.edges.size() == t.edges.size());
  CHECK(back.paths == t.paths);
  CHECK(back.sim.master_seed == t.sim.master_seed);
  CHECK(back.threshold_db == t.threshold_db);

  const auto dir = std::filesystem::temp_directory_path() / "wdmtwin_io_test";
  std::filesystem::create_directories(dir);
  save_topology(t, dir / "topo.json");
  const Topology loaded = load_topology(dir / "topo.json");
  CHECK(loaded.grid.fingerprint == t.grid.fingerprint);
  CHECK(loaded.base_dir == dir);
  std::filesystem::remove_all(dir);
}

TEST_CASE("schema errors carry the offending field path") {
  nlohmann::json j = topology_to_json(default_scenario_topology());

  SUBCASE("missing grid field") {
    j["grid"].erase("n_ch");
    CHECK_THROWS_WITH_AS((void)topology_from_json(j),
                         doctest::Contains("grid.n_ch"),
                         std::invalid_argument);
  }
  SUBCASE("unknown node in an edge") {
    j["edges"][0]["a"] = "XXX";
    CHECK_THROWS_WITH_AS((void)topology_from_json(j),
                         doctest::Contains("edges[0]"),
                         std::invalid_argument);
  }
  SUBCASE("negative length") {
    j["edges"][1]["length_km"] = -5.0;
    CHECK_THROWS_WITH_AS((void)topology_from_json(j),
                         doctest::Contains("edges[1]"),
                         std::invalid_argument);
  }
  SUBCASE("non-contiguous path") {
    j["paths"]["broken"] = {"STN-RDG*", "PGT-RDG*"};
    CHECK_THROWS_WITH_AS((void)topology_from_json(j),
                         doctest::Contains("paths.broken[1]"),
                         std::invalid_argument);
  }
  SUBCASE("more amp visits than devices at a node") {
    j["paths"]["greedy"] = {"STN-RDG*", "RDG-STN*"};
    CHECK_THROWS_WITH_AS((void)topology_from_json(j),
                         doctest::Contains("STN"), std::invalid_argument);
  }
  SUBCASE("unknown edge in a path") {
    j["paths"]["nowhere"] = {"STN-FRX"};
    CHECK_THROWS_AS((void)topology_from_json(j), std::invalid_argument);
  }
}

TEST_CASE("unknown path lookup") {
  const Topology t = default_scenario_topology();
  CHECK_THROWS_WITH_AS((void)resolve_path(t, "nope"),
                       doctest::Contains("unknown path"),
                       std::invalid_argument);
}

TEST_CASE("csv formatting contract") {
  CHECK(format_fixed(1.18758762624) == "1.187588");
  CHECK(format_fixed(-33.0) == "-33.000000");
  CHECK(format_fixed(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(parse_double("-inf") == -std::numeric_limits<double>::infinity());
  CHECK(parse_double("1.187588") == doctest::Approx(1.187588));
  CHECK_THROWS_AS(parse_double("1.2x"), std::invalid_argument);

  const auto dir = std::filesystem::temp_directory_path() / "wdmtwin_csv_test";
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "t.csv");
    write_standard_comments(w, 0xABCD, 0x1234);
    w.header({"a", "b"});
    w.row({"1", format_fixed(2.5)});
  }
  const CsvTable t = read_csv(dir / "t.csv");
  REQUIRE(t.comments.size() == 3);
  CHECK(t.comments[1].find("config_hash=000000000000abcd") !=
        std::string::npos);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][1] == "2.500000");
  // '\n' line endings, no '\r'
  std::ifstream in(dir / "t.csv", std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(all.find('\r') == std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_twin_path shares one model across all amplifier sites") {
  const Topology t = default_scenario_topology();
  auto model =
      std::make_shared<const EdfaTwinModel>(init_twin_model(t.grid, 1));
  const LinkPath path = build_twin_path(t, "long", model);
  int amps = 0;
  for (const auto& el : path.elements) {
    if (std::holds_alternative<AmpElement>(el)) {
      CHECK(std::get<AmpElement>(el).model.get() == model.get());
      ++amps;
    }
  }
  CHECK(amps == 6);
  CHECK(path.elements.size() == 8 + 6);
}
