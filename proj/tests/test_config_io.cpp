#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "wkg/checkpoint.hpp"
#include "wkg/config.hpp"
#include "wkg/series_io.hpp"

using namespace wkg;

TEST_CASE("minimal config applies documented defaults") {
  RunConfig c = parse_config("[model]\ntype = wkg\n");
  CHECK(c.c == 1.0);
  CHECK(c.spacing == 0.03);
  CHECK(c.cfl == 0.4);
  CHECK(c.mode == "cartesian");
  CHECK(c.amplitude == 1e-3);
  CHECK(c.norm_order == 2);
}

TEST_CASE("out-of-range values name the key and line") {
  try {
    parse_config("[model]\ntype = fr\nkappa = -0.1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("kappa") != std::string::npos);
  }
}

TEST_CASE("unknown keys, sections and duplicates are rejected") {
  CHECK_THROWS_AS(parse_config("[model]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nosuch]\nc = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("c = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nc = 1\nc = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nc equals 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nc = abc\n"), ConfigError);
}

TEST_CASE("serialize and reparse round trip") {
  RunConfig c = parse_config(
      "[model]\ntype = fr\nkappa = 0.025\nc = 1.5\n"
      "[grid]\nspacing = 0.01\nr_max = 12\n"
      "[run]\nmode = hyperboloidal\nstart = 2\nend = 10\n");
  std::string text = serialize_config(c);
  RunConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("derived objects from a config") {
  RunConfig c = parse_config("[grid]\nspacing = 0.1\nr_max = 4\n");
  RadialGrid g = c.make_grid();
  CHECK(g.n == 41);
  CHECK(g.r_max() == doctest::Approx(4.0));
  ModelSystem m = c.make_model();
  CHECK(m.unknowns() == 2);
  SchemeConfig s = c.make_scheme();
  CHECK(s.sponge_width == doctest::Approx(0.2));  // auto: 5% of r_max
}

TEST_CASE("series emission: golden bytes and lossless round trip") {
  std::vector<SliceRecord> recs(2);
  recs[0].label = 2.0;
  recs[0].sup = {0.5, 0.25};
  recs[0].energy = {1.0, 2.0, 3.0};
  recs[1].label = 2.5;
  recs[1].sup = {1.0 / 3.0, 0.1};
  recs[1].energy = {0.1, 0.2, 0.30000000000000004};

  std::string text = format_series(recs);
  CHECK(text ==
        "s,sup_u,sup_phi,E0,E1,E2\n"
        "2,0.5,0.25,1,2,3\n"
        "2.5,0.33333333333333331,0.10000000000000001,0.10000000000000001,"
        "0.20000000000000001,0.30000000000000004\n");

  // Determinism: identical inputs produce identical bytes.
  CHECK(format_series(recs) == text);

  // 17-significant-digit round trip.
  std::vector<SliceRecord> back = parse_series(text);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].label == recs[i].label);
    CHECK(back[i].sup[0] == recs[i].sup[0]);
    CHECK(back[i].sup[1] == recs[i].sup[1]);
    for (int k = 0; k < 3; ++k) CHECK(back[i].energy[k] == recs[i].energy[k]);
  }
}

TEST_CASE("checkpoint round trip is bit-exact") {
  namespace fs = std::filesystem;
  EvolutionState st;
  st.time = 2.125;
  st.axis = TimeAxis::Hyperboloidal;
  st.grid = RadialGrid::uniform(0.25, 9);
  st.fields.resize(2);
  std::mt19937_64 rng(3);
  for (auto& fp : st.fields) {
    fp.f.resize(st.grid.n);
    fp.ft.resize(st.grid.n);
    for (int i = 0; i < st.grid.n; ++i) {
      fp.f[i] = std::ldexp(double(rng() % (1ull << 52)), -40);
      fp.ft[i] = -std::ldexp(double(rng() % (1ull << 52)), -45);
    }
  }
  fs::path p1 = fs::temp_directory_path() / "wkg_cp_a.bin";
  fs::path p2 = fs::temp_directory_path() / "wkg_cp_b.bin";
  write_checkpoint({"wkg", st}, p1.string());
  Checkpoint back = read_checkpoint(p1.string());
  CHECK(back.model_tag == "wkg");
  CHECK(back.state.time == st.time);
  CHECK(back.state.axis == TimeAxis::Hyperboloidal);
  write_checkpoint(back, p2.string());

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1).size() > 0);

  std::string info = describe_checkpoint(p1.string());
  CHECK(info.find("hyperboloidal") != std::string::npos);
  CHECK(info.find("9 nodes") != std::string::npos);
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("manifest carries outcome and the full config echo") {
  RunManifest m;
  m.config = parse_config("[model]\ntype = wkg\n");
  m.code_version = kCodeVersion;
  m.started_at = "2026-01-01T00:00:00Z";
  m.finished_at = "2026-01-01T00:00:01Z";
  m.outcome = "completed";
  m.summary = {"final sup_u 1e-3"};
  std::string text = format_manifest(m);
  CHECK(text.find("outcome = completed") != std::string::npos);
  CHECK(text.find("[model]") != std::string::npos);
  CHECK(text.find("[analysis]") != std::string::npos);
  CHECK(text.find("summary: final sup_u 1e-3") != std::string::npos);
  // The echo reparses to the same config (defaults included).
  std::size_t pos = text.find("[model]");
  RunConfig echoed = parse_config(text.substr(pos));
  CHECK(echoed == m.config);
}
