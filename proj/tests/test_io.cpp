#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "fpt/error.hpp"
#include "fpt/io/catalog.hpp"
#include "fpt/io/config.hpp"
#include "fpt/io/csv.hpp"
#include "fpt/io/stm_cache.hpp"
#include "support/oracles.hpp"

using namespace fpt;
using namespace fpt::io;
using namespace fpt::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "fpt_test_io";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("shipped catalog holds the halo reference") {
  const auto catalog = OrbitCatalog::load(default_catalog_path());
  const auto& e = catalog.find("earth-moon-l2-halo");
  CHECK(e.mu_star == kHaloMu);
  CHECK(e.period == kHaloPeriod);
  CHECK(e.initial_state == halo_state());
  REQUIRE(e.spacecraft);
  CHECK(e.spacecraft->u_max_si() == doctest::Approx(5e-5));
  CHECK(e.units.accel_to_canonical(5e-5) == doctest::Approx(0.0184).epsilon(1e-2));
}

TEST_CASE("catalog round-trips every digit") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  OrbitCatalogEntry e;
  e.name = "random";
  e.mu_star = 0.0121505856;
  for (int i = 0; i < 6; ++i) e.initial_state(i) = u(rng) / 3.0;
  e.period = 3.0 * std::abs(u(rng)) + 0.1;
  e.provenance = "synthetic";
  e.spacecraft = Spacecraft{0.05, 1000.0};
  const fs::path path = scratch("catalog.json");
  OrbitCatalog({e}).save(path);
  const auto back = OrbitCatalog::load(path).find("random");
  CHECK(back.mu_star == e.mu_star);
  CHECK(back.period == e.period);
  CHECK(back.initial_state == e.initial_state);
  CHECK(back.provenance == e.provenance);
  CHECK(back.spacecraft->thrust_n == 0.05);
}

TEST_CASE("unknown orbit names list the catalog") {
  const auto catalog = OrbitCatalog::load(default_catalog_path());
  try {
    catalog.find("nope");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("earth-moon-l2-halo") != std::string::npos);
  }
}

TEST_CASE("malformed entries are config errors") {
  CHECK_THROWS_AS(entry_from_json(nlohmann::json::parse(R"({"name":"x"})")), ConfigError);
  CHECK_THROWS_AS(
      entry_from_json(nlohmann::json::parse(
          R"({"name":"x","mu_star":0.1,"initial_state":[1,2,3],"period":1})")),
      ConfigError);
  auto zero_period = entry_from_json(nlohmann::json::parse(
      R"({"name":"flat","mu_star":0.1,"initial_state":[1,0,0,0,0,0],"period":0})"));
  CHECK_THROWS_AS(zero_period.to_orbit(), ConfigError);
}

TEST_CASE("CSV cells keep 17 significant digits") {
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
  const fs::path path = scratch("t.csv");
  {
    CsvWriter w(path, {"id", "value", "vec_a", "b", "c", "d", "e", "f", "label"});
    Vec6 vec;
    vec << 1.0 / 3, -2.0 / 7, 1e-300, 5e300, 0.0, -0.0;
    w.row(std::size_t{3}, v, vec, "tag");
    w.commit();
    CHECK(w.rows() == 1);
  }
  const auto table = read_csv(path);
  REQUIRE(table.header.size() == 9);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][0] == "3");
  CHECK(std::stod(table.rows[0][1]) == v);
  CHECK(std::stod(table.rows[0][2]) == 1.0 / 3);
  CHECK(table.rows[0][8] == "tag");
  CHECK_FALSE(fs::exists(path.string() + ".tmp"));
}

TEST_CASE("uncommitted CSV writers leave no file") {
  const fs::path path = scratch("never.csv");
  fs::remove(path);
  { CsvWriter w(path, {"a"}); }
  CHECK_FALSE(fs::exists(path));
}

TEST_CASE("STM cache round-trips and rejects mismatches") {
  const auto model = make_cr3bp_model(halo_orbit().params);
  const IntegratorConfig cfg;
  const auto history = build_stm_history(model, halo_orbit(), 40, cfg);
  const auto key = stm_cache_key(halo_orbit(), 40, cfg, CostateConvention::kAdjoint);
  CHECK(key != stm_cache_key(halo_orbit(), 41, cfg, CostateConvention::kAdjoint));
  CHECK(key != stm_cache_key(halo_orbit(), 40, cfg, CostateConvention::kUntransposed));

  const fs::path file = stm_cache_file(scratch("cache"), key);
  fs::create_directories(file.parent_path());
  save_stm_history(file, key, history);
  const auto back = load_stm_history(file, key, halo_orbit(), CostateConvention::kAdjoint, cfg);
  REQUIRE(back);
  CHECK(*back == history);
  CHECK_FALSE(load_stm_history(file, key + 1, halo_orbit(), CostateConvention::kAdjoint, cfg));

  fs::resize_file(file, fs::file_size(file) / 2);
  CHECK_FALSE(load_stm_history(file, key, halo_orbit(), CostateConvention::kAdjoint, cfg));
  CHECK_FALSE(load_stm_history(scratch("missing.bin"), key, halo_orbit(),
                               CostateConvention::kAdjoint, cfg));
}

TEST_CASE("run config parsing") {
  const auto c = parse_run_config(nlohmann::json::parse(R"({
    "orbit": "earth-moon-l2-halo",
    "thrust": {"u_max_si": 5e-5},
    "costate_convention": "untransposed",
    "samples": 12, "checkpoints": 300, "seed": 9,
    "tolerances": {"abs": 1e-12, "rel": 1e-12, "residual": 1e-10},
    "trajectories": {"stride": 5, "max_samples": 3},
    "validate": {"direction": 2, "cost_min": 1e-5, "points": 4}
  })"));
  CHECK(c.orbit_name == "earth-moon-l2-halo");
  CHECK(c.convention == CostateConvention::kUntransposed);
  CHECK(c.n_samples == 12);
  CHECK(c.n_checkpoints == 300);
  CHECK(c.seed == 9);
  CHECK(c.integrator.abs_tol == 1e-12);
  CHECK(c.shooting.integrator.abs_tol == 1e-12);
  CHECK(c.shooting.residual_tol == 1e-10);
  CHECK(c.trajectory_stride == 5);
  CHECK(c.validate_spec.direction == 2);
  CHECK_NOTHROW(c.validate());
  CHECK(c.thrust.j_star_for(kHaloPeriod, UnitSystem{}) ==
        doctest::Approx(0.5 * std::pow(UnitSystem{}.accel_to_canonical(5e-5), 2) * kHaloPeriod));
}

TEST_CASE("thrust bound must be given exactly once") {
  RunConfig c;
  c.orbit_name = "earth-moon-l2-halo";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.thrust.u_max = 0.018;
  CHECK_NOTHROW(c.validate());
  c.thrust.j_star = 3.5e-4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("malformed config values are config errors") {
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"samples": "many"})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"costate_convention": "both"})")),
                  ConfigError);
  CHECK_THROWS_AS(load_run_config(scratch("absent.json")), ConfigError);
}
