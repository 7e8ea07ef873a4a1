#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fpt/cli/commands.hpp"
#include "fpt/io/catalog.hpp"
#include "fpt/io/csv.hpp"
#include "support/oracles.hpp"
#include "support/reference_values.hpp"

using namespace fpt;
using namespace fpt::testing;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"fpt"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fpt_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_catalog(const fs::path& dir, const std::string& name, const State6& x0,
                       double period) {
  io::OrbitCatalogEntry e;
  e.name = name;
  e.mu_star = kHaloMu;
  e.initial_state = x0;
  e.period = period;
  e.spacecraft = io::Spacecraft{0.05, 1000.0};
  const fs::path p = dir / "catalog.json";
  io::OrbitCatalog({e}).save(p);
  return p;
}

double cell(const io::CsvTable& t, std::size_t row, const std::string& column) {
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] == column) return std::stod(t.rows.at(row).at(c));
  }
  FAIL("missing column " << column);
  return 0.0;
}

}  // namespace

TEST_CASE("orbit-check reports the inherent cost of the shipped orbit") {
  const auto dir = fresh_dir("orbit_check");
  const Run r = run({"--out", dir.string(), "orbit-check"});
  CHECK(r.code == 0);
  const auto t = io::read_csv(dir / "closure.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(cell(t, 0, "inherent_cost") <= 1e-12);
  CHECK(cell(t, 0, "within_bound") == 1.0);
}

TEST_CASE("flipped vy fails orbit-check and names the orbit") {
  const auto dir = fresh_dir("flipped");
  State6 x0 = halo_state();
  x0(4) = -x0(4);
  const auto catalog = write_catalog(dir, "flipped-halo", x0, kHaloPeriod);
  const Run r = run({"--catalog", catalog.string(), "--orbit", "flipped-halo", "--out",
                     dir.string(), "orbit-check"});
  CHECK(r.code != 0);
  CHECK(r.err.find("flipped-halo") != std::string::npos);
}

TEST_CASE("zero period is a config error before propagation") {
  const auto dir = fresh_dir("zero_period");
  const auto catalog = write_catalog(dir, "flat", halo_state(), 0.0);
  const Run r =
      run({"--catalog", catalog.string(), "--orbit", "flat", "--out", dir.string(), "orbit-check"});
  CHECK(r.code == 2);
  CHECK(r.err.find("flat") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "closure.csv"));
}

TEST_CASE("unknown subcommand or flag is a usage error") {
  CHECK(run({"bogus"}).code == 1);
  CHECK(run({"--nope", "reachable"}).code == 1);
  CHECK(run({"--config", "/no/such/file.json", "reachable"}).code == 1);
}

TEST_CASE("zero samples still emit the eigenstructure and headers") {
  const auto dir = fresh_dir("zero_samples");
  const Run r = run({"--samples", "0", "--checkpoints", "100", "--out", dir.string(), "reachable"});
  REQUIRE(r.code == 0);
  CHECK(io::read_csv(dir / "eigenstructure.csv").rows.size() == 6);
  for (const char* f : {"samples.csv", "trajectories.csv"}) {
    const auto t = io::read_csv(dir / f);
    CHECK(t.rows.empty());
    CHECK_FALSE(t.header.empty());
  }
}

TEST_CASE("reachable output is byte-identical for a fixed seed") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  for (const auto& d : {a, b}) {
    REQUIRE(run({"--samples", "300", "--seed", "5", "--checkpoints", "200", "--out", d.string(),
                 "reachable"})
                .code == 0);
  }
  for (const char* f : {"eigenstructure.csv", "samples.csv", "trajectories.csv", "envelope.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const auto c = fresh_dir("det_c");
  REQUIRE(run({"--samples", "300", "--seed", "6", "--checkpoints", "200", "--out", c.string(),
               "reachable"})
              .code == 0);
  CHECK(slurp(a / "samples.csv") != slurp(c / "samples.csv"));
}

TEST_CASE("spacecraft bound reproduces the reference extents under untransposed costates") {
  const auto dir = fresh_dir("table");
  REQUIRE(run({"--samples", "10", "--costate-convention", "untransposed", "--out", dir.string(),
               "reachable"})
              .code == 0);
  const auto t = io::read_csv(dir / "eigenstructure.csv");
  CHECK(cell(t, 0, "unbounded") == 1.0);
  for (std::size_t i = 1; i < 6; ++i) {
    CHECK(cell(t, i, "extent") == doctest::Approx(kTableExtents[i - 1]).epsilon(1e-2));
  }
}

TEST_CASE("SI columns are appended on request") {
  const auto dir = fresh_dir("si");
  REQUIRE(run({"--samples", "4", "--checkpoints", "50", "--si", "--out", dir.string(), "reachable"})
              .code == 0);
  const auto s = io::read_csv(dir / "samples.csv");
  REQUIRE(s.rows.size() == 4);
  CHECK(cell(s, 0, "dx_km") == doctest::Approx(cell(s, 0, "dx") * 384400.0).epsilon(1e-14));
  const auto tr = io::read_csv(dir / "trajectories.csv");
  CHECK(cell(tr, 3, "t_s") == doctest::Approx(cell(tr, 3, "t") * 375190.0).epsilon(1e-14));
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = fresh_dir("override");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"orbit": "earth-moon-l2-halo", "thrust": {"j_star": 1e-4},
                           "samples": 7, "checkpoints": 60, "output_dir": ")"
                     << (dir / "from_file").string() << "\"}";
  REQUIRE(run({"--config", cfg.string(), "reachable"}).code == 0);
  CHECK(io::read_csv(dir / "from_file" / "samples.csv").rows.size() == 7);
  REQUIRE(run({"--config", cfg.string(), "--samples", "3", "--out", (dir / "flag").string(),
               "reachable"})
              .code == 0);
  CHECK(io::read_csv(dir / "flag" / "samples.csv").rows.size() == 3);
  const auto s = io::read_csv(dir / "flag" / "samples.csv");
  CHECK(cell(s, 0, "cost") == doctest::Approx(1e-4).epsilon(1e-10));
}

TEST_CASE("empty validation scale list") {
  const auto dir = fresh_dir("empty_scales");
  const Run r = run({"--points", "0", "--checkpoints", "50", "--out", dir.string(), "validate"});
  CHECK(r.code == 0);
  const auto t = io::read_csv(dir / "validation.csv");
  CHECK(t.rows.empty());
  CHECK(t.header.size() == 8);
}

TEST_CASE("single validation point at the design bound is trusted") {
  const auto dir = fresh_dir("single");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"thrust": {"u_max_si": 5e-5}, "checkpoints": 100,
                           "validate": {"cost_min": 3.51e-4, "cost_max": 3.51e-4, "points": 1}})";
  REQUIRE(run({"--config", cfg.string(), "--out", dir.string(), "validate"}).code == 0);
  const auto t = io::read_csv(dir / "validation.csv");
  REQUIRE(t.rows.size() == 1);
  CHECK(cell(t, 0, "trusted") == 1.0);
  CHECK(cell(t, 0, "linear_cost") == doctest::Approx(3.51e-4).epsilon(1e-12));
  CHECK(cell(t, 0, "rel_error") < 1e-2);
}

TEST_CASE("default validation run keeps every trusted row below 0.1% relative error") {
  const auto dir = fresh_dir("default_validate");
  REQUIRE(run({"--checkpoints", "100", "--out", dir.string(), "validate"}).code == 0);
  const auto t = io::read_csv(dir / "validation.csv");
  REQUIRE_FALSE(t.rows.empty());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(cell(t, i, "converged") == 1.0);
    if (cell(t, i, "trusted") == 1.0) CHECK(cell(t, i, "rel_error") < 1e-3);
  }
}

TEST_CASE("eigentrajectories close and carry thrust") {
  const auto dir = fresh_dir("eigen");
  const Run r = run({"--out", dir.string(), "eigentrajectories"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("eigenvector 1") != std::string::npos);
  const auto traj = io::read_csv(dir / "eigen_trajectories.csv");
  const auto thrust = io::read_csv(dir / "thrust_history.csv");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < traj.rows.size(); ++i) groups[int(cell(traj, i, "eigvec"))].push_back(i);
  REQUIRE(groups.size() == 5);
  CHECK(groups.count(1) == 0);
  for (const auto& [id, rows] : groups) {
    double gap = 0;
    for (const char* c : {"dx", "dy", "dz", "dvx", "dvy", "dvz"}) {
      gap = std::max(gap, std::abs(cell(traj, rows.back(), c) - cell(traj, rows.front(), c)));
    }
    CHECK(gap < 1e-9);
  }
  double peak = 0;
  for (std::size_t i = 0; i < thrust.rows.size(); ++i) {
    const double u = cell(thrust, i, "u_norm");
    CHECK(std::isfinite(u));
    peak = std::max(peak, u);
  }
  CHECK(peak > 0.0);
}
