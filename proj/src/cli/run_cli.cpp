#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fpt/cli/commands.hpp"
#include "fpt/error.hpp"

namespace fpt::cli {

namespace {

// Flag values; unset flags leave the config file (or defaults) untouched.
struct Overrides {
  std::string config;
  std::string catalog;
  std::string orbit;
  std::string convention;
  std::string out;
  std::string cache;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t checkpoints = 0;
  double u_max_si = 0.0;
  double j_star = 0.0;
  int direction = 0;
  std::vector<double> scales;
  std::size_t points = 0;
  bool si = false;
};

io::RunConfig build_config(const CLI::App& app, const Overrides& o) {
  io::RunConfig c = o.config.empty() ? io::RunConfig{} : io::load_run_config(o.config);
  auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--catalog")) c.catalog = o.catalog;
  if (given("--orbit")) {
    c.orbit_name = o.orbit;
    c.inline_orbit.reset();
  }
  if (given("--costate-convention")) c.convention = parse_costate_convention(o.convention);
  if (given("--out")) c.output_dir = o.out;
  if (given("--cache-stm")) c.stm_cache = o.cache;
  if (given("--seed")) c.seed = o.seed;
  if (given("--samples")) c.n_samples = o.samples;
  if (given("--checkpoints")) c.n_checkpoints = o.checkpoints;
  if (given("--u-max-si")) {
    c.thrust = io::ThrustSpec{};
    c.thrust.u_max_si = o.u_max_si;
  }
  if (given("--j-star")) {
    c.thrust = io::ThrustSpec{};
    c.thrust.j_star = o.j_star;
  }
  if (given("--direction")) c.validate_spec.direction = o.direction;
  if (given("--scales")) c.validate_spec.scales = o.scales;
  if (given("--points")) c.validate_spec.points = o.points;
  if (o.si) c.si_columns = true;
  if (c.orbit_name.empty() && !c.inline_orbit) c.orbit_name = "earth-moon-l2-halo";
  if (!c.thrust.u_max && !c.thrust.u_max_si && !c.thrust.j_star) {
    // Fall back to the catalog spacecraft when neither file nor flags set a bound.
    const auto entry = c.resolve_orbit();
    if (entry.spacecraft) c.thrust.u_max_si = entry.spacecraft->u_max_si();
  }
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-limited reachable sets of forced periodic orbits in the CR3BP", "fpt"};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--catalog", o.catalog, "orbit catalog JSON");
  app.add_option("--orbit", o.orbit, "catalog entry name");
  app.add_option("--costate-convention", o.convention, "adjoint | untransposed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--cache-stm", o.cache, "directory for cached STM histories");
  app.add_option("--seed", o.seed, "boundary sampling seed");
  app.add_option("--samples", o.samples, "number of boundary samples");
  app.add_option("--checkpoints", o.checkpoints, "STM checkpoints per period");
  auto* u_opt = app.add_option("--u-max-si", o.u_max_si, "thrust acceleration bound (m/s^2)");
  app.add_option("--j-star", o.j_star, "energy bound (DU^2/TU^3)")->excludes(u_opt);
  app.add_option("--direction", o.direction, "validation eigenvector (1-6, largest extent first)");
  app.add_option("--scales", o.scales, "explicit validation scales")->delimiter(',');
  app.add_option("--points", o.points, "number of validation costs");
  app.add_flag("--si", o.si, "add SI-unit columns");

  auto* orbit_check = app.add_subcommand("orbit-check", "closure error and inherent cost");
  auto* reachable = app.add_subcommand("reachable", "reachable set, samples and trajectories");
  auto* validate = app.add_subcommand("validate", "linear vs nonlinear cost sweep");
  auto* eigen = app.add_subcommand("eigentrajectories", "trajectories along each eigenvector");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const io::RunConfig config = build_config(app, o);
    if (orbit_check->parsed()) return cmd_orbit_check(config, out, err);
    if (reachable->parsed()) return cmd_reachable(config, out, err);
    if (validate->parsed()) return cmd_validate(config, out, err);
    if (eigen->parsed()) return cmd_eigentrajectories(config, out, err);
    return kExitUsage;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const NumericalError& e) {
    fmt::print(err, "numerical failure: {}\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace fpt::cli
