#include "fpt/io/config.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fpt/error.hpp"
#include "fpt/reachability.hpp"

namespace fpt::io {

using nlohmann::json;

void ThrustSpec::validate() const {
  const int count = static_cast<int>(u_max.has_value()) + static_cast<int>(u_max_si.has_value()) +
                    static_cast<int>(j_star.has_value());
  if (count != 1) {
    throw ConfigError(
        fmt::format("exactly one of u_max, u_max_si, j_star must be given (got {})", count));
  }
  if (u_max && *u_max < 0.0) throw ConfigError("u_max must be non-negative");
  if (u_max_si && *u_max_si < 0.0) throw ConfigError("u_max_si must be non-negative");
  if (j_star && !(*j_star > 0.0)) throw ConfigError("j_star must be positive");
}

double ThrustSpec::j_star_for(double period, const UnitSystem& units) const {
  validate();
  if (j_star) return *j_star;
  const double u = u_max ? *u_max : units.accel_to_canonical(*u_max_si);
  return j_star_from_thrust(u, period);
}

void RunConfig::validate() const {
  if (orbit_name.empty() && !inline_orbit) throw ConfigError("no orbit selected");
  thrust.validate();
  integrator.validate();
  shooting.validate();
  if (n_checkpoints < 2) throw ConfigError("checkpoints must be at least 2");
  if (trajectory_stride == 0) throw ConfigError("trajectory stride must be positive");
  if (!(closure_bound > 0.0)) throw ConfigError("closure_bound must be positive");
  if (validate_spec.direction < 1 || validate_spec.direction > 6) {
    throw ConfigError("validate.direction must be in 1..6");
  }
  resolve_orbit().to_orbit();
}

OrbitCatalogEntry RunConfig::resolve_orbit() const {
  if (inline_orbit) return *inline_orbit;
  return OrbitCatalog::load(catalog).find(orbit_name);
}

RunConfig parse_run_config(const json& j, const RunConfig& base) {
  RunConfig c = base;
  try {
    if (j.contains("catalog")) c.catalog = j["catalog"].get<std::string>();
    if (j.contains("orbit")) {
      if (j["orbit"].is_string()) {
        c.orbit_name = j["orbit"].get<std::string>();
        c.inline_orbit.reset();
      } else {
        c.inline_orbit = entry_from_json(j["orbit"]);
        c.orbit_name = c.inline_orbit->name;
      }
    }
    if (j.contains("thrust")) {
      const auto& t = j["thrust"];
      ThrustSpec spec;
      if (t.contains("u_max")) spec.u_max = t["u_max"].get<double>();
      if (t.contains("u_max_si")) spec.u_max_si = t["u_max_si"].get<double>();
      if (t.contains("j_star")) spec.j_star = t["j_star"].get<double>();
      c.thrust = spec;
    }
    if (j.contains("costate_convention")) {
      c.convention = parse_costate_convention(j["costate_convention"].get<std::string>());
    }
    if (j.contains("samples")) c.n_samples = j["samples"].get<std::size_t>();
    if (j.contains("checkpoints")) c.n_checkpoints = j["checkpoints"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      c.integrator.abs_tol = t.value("abs", c.integrator.abs_tol);
      c.integrator.rel_tol = t.value("rel", c.integrator.rel_tol);
      c.integrator.max_step = t.value("max_step", c.integrator.max_step);
      c.shooting.residual_tol = t.value("residual", c.shooting.residual_tol);
    }
    if (j.contains("shooting")) {
      const auto& s = j["shooting"];
      c.shooting.max_iters = s.value("max_iters", c.shooting.max_iters);
      c.shooting.step_damping = s.value("step_damping", c.shooting.step_damping);
      c.shooting.fd_fallback = s.value("fd_fallback", c.shooting.fd_fallback);
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("stm_cache") && !j["stm_cache"].is_null()) {
      c.stm_cache = j["stm_cache"].get<std::string>();
    }
    if (j.contains("si_columns")) c.si_columns = j["si_columns"].get<bool>();
    if (j.contains("trajectories")) {
      const auto& t = j["trajectories"];
      c.trajectory_stride = t.value("stride", c.trajectory_stride);
      c.trajectory_samples = t.value("max_samples", c.trajectory_samples);
    }
    if (j.contains("closure_bound")) c.closure_bound = j["closure_bound"].get<double>();
    if (j.contains("validate")) {
      const auto& v = j["validate"];
      c.validate_spec.direction = v.value("direction", c.validate_spec.direction);
      c.validate_spec.cost_min = v.value("cost_min", c.validate_spec.cost_min);
      if (v.contains("cost_max")) c.validate_spec.cost_max = v["cost_max"].get<double>();
      c.validate_spec.points = v.value("points", c.validate_spec.points);
      if (v.contains("scales")) c.validate_spec.scales = v["scales"].get<std::vector<double>>();
    }
  } catch (const json::exception& ex) {
    throw ConfigError(fmt::format("malformed run config: {}", ex.what()));
  }
  c.integrator.validate();
  c.shooting.integrator = c.integrator;
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ConfigError(fmt::format("config '{}': {}", path.string(), ex.what()));
  }
  return parse_run_config(j);
}

}  // namespace fpt::io
