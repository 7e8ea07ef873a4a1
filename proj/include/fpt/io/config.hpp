#pragma once

/// \file config.hpp
/// \brief Run configuration: a JSON file whose values can be overridden by
/// command-line flags (flags win).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpt/bvp.hpp"
#include "fpt/dop853.hpp"
#include "fpt/dynamics.hpp"
#include "fpt/io/catalog.hpp"

namespace fpt::io {

/// Energy bound source. Exactly one of the three must be set.
struct ThrustSpec {
  std::optional<double> u_max;     // DU/TU^2
  std::optional<double> u_max_si;  // m/s^2
  std::optional<double> j_star;    // DU^2/TU^3

  void validate() const;
  /// Resolves to J* for the given orbit period and unit system.
  double j_star_for(double period, const UnitSystem& units) const;
};

struct ValidateSpec {
  int direction = 4;  // 1-based eigenvector index, largest extent first
  double cost_min = 1e-6;
  std::optional<double> cost_max;  // defaults to J*
  std::size_t points = 12;
  std::optional<std::vector<double>> scales;  // explicit scales override the cost range
};

struct RunConfig {
  std::filesystem::path catalog = default_catalog_path();
  std::string orbit_name;
  std::optional<OrbitCatalogEntry> inline_orbit;
  ThrustSpec thrust;
  CostateConvention convention = CostateConvention::kAdjoint;
  std::size_t n_samples = 10000;
  std::size_t n_checkpoints = 2000;
  std::uint64_t seed = 1;
  IntegratorConfig integrator;
  ShootingConfig shooting;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> stm_cache;
  bool si_columns = false;
  std::size_t trajectory_stride = 20;
  std::size_t trajectory_samples = 1000;
  double closure_bound = 1e-6;  // DU
  ValidateSpec validate_spec;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
  /// The catalog entry this run refers to (inline or looked up).
  OrbitCatalogEntry resolve_orbit() const;
};

RunConfig parse_run_config(const nlohmann::json& j, const RunConfig& base = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace fpt::io
