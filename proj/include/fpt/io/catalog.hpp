#pragma once

/// \file catalog.hpp
/// \brief Orbit catalog (JSON). Numbers round-trip exactly.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpt/io/units.hpp"
#include "fpt/types.hpp"

namespace fpt::io {

struct Spacecraft {
  double thrust_n = 0.0;
  double mass_kg = 0.0;
  double u_max_si() const { return thrust_n / mass_kg; }
};

struct OrbitCatalogEntry {
  std::string name;
  double mu_star = 0.0;
  State6 initial_state = State6::Zero();
  double period = 0.0;
  std::string provenance;
  UnitSystem units;
  std::optional<Spacecraft> spacecraft;

  ReferenceOrbit to_orbit() const;
};

OrbitCatalogEntry entry_from_json(const nlohmann::json& j);
nlohmann::json entry_to_json(const OrbitCatalogEntry& e);

class OrbitCatalog {
 public:
  OrbitCatalog() = default;
  explicit OrbitCatalog(std::vector<OrbitCatalogEntry> entries) : entries_(std::move(entries)) {}

  static OrbitCatalog load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// Throws ConfigError listing known names when absent.
  const OrbitCatalogEntry& find(const std::string& name) const;
  const std::vector<OrbitCatalogEntry>& entries() const { return entries_; }

 private:
  std::vector<OrbitCatalogEntry> entries_;
};

/// Path of the catalog shipped with the repository.
std::filesystem::path default_catalog_path();

}  // namespace fpt::io
