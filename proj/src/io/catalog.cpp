#include "fpt/io/catalog.hpp"

#include <fstream>

#include <fmt/format.h>

#include "fpt/error.hpp"

#ifndef FPT_DEFAULT_CATALOG
#define FPT_DEFAULT_CATALOG "data/orbits.json"
#endif

namespace fpt::io {

using nlohmann::json;

ReferenceOrbit OrbitCatalogEntry::to_orbit() const {
  ReferenceOrbit orbit;
  orbit.name = name;
  orbit.params.mu_star = mu_star;
  orbit.params.label = name;
  orbit.initial_state = initial_state;
  orbit.period = period;
  orbit.validate();
  return orbit;
}

OrbitCatalogEntry entry_from_json(const json& j) {
  OrbitCatalogEntry e;
  try {
    e.name = j.at("name").get<std::string>();
    e.mu_star = j.at("mu_star").get<double>();
    const auto state = j.at("initial_state").get<std::vector<double>>();
    if (state.size() != 6) {
      throw ConfigError(fmt::format("orbit '{}': initial_state needs 6 values, got {}", e.name,
                                    state.size()));
    }
    for (int i = 0; i < 6; ++i) e.initial_state(i) = state[i];
    e.period = j.at("period").get<double>();
    e.provenance = j.value("provenance", "");
    if (j.contains("units")) {
      e.units.du_km = j["units"].at("du_km").get<double>();
      e.units.tu_s = j["units"].at("tu_s").get<double>();
    }
    if (j.contains("spacecraft")) {
      Spacecraft sc;
      sc.thrust_n = j["spacecraft"].at("thrust_n").get<double>();
      sc.mass_kg = j["spacecraft"].at("mass_kg").get<double>();
      e.spacecraft = sc;
    }
  } catch (const json::exception& ex) {
    throw ConfigError(fmt::format("malformed orbit catalog entry: {}", ex.what()));
  }
  return e;
}

json entry_to_json(const OrbitCatalogEntry& e) {
  json j;
  j["name"] = e.name;
  j["mu_star"] = e.mu_star;
  j["initial_state"] = std::vector<double>(e.initial_state.data(), e.initial_state.data() + 6);
  j["period"] = e.period;
  j["provenance"] = e.provenance;
  j["units"] = {{"du_km", e.units.du_km}, {"tu_s", e.units.tu_s}};
  if (e.spacecraft) {
    j["spacecraft"] = {{"thrust_n", e.spacecraft->thrust_n}, {"mass_kg", e.spacecraft->mass_kg}};
  }
  return j;
}

OrbitCatalog OrbitCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open orbit catalog '{}'", path.string()));
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ConfigError(fmt::format("orbit catalog '{}': {}", path.string(), ex.what()));
  }
  std::vector<OrbitCatalogEntry> entries;
  for (const auto& item : j.at("orbits")) entries.push_back(entry_from_json(item));
  return OrbitCatalog(std::move(entries));
}

void OrbitCatalog::save(const std::filesystem::path& path) const {
  json j;
  j["orbits"] = json::array();
  for (const auto& e : entries_) j["orbits"].push_back(entry_to_json(e));
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write orbit catalog '{}'", path.string()));
  out << j.dump(2) << '\n';
}

const OrbitCatalogEntry& OrbitCatalog::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : entries_) known += (known.empty() ? "" : ", ") + e.name;
  throw ConfigError(fmt::format("orbit '{}' not in catalog (known: {})", name, known));
}

std::filesystem::path default_catalog_path() { return FPT_DEFAULT_CATALOG; }

}  // namespace fpt::io
