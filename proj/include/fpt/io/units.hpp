#pragma once

/// \file units.hpp
/// \brief Canonical-to-SI conversion table. Display only; the numerical core
/// never sees SI quantities.

namespace fpt::io {

struct UnitSystem {
  double du_km = 384400.0;  // Earth-Moon distance
  double tu_s = 375190.0;   // 1 / mean motion

  double accel_si_per_canonical() const { return du_km * 1e3 / (tu_s * tu_s); }
  double accel_to_canonical(double m_per_s2) const { return m_per_s2 / accel_si_per_canonical(); }
  double length_to_km(double du) const { return du * du_km; }
  double velocity_to_km_s(double du_per_tu) const { return du_per_tu * du_km / tu_s; }
  double time_to_s(double tu) const { return tu * tu_s; }
};

}  // namespace fpt::io
