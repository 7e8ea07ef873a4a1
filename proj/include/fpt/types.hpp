#pragma once

/// \file types.hpp
/// \brief Fixed-size linear algebra aliases and the small value types shared
/// by every module. All quantities are in canonical rotating-frame units
/// (DU, TU, DU/TU).

#include <string>

#include <Eigen/Dense>

namespace fpt {

using Vec3 = Eigen::Matrix<double, 3, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat3 = Eigen::Matrix<double, 3, 3>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

/// Position and velocity stacked as [x y z vx vy vz].
using State6 = Vec6;
/// Costates stacked as [lambda_r; lambda_v].
using Costate6 = Vec6;

/// Mass parameter of the primary pair. Valid when 0 < mu_star < 0.5.
struct SystemParams {
  double mu_star = 0.0;
  std::string label;

  /// Throws ConfigError when the mass parameter is outside (0, 0.5).
  void validate() const;
};

/// Spacecraft state stacked with its six costates. The optimal control is
/// always u = -lambda_v.
struct AugmentedState {
  State6 state = State6::Zero();
  Costate6 costate = Costate6::Zero();

  AugmentedState() = default;
  AugmentedState(const State6& x, const Costate6& lambda) : state(x), costate(lambda) {}
  explicit AugmentedState(const Vec12& y) : state(y.head<6>()), costate(y.tail<6>()) {}

  Vec12 stacked() const {
    Vec12 y;
    y << state, costate;
    return y;
  }
  Vec3 control() const { return -costate.tail<3>(); }
};

/// A naturally periodic orbit used as the linearization reference.
struct ReferenceOrbit {
  std::string name;
  SystemParams params;
  State6 initial_state = State6::Zero();
  double period = 0.0;

  /// Throws ConfigError on a non-positive period, invalid params or
  /// non-finite state components.
  void validate() const;
};

}  // namespace fpt
