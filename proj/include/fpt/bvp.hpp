#pragma once

/// \file bvp.hpp
/// \brief Linear and nonlinear two-point boundary value problems of
/// energy-optimal control, and the linear-vs-nonlinear validation sweep.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpt/propagation.hpp"
#include "fpt/reachability.hpp"

namespace fpt {

/// Rows whose true cost is below this multiple of the inherent cost are
/// untrusted.
inline constexpr double kInherentTrustFactor = 10.0;

struct ShootingConfig {
  double residual_tol = 1e-11;  // on |x(tf) - x_target|
  int max_iters = 50;
  double step_damping = 1.0;    // initial Newton step fraction, in (0, 1]
  int max_halvings = 20;
  bool fd_fallback = false;     // finite-difference Newton Jacobian instead of the STM
  double fd_step = 1e-7;
  std::size_t n_checkpoints = 0;  // trajectory samples kept in the result
  IntegratorConfig integrator;

  void validate() const;
};

struct ShootingResult {
  Costate6 lambda0 = Costate6::Zero();
  int iterations = 0;
  double residual = 0.0;
  double true_cost = 0.0;
  std::vector<AugmentedSample> trajectory;
};

/// d lambda0 = Phi_xl^-1 (dxf - Phi_xx dx0) via an LU solve.
Costate6 solve_linear_costate(const StmHistory& history, const Vec6& dx0, const Vec6& dxf);

/// Newton shooting on the six initial costates so that the nonlinear
/// augmented flow from (x0 + dx0, lambda0) returns to x0 + dx0 after one
/// period. Each iteration re-linearizes with the augmented STM of the
/// current iterate; a step is halved while the residual norm grows.
///
/// Throws ConvergenceError (iteration budget, damping exhausted) or the
/// integrator's errors.
ShootingResult shoot_nonlinear(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                               const Vec6& dx0, const Costate6& lambda_guess,
                               const ShootingConfig& cfg);

/// Same, with the initial guess from the linear forced-periodic solution.
ShootingResult shoot_nonlinear(const AugmentedDynamics& model, const StmHistory& history,
                               const Vec6& dx0, const ShootingConfig& cfg);

struct ClosureReport {
  double position_error = 0.0;  // DU
  double velocity_error = 0.0;  // DU/TU
  double inherent_cost = 0.0;   // DU^2/TU^3
  int shooting_iterations = 0;
};

/// One-period return error of the uncontrolled orbit, plus the cost of the
/// forced periodic trajectory that closes it exactly.
ClosureReport check_closure(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                            const ShootingConfig& cfg);
/// Only the return error (no shooting).
ClosureReport closure_error(const NaturalDynamics& dynamics, const ReferenceOrbit& orbit,
                            const IntegratorConfig& cfg);

struct ValidationRow {
  double scale = 0.0;
  double linear_cost = 0.0;
  double true_cost = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  int iterations = 0;
  bool converged = false;
  bool trusted = false;
  std::string failure;
};

struct ValidationTable {
  double inherent_cost = 0.0;
  std::vector<ValidationRow> rows;
};

/// Linear E* cost against the converged nonlinear cost for dx0 = s * d over
/// each scale s. Failed rows are recorded and the sweep continues. Rows run
/// in parallel; row order follows `scales`.
ValidationTable validation_sweep(const AugmentedDynamics& model, const StmHistory& history,
                                 const Vec6& direction, std::span<const double> scales,
                                 const ShootingConfig& cfg);
ValidationTable validation_sweep_serial(const AugmentedDynamics& model, const StmHistory& history,
                                        const Vec6& direction, std::span<const double> scales,
                                        const ShootingConfig& cfg);

/// Scales along `direction` whose linear costs equal `costs`.
std::vector<double> scales_for_costs(const EStarForm& form, const Vec6& direction,
                                     std::span<const double> costs);

}  // namespace fpt
