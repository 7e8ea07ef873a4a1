#pragma once

/// \file dop853.hpp
/// \brief Adaptive explicit Runge-Kutta 8(5,3) integrator (Dormand-Prince
/// coefficients, Hairer's combined 5th/3rd order error estimate).
///
/// The integrator steps exactly onto each requested output time, so no
/// interpolation error enters recorded checkpoints.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>

namespace fpt {

struct IntegratorConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double max_step = 1.0;   // TU
  double min_step = 1e-12; // TU; controller-proposed steps below this fail
  std::size_t max_steps = 2'000'000;

  /// Throws ConfigError unless 0 < tolerances and min_step < max_step.
  void validate() const;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// dydt = f(t, y). Must not retain the spans.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
/// Called once per output time with the solution there.
using OdeObserver = std::function<void(std::size_t index, double t, std::span<const double> y)>;

/// Integrates from t0 through each of `output_times` (monotone in the
/// direction of integration; entries equal to t0 are reported without
/// stepping). On return `y` holds the solution at the last output time.
///
/// Throws IntegrationError on step-size underflow or when max_steps is hit.
/// Deterministic for identical inputs.
IntegrationStats integrate_dop853(const OdeRhs& rhs, std::span<double> y, double t0,
                                  std::span<const double> output_times,
                                  const IntegratorConfig& cfg, const OdeObserver& observer = {});

/// Convenience overload for a single end time.
IntegrationStats integrate_dop853(const OdeRhs& rhs, std::span<double> y, double t0, double t1,
                                  const IntegratorConfig& cfg);

}  // namespace fpt
