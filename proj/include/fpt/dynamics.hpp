#pragma once

/// \file dynamics.hpp
/// \brief CR3BP vector field, its analytic Jacobian, and the augmented
/// state/costate system of energy-optimal control.

#include <memory>
#include <string_view>

#include "fpt/types.hpp"

namespace fpt {

/// Default floor on the distance to either primary, in DU.
inline constexpr double kDefaultSingularityFloor = 1e-12;

/// Natural (uncontrolled) first-order dynamics x' = F(x) in R^6 with
/// x = [r; v]. Control enters additively on the velocity rows.
///
/// Implementations must be pure and thread-safe. Besides the CR3BP, tests
/// plug in closed-form systems (double integrator, harmonic oscillator)
/// through this interface.
class NaturalDynamics {
 public:
  virtual ~NaturalDynamics() = default;

  virtual Vec6 field(const Vec6& x) const = 0;
  virtual Mat6 jacobian(const Vec6& x) const = 0;

  /// d/dx [ J(x)^T w ] for a fixed weight vector w.
  virtual Mat6 jacobian_transpose_gradient(const Vec6& x, const Vec6& w) const = 0;
  /// d/dx [ J(x) w ] for a fixed weight vector w.
  virtual Mat6 jacobian_gradient(const Vec6& x, const Vec6& w) const = 0;
};

class Cr3bp final : public NaturalDynamics {
 public:
  explicit Cr3bp(SystemParams params, double singularity_floor = kDefaultSingularityFloor);

  Vec6 field(const Vec6& x) const override;
  Mat6 jacobian(const Vec6& x) const override;
  Mat6 jacobian_transpose_gradient(const Vec6& x, const Vec6& w) const override;
  Mat6 jacobian_gradient(const Vec6& x, const Vec6& w) const override;

  const SystemParams& params() const { return params_; }

  /// Symmetric second partials of the effective potential (rows 3..5,
  /// columns 0..2 of the Jacobian).
  Mat3 potential_hessian(const Vec3& r) const;
  /// Third partials of the gravity terms contracted with w:
  /// result(i,k) = sum_j d U(i,j) / d r(k) * w(j). Symmetric.
  Mat3 potential_third_contracted(const Vec3& r, const Vec3& w) const;

 private:
  struct Distances {
    Vec3 d1, d2;
    double r1, r2;
  };
  Distances distances(const Vec3& r) const;

  SystemParams params_;
  double floor_;
};

/// Free-function forms over the CR3BP.
Vec6 cr3bp_field(const State6& state, const SystemParams& params);
Mat6 cr3bp_jacobian(const State6& state, const SystemParams& params);

/// Which linear map drives the costates.
///
/// kAdjoint is lambda' = -J(x)^T lambda, the Pontryagin costate equation;
/// its control is energy-optimal. kUntransposed integrates
/// lambda' = -J(x) lambda instead. It still yields a feasible control that
/// meets the boundary conditions, but not the minimum-energy one.
enum class CostateConvention { kAdjoint, kUntransposed };

std::string_view to_string(CostateConvention c);
/// Accepts "adjoint" or "untransposed"; throws ConfigError otherwise.
CostateConvention parse_costate_convention(std::string_view s);

/// The 12-dimensional system y' = G(y) with y = [x; lambda]:
///   x'      = F(x) + [0; -lambda_v]
///   lambda' = -J(x)^T lambda   (or -J(x) lambda, see CostateConvention)
class AugmentedDynamics {
 public:
  AugmentedDynamics(std::shared_ptr<const NaturalDynamics> natural,
                    CostateConvention convention = CostateConvention::kAdjoint);

  Vec12 field(const Vec12& y) const;
  Mat12 jacobian(const Vec12& y) const;

  const NaturalDynamics& natural() const { return *natural_; }
  CostateConvention convention() const { return convention_; }

 private:
  std::shared_ptr<const NaturalDynamics> natural_;
  CostateConvention convention_;
};

AugmentedDynamics make_cr3bp_model(const SystemParams& params,
                                   CostateConvention convention = CostateConvention::kAdjoint);

/// Free-function forms over the CR3BP with the adjoint costate equation.
AugmentedState augmented_field(const AugmentedState& y, const SystemParams& params);
Mat12 augmented_jacobian(const AugmentedState& y, const SystemParams& params);

}  // namespace fpt
