#pragma once

/// \file reachability.hpp
/// \brief Energy-limited reachable sets of forced periodic trajectories.
///
/// With the linearized boundary value map
///
///   dy0 = M [dx0; dxf],   M = [ I6                 0      ]
///                             [ -Pxl^-1 Pxx    Pxl^-1 ]
///
/// the control energy is J = 1/2 [dx0; dxf]^T E [dx0; dxf] with
/// E = M^T G(tf) M. Forcing dxf = dx0 collapses E to the 6x6 form
/// E* = [I I] E [I I]^T, whose sublevel set {1/2 dx^T E* dx <= J*} is a
/// hyperellipsoid with semi-axes sqrt(2 J* / gamma_i) w_i.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fpt/propagation.hpp"
#include "fpt/types.hpp"

namespace fpt {

/// Eigenvalues below this fraction of the largest are clamped to zero.
inline constexpr double kEigenClampRatio = 1e-12;
/// Eigenvalues below this fraction of the largest mark unbounded axes.
inline constexpr double kNearZeroRatio = 1e-8;
/// Largest acceptable condition number of the Phi_x,lambda block.
inline constexpr double kMaxBvpCondition = 1e12;

struct EForm {
  Mat12 matrix = Mat12::Zero();
  Mat12 bvp_map = Mat12::Identity();
  double cond_estimate = 1.0;
};

/// Builds E from the final STM and Gram integral of a one-period history.
/// Throws IllConditionedError naming the orbit when cond(Phi_xl) > 1e12.
EForm assemble_e(const StmHistory& history);
/// Same from explicit blocks (used for injected-matrix tests).
EForm assemble_e(const Mat12& stm_final, const Mat12& gram_final, const std::string& orbit_name);

struct EStarForm {
  Mat6 matrix = Mat6::Zero();
  /// Ascending, so extents come out largest-first. Clamped values are 0.
  Vec6 eigenvalues = Vec6::Zero();
  /// Column i is w_i; orthonormal, largest-magnitude component positive.
  Mat6 eigenvectors = Mat6::Identity();
  std::size_t near_zero_count = 0;
  /// More than one near-zero eigenvalue (warning, not an error).
  bool degenerate = false;
};

EStarForm assemble_e_star(const EForm& e);
/// Eigen-decomposes an already assembled symmetric 6x6 form.
EStarForm decompose_e_star(const Mat6& matrix);

/// 1/2 dx^T E* dx.
double quadratic_cost(const EStarForm& form, const Vec6& dx0);
/// 1/2 z^T E z with z = [dx0; dxf].
double boundary_cost(const EForm& e, const Vec6& dx0, const Vec6& dxf);

/// J* = 1/2 u_max^2 T.
double j_star_from_thrust(double u_max, double period);

struct ReachableSet {
  EStarForm form;
  double j_star = 0.0;
  std::array<Vec6, 6> semi_axes{};
  /// sqrt(2 J* / gamma_i); +inf for unbounded axes.
  Vec6 extents = Vec6::Zero();
  std::array<bool, 6> unbounded{};

  std::size_t finite_axis_count() const;
};

/// Throws ConfigError unless j_star > 0.
ReachableSet reachable_set(const EStarForm& form, double j_star);

/// Boundary points of the ellipsoid: Gaussian draws projected off the
/// unbounded axes, normalized on the unit sphere in eigen-coordinates and
/// mapped through the finite semi-axes. Every sample costs exactly J*
/// (up to rounding). Deterministic for a given seed.
std::vector<Vec6> sample_boundary(const ReachableSet& set, std::size_t n, std::uint64_t seed);

/// Linear forced-periodic (or general two-point) solution along the history.
struct LinearTrajectory {
  std::vector<double> t;
  std::vector<Vec6> dx;       // state deviation
  std::vector<Vec6> dlambda;  // costate deviation
  std::vector<double> thrust; // |u| = |d lambda_v|
  Vec12 dy0 = Vec12::Zero();
  double cost = 0.0;          // from the E form
};

/// Precomputed E form bound to its history; cheap to evaluate many samples.
class LinearBvp {
 public:
  explicit LinearBvp(const StmHistory& history);

  const StmHistory& history() const { return *history_; }
  const EForm& e_form() const { return e_; }

  Vec12 initial_deviation(const Vec6& dx0, const Vec6& dxf) const;
  /// Propagates through every `stride`-th checkpoint (the last is always
  /// included).
  LinearTrajectory propagate(const Vec6& dx0, const Vec6& dxf, std::size_t stride = 1) const;

 private:
  const StmHistory* history_;
  EForm e_;
};

LinearTrajectory propagate_linear(const StmHistory& history, const Vec6& dx0, const Vec6& dxf);

/// 1/2 int |d lambda_v|^2 dt by composite trapezoid over the checkpoints of
/// a linear trajectory.
double trapezoid_cost(const LinearTrajectory& trajectory);

}  // namespace fpt
