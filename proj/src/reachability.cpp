#include "fpt/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt {

EForm assemble_e(const Mat12& stm_final, const Mat12& gram_final, const std::string& orbit_name) {
  const Mat6 phi_xx = stm_final.topLeftCorner<6, 6>();
  const Mat6 phi_xl = stm_final.topRightCorner<6, 6>();

  const Eigen::JacobiSVD<Mat6> svd(phi_xl);
  const auto& sv = svd.singularValues();
  const double cond = sv(5) > 0.0 ? sv(0) / sv(5) : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxBvpCondition)) {
    throw IllConditionedError(fmt::format(
        "orbit '{}': position-to-costate STM block is ill-conditioned (cond ~ {:.3e})",
        orbit_name, cond));
  }

  const Eigen::PartialPivLU<Mat6> lu(phi_xl);
  EForm e;
  e.cond_estimate = cond;
  e.bvp_map.setZero();
  e.bvp_map.topLeftCorner<6, 6>().setIdentity();
  e.bvp_map.bottomLeftCorner<6, 6>() = -lu.solve(phi_xx);
  e.bvp_map.bottomRightCorner<6, 6>() = lu.solve(Mat6::Identity());

  const Mat12 m = e.bvp_map.transpose() * gram_final * e.bvp_map;
  e.matrix = 0.5 * (m + m.transpose());
  return e;
}

EForm assemble_e(const StmHistory& history) {
  const auto& last = history.back();
  const double span = history.tf() - history.t0();
  if (std::abs(span - history.orbit().period) > 1e-12 * std::max(1.0, history.orbit().period)) {
    throw ConfigError(fmt::format("orbit '{}': history spans {} TU, not one period ({} TU)",
                                  history.orbit().name, span, history.orbit().period));
  }
  return assemble_e(last.stm, last.gram, history.orbit().name);
}

EStarForm decompose_e_star(const Mat6& matrix) {
  EStarForm form;
  form.matrix = 0.5 * (matrix + matrix.transpose());

  const Eigen::SelfAdjointEigenSolver<Mat6> solver(form.matrix);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition of E* failed");
  }
  // Eigen returns ascending eigenvalues already.
  Vec6 gamma = solver.eigenvalues();
  Mat6 w = solver.eigenvectors();

  const double gamma_max = std::max(gamma.maxCoeff(), 0.0);
  for (int i = 0; i < 6; ++i) {
    if (gamma(i) < kEigenClampRatio * gamma_max) gamma(i) = 0.0;
    if (gamma(i) < kNearZeroRatio * gamma_max) ++form.near_zero_count;

    Eigen::Index imax = 0;
    w.col(i).cwiseAbs().maxCoeff(&imax);
    if (w(imax, i) < 0.0) w.col(i) = -w.col(i);
  }
  form.eigenvalues = gamma;
  form.eigenvectors = w;
  form.degenerate = form.near_zero_count > 1;
  return form;
}

EStarForm assemble_e_star(const EForm& e) {
  Eigen::Matrix<double, 6, 12> collapse;
  collapse << Mat6::Identity(), Mat6::Identity();
  return decompose_e_star(collapse * e.matrix * collapse.transpose());
}

double quadratic_cost(const EStarForm& form, const Vec6& dx0) {
  return std::max(0.5 * dx0.dot(form.matrix * dx0), 0.0);
}

double boundary_cost(const EForm& e, const Vec6& dx0, const Vec6& dxf) {
  Vec12 z;
  z << dx0, dxf;
  return 0.5 * z.dot(e.matrix * z);
}

double j_star_from_thrust(double u_max, double period) {
  if (u_max < 0.0) throw ConfigError("u_max must be non-negative");
  return 0.5 * u_max * u_max * period;
}

std::size_t ReachableSet::finite_axis_count() const {
  return static_cast<std::size_t>(std::count(unbounded.begin(), unbounded.end(), false));
}

ReachableSet reachable_set(const EStarForm& form, double j_star) {
  if (!(j_star > 0.0)) throw ConfigError(fmt::format("J* must be positive, got {}", j_star));
  ReachableSet set;
  set.form = form;
  set.j_star = j_star;
  const double gamma_max = form.eigenvalues.maxCoeff();
  for (int i = 0; i < 6; ++i) {
    const double gamma = form.eigenvalues(i);
    set.unbounded[i] = !(gamma >= kNearZeroRatio * gamma_max) || gamma <= 0.0;
    if (set.unbounded[i]) {
      set.extents(i) = std::numeric_limits<double>::infinity();
      set.semi_axes[i] = form.eigenvectors.col(i);
    } else {
      set.extents(i) = std::sqrt(2.0 * j_star / gamma);
      set.semi_axes[i] = set.extents(i) * form.eigenvectors.col(i);
    }
  }
  return set;
}

std::vector<Vec6> sample_boundary(const ReachableSet& set, std::size_t n, std::uint64_t seed) {
  if (set.finite_axis_count() == 0) {
    throw NumericalError("reachable set has no finite axis to sample");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Vec6> samples;
  samples.reserve(n);
  while (samples.size() < n) {
    Vec6 u;
    for (int i = 0; i < 6; ++i) u(i) = normal(rng);
    for (int i = 0; i < 6; ++i)
      if (set.unbounded[i]) u(i) = 0.0;
    const double norm = u.norm();
    if (!(norm > 0.0)) continue;
    u /= norm;
    Vec6 dx = Vec6::Zero();
    for (int i = 0; i < 6; ++i)
      if (!set.unbounded[i]) dx += u(i) * set.semi_axes[i];
    samples.push_back(dx);
  }
  return samples;
}

LinearBvp::LinearBvp(const StmHistory& history) : history_(&history), e_(assemble_e(history)) {}

Vec12 LinearBvp::initial_deviation(const Vec6& dx0, const Vec6& dxf) const {
  Vec12 z;
  z << dx0, dxf;
  return e_.bvp_map * z;
}

LinearTrajectory LinearBvp::propagate(const Vec6& dx0, const Vec6& dxf, std::size_t stride) const {
  const auto& records = history_->records();
  stride = std::max<std::size_t>(stride, 1);
  LinearTrajectory out;
  out.dy0 = initial_deviation(dx0, dxf);
  out.cost = boundary_cost(e_, dx0, dxf);

  const std::size_t count = (records.size() - 1) / stride + 1 +
                            ((records.size() - 1) % stride != 0 ? 1 : 0);
  out.t.reserve(count);
  out.dx.reserve(count);
  out.dlambda.reserve(count);
  out.thrust.reserve(count);
  auto emit = [&](const StmRecord& rec) {
    const Vec12 dy = rec.stm * out.dy0;
    out.t.push_back(rec.t);
    out.dx.push_back(dy.head<6>());
    out.dlambda.push_back(dy.tail<6>());
    out.thrust.push_back(dy.tail<3>().norm());
  };
  for (std::size_t i = 0; i < records.size(); i += stride) emit(records[i]);
  if ((records.size() - 1) % stride != 0) emit(records.back());
  return out;
}

LinearTrajectory propagate_linear(const StmHistory& history, const Vec6& dx0, const Vec6& dxf) {
  return LinearBvp(history).propagate(dx0, dxf);
}

double trapezoid_cost(const LinearTrajectory& trajectory) {
  double sum = 0.0;
  for (std::size_t i = 1; i < trajectory.t.size(); ++i) {
    const double f0 = trajectory.thrust[i - 1] * trajectory.thrust[i - 1];
    const double f1 = trajectory.thrust[i] * trajectory.thrust[i];
    sum += 0.5 * (f0 + f1) * (trajectory.t[i] - trajectory.t[i - 1]);
  }
  return 0.5 * sum;
}

}  // namespace fpt
