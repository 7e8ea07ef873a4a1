#include "fpt/dynamics.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt {

void SystemParams::validate() const {
  if (!(mu_star > 0.0 && mu_star < 0.5)) {
    throw ConfigError(fmt::format("mass parameter {} outside (0, 0.5)", mu_star));
  }
}

void ReferenceOrbit::validate() const {
  params.validate();
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ConfigError(fmt::format("orbit '{}': period must be positive, got {}", name, period));
  }
  if (!initial_state.allFinite()) {
    throw ConfigError(fmt::format("orbit '{}': initial state has non-finite components", name));
  }
}

Cr3bp::Cr3bp(SystemParams params, double singularity_floor)
    : params_(std::move(params)), floor_(singularity_floor) {
  params_.validate();
}

Cr3bp::Distances Cr3bp::distances(const Vec3& r) const {
  const double mu = params_.mu_star;
  Distances d{Vec3(r.x() + mu, r.y(), r.z()), Vec3(r.x() - 1.0 + mu, r.y(), r.z()), 0.0, 0.0};
  d.r1 = d.d1.norm();
  d.r2 = d.d2.norm();
  if (!(d.r1 > floor_) || !(d.r2 > floor_)) {
    throw SingularityError(fmt::format("state within {} DU of a primary (R1={}, R2={})", floor_,
                                       d.r1, d.r2));
  }
  return d;
}

Vec6 Cr3bp::field(const Vec6& x) const {
  const double mu = params_.mu_star;
  const auto [d1, d2, r1, r2] = distances(x.head<3>());
  const double c1 = (1.0 - mu) / (r1 * r1 * r1);
  const double c2 = mu / (r2 * r2 * r2);

  Vec6 dx;
  dx.head<3>() = x.tail<3>();
  dx(3) = 2.0 * x(4) + x(0) - c1 * d1.x() - c2 * d2.x();
  dx(4) = -2.0 * x(3) + x(1) - c1 * d1.y() - c2 * d2.y();
  dx(5) = -c1 * d1.z() - c2 * d2.z();
  return dx;
}

Mat3 Cr3bp::potential_hessian(const Vec3& r) const {
  const double mu = params_.mu_star;
  const auto [d1, d2, r1, r2] = distances(r);
  const double r1_3 = r1 * r1 * r1, r2_3 = r2 * r2 * r2;
  const double r1_5 = r1_3 * r1 * r1, r2_5 = r2_3 * r2 * r2;

  Mat3 u = Mat3::Zero();
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u -= (1.0 - mu) * (Mat3::Identity() / r1_3 - 3.0 * d1 * d1.transpose() / r1_5);
  u -= mu * (Mat3::Identity() / r2_3 - 3.0 * d2 * d2.transpose() / r2_5);
  return u;
}

namespace {

// Third derivative of -m/|d| contracted on one index with w.
Mat3 point_mass_third(const Vec3& d, double r, double m, const Vec3& w) {
  const double r5 = r * r * r * r * r;
  const double r7 = r5 * r * r;
  const double dw = d.dot(w);
  return 3.0 * m * (w * d.transpose() + dw * Mat3::Identity() + d * w.transpose()) / r5 -
         15.0 * m * dw * d * d.transpose() / r7;
}

}  // namespace

Mat3 Cr3bp::potential_third_contracted(const Vec3& r, const Vec3& w) const {
  const double mu = params_.mu_star;
  const auto [d1, d2, r1, r2] = distances(r);
  return point_mass_third(d1, r1, 1.0 - mu, w) + point_mass_third(d2, r2, mu, w);
}

Mat6 Cr3bp::jacobian(const Vec6& x) const {
  Mat6 j = Mat6::Zero();
  j.topRightCorner<3, 3>().setIdentity();
  j.bottomLeftCorner<3, 3>() = potential_hessian(x.head<3>());
  j(3, 4) = 2.0;
  j(4, 3) = -2.0;
  return j;
}

// J^T w = [U w_v ; w_r + (2 Omega)^T w_v]; only the U block depends on x.
Mat6 Cr3bp::jacobian_transpose_gradient(const Vec6& x, const Vec6& w) const {
  Mat6 g = Mat6::Zero();
  g.topLeftCorner<3, 3>() = potential_third_contracted(x.head<3>(), w.tail<3>());
  return g;
}

// J w = [w_v ; U w_r + 2 Omega w_v].
Mat6 Cr3bp::jacobian_gradient(const Vec6& x, const Vec6& w) const {
  Mat6 g = Mat6::Zero();
  g.bottomLeftCorner<3, 3>() = potential_third_contracted(x.head<3>(), w.head<3>());
  return g;
}

Vec6 cr3bp_field(const State6& state, const SystemParams& params) {
  return Cr3bp(params).field(state);
}

Mat6 cr3bp_jacobian(const State6& state, const SystemParams& params) {
  return Cr3bp(params).jacobian(state);
}

std::string_view to_string(CostateConvention c) {
  return c == CostateConvention::kAdjoint ? "adjoint" : "untransposed";
}

CostateConvention parse_costate_convention(std::string_view s) {
  if (s == "adjoint") return CostateConvention::kAdjoint;
  if (s == "untransposed") return CostateConvention::kUntransposed;
  throw ConfigError(fmt::format("unknown costate convention '{}' (adjoint|untransposed)", s));
}

AugmentedDynamics::AugmentedDynamics(std::shared_ptr<const NaturalDynamics> natural,
                                     CostateConvention convention)
    : natural_(std::move(natural)), convention_(convention) {
  if (!natural_) throw ConfigError("augmented dynamics requires a natural vector field");
}

Vec12 AugmentedDynamics::field(const Vec12& y) const {
  const Vec6 x = y.head<6>();
  const Vec6 lambda = y.tail<6>();
  const Mat6 j = natural_->jacobian(x);

  Vec12 dy;
  dy.head<6>() = natural_->field(x);
  dy.segment<3>(3) -= lambda.tail<3>();
  if (convention_ == CostateConvention::kAdjoint) {
    dy.tail<6>().noalias() = -j.transpose() * lambda;
  } else {
    dy.tail<6>().noalias() = -j * lambda;
  }
  return dy;
}

Mat12 AugmentedDynamics::jacobian(const Vec12& y) const {
  const Vec6 x = y.head<6>();
  const Vec6 lambda = y.tail<6>();
  const Mat6 j = natural_->jacobian(x);

  Mat12 a = Mat12::Zero();
  a.topLeftCorner<6, 6>() = j;
  a.block<3, 3>(3, 9) = -Mat3::Identity();
  if (convention_ == CostateConvention::kAdjoint) {
    a.bottomRightCorner<6, 6>() = -j.transpose();
    a.bottomLeftCorner<6, 6>() = -natural_->jacobian_transpose_gradient(x, lambda);
  } else {
    a.bottomRightCorner<6, 6>() = -j;
    a.bottomLeftCorner<6, 6>() = -natural_->jacobian_gradient(x, lambda);
  }
  return a;
}

AugmentedDynamics make_cr3bp_model(const SystemParams& params, CostateConvention convention) {
  return AugmentedDynamics(std::make_shared<Cr3bp>(params), convention);
}

AugmentedState augmented_field(const AugmentedState& y, const SystemParams& params) {
  return AugmentedState(make_cr3bp_model(params).field(y.stacked()));
}

Mat12 augmented_jacobian(const AugmentedState& y, const SystemParams& params) {
  return make_cr3bp_model(params).jacobian(y.stacked());
}

}  // namespace fpt
