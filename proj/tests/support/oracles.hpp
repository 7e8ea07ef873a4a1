#pragma once

// Closed-form and independently coded reference systems for tests.

#include <array>
#include <cmath>
#include <functional>
#include <memory>

#include "fpt/dynamics.hpp"
#include "fpt/types.hpp"

namespace fpt::testing {

inline constexpr double kHaloMu = 0.01215059;
inline constexpr double kHaloPeriod = 2.085034838884136;

inline State6 halo_state() {
  State6 s;
  s << 1.06315768, 0.000326952322, -0.200259761, 0.000361619362, -0.176727245, -0.000739327422;
  return s;
}

inline ReferenceOrbit halo_orbit() {
  ReferenceOrbit o;
  o.name = "earth-moon-l2-halo";
  o.params.mu_star = kHaloMu;
  o.initial_state = halo_state();
  o.period = kHaloPeriod;
  return o;
}

// x' = [v; 0]. Minimum-energy rest-to-rest transfer over distance d in time T
// costs 6 d^2 / T^3.
class DoubleIntegrator final : public NaturalDynamics {
 public:
  Vec6 field(const Vec6& x) const override {
    Vec6 f = Vec6::Zero();
    f.head<3>() = x.tail<3>();
    return f;
  }
  Mat6 jacobian(const Vec6&) const override {
    Mat6 j = Mat6::Zero();
    j.topRightCorner<3, 3>().setIdentity();
    return j;
  }
  Mat6 jacobian_transpose_gradient(const Vec6&, const Vec6&) const override {
    return Mat6::Zero();
  }
  Mat6 jacobian_gradient(const Vec6&, const Vec6&) const override { return Mat6::Zero(); }
};

// x' = [v; -w^2 r]. Every solution is periodic with period 2 pi / w and the
// STM is known in closed form.
class HarmonicOscillator final : public NaturalDynamics {
 public:
  explicit HarmonicOscillator(double omega) : w_(omega) {}

  Vec6 field(const Vec6& x) const override {
    Vec6 f;
    f.head<3>() = x.tail<3>();
    f.tail<3>() = -w_ * w_ * x.head<3>();
    return f;
  }
  Mat6 jacobian(const Vec6&) const override {
    Mat6 j = Mat6::Zero();
    j.topRightCorner<3, 3>().setIdentity();
    j.bottomLeftCorner<3, 3>() = -w_ * w_ * Mat3::Identity();
    return j;
  }
  Mat6 jacobian_transpose_gradient(const Vec6&, const Vec6&) const override {
    return Mat6::Zero();
  }
  Mat6 jacobian_gradient(const Vec6&, const Vec6&) const override { return Mat6::Zero(); }

  double period() const { return 2.0 * M_PI / w_; }

  Vec6 exact(const Vec6& x0, double t) const {
    const double c = std::cos(w_ * t), s = std::sin(w_ * t);
    Vec6 x;
    x.head<3>() = c * x0.head<3>() + (s / w_) * x0.tail<3>();
    x.tail<3>() = -w_ * s * x0.head<3>() + c * x0.tail<3>();
    return x;
  }

 private:
  double w_;
};

// Collinear equilibrium g(x) = x - (1-mu)(x+mu)/|x+mu|^3 - mu(x-1+mu)/|x-1+mu|^3
// by bisection on a bracket that excludes both primaries.
inline double collinear_point(double mu, double lo, double hi) {
  auto g = [mu](double x) {
    const double a = x + mu, b = x - 1.0 + mu;
    return x - (1.0 - mu) * a / std::pow(std::abs(a), 3) - mu * b / std::pow(std::abs(b), 3);
  };
  double glo = g(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Scalar CR3BP formulas and a fixed-step RK4 propagation of the 6x6
// variational equations, written without the library's dynamics code.
struct Cr3bpOracle {
  double mu;

  std::array<double, 6> field(const std::array<double, 6>& s) const {
    const double x = s[0], y = s[1], z = s[2];
    const double r1 = std::sqrt((x + mu) * (x + mu) + y * y + z * z);
    const double r2 = std::sqrt((x - 1 + mu) * (x - 1 + mu) + y * y + z * z);
    const double k1 = (1 - mu) / (r1 * r1 * r1), k2 = mu / (r2 * r2 * r2);
    return {s[3],
            s[4],
            s[5],
            2 * s[4] + x - k1 * (x + mu) - k2 * (x - 1 + mu),
            -2 * s[3] + y - k1 * y - k2 * y,
            -k1 * z - k2 * z};
  }

  // Uxx, Uyy, Uzz, Uxy, Uxz, Uyz of the pseudo-potential.
  std::array<double, 6> hessian(double x, double y, double z) const {
    const double a = x + mu, b = x - 1 + mu;
    const double r1 = std::sqrt(a * a + y * y + z * z), r2 = std::sqrt(b * b + y * y + z * z);
    const double r13 = std::pow(r1, 3), r15 = std::pow(r1, 5);
    const double r23 = std::pow(r2, 3), r25 = std::pow(r2, 5);
    const double m1 = 1 - mu;
    const double uxx = 1 - m1 / r13 - mu / r23 + 3 * m1 * a * a / r15 + 3 * mu * b * b / r25;
    const double uyy = 1 - m1 / r13 - mu / r23 + 3 * m1 * y * y / r15 + 3 * mu * y * y / r25;
    const double uzz = -m1 / r13 - mu / r23 + 3 * m1 * z * z / r15 + 3 * mu * z * z / r25;
    const double uxy = 3 * m1 * a * y / r15 + 3 * mu * b * y / r25;
    const double uxz = 3 * m1 * a * z / r15 + 3 * mu * b * z / r25;
    const double uyz = 3 * m1 * y * z / r15 + 3 * mu * y * z / r25;
    return {uxx, uyy, uzz, uxy, uxz, uyz};
  }

  // 42-component state: x (6) then the STM row-major (36).
  void rhs(const std::array<double, 42>& y, std::array<double, 42>& dy) const {
    std::array<double, 6> s;
    for (int i = 0; i < 6; ++i) s[i] = y[i];
    const auto f = field(s);
    for (int i = 0; i < 6; ++i) dy[i] = f[i];
    const auto h = hessian(s[0], s[1], s[2]);
    double a[6][6] = {};
    a[0][3] = a[1][4] = a[2][5] = 1;
    a[3][0] = h[0]; a[3][1] = h[3]; a[3][2] = h[4];
    a[4][0] = h[3]; a[4][1] = h[1]; a[4][2] = h[5];
    a[5][0] = h[4]; a[5][1] = h[5]; a[5][2] = h[2];
    a[3][4] = 2;
    a[4][3] = -2;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double acc = 0;
        for (int k = 0; k < 6; ++k) acc += a[i][k] * y[6 + 6 * k + j];
        dy[6 + 6 * i + j] = acc;
      }
  }

  Mat6 monodromy(const State6& x0, double period, int steps) const {
    std::array<double, 42> y{};
    for (int i = 0; i < 6; ++i) y[i] = x0(i);
    for (int i = 0; i < 6; ++i) y[6 + 7 * i] = 1;
    const double h = period / steps;
    std::array<double, 42> k1, k2, k3, k4, tmp;
    for (int n = 0; n < steps; ++n) {
      rhs(y, k1);
      for (int i = 0; i < 42; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(tmp, k2);
      for (int i = 0; i < 42; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(tmp, k3);
      for (int i = 0; i < 42; ++i) tmp[i] = y[i] + h * k3[i];
      rhs(tmp, k4);
      for (int i = 0; i < 42; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    Mat6 m;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = y[6 + 6 * i + j];
    return m;
  }
};

// Central finite difference of a vector function.
template <int N, typename F>
Eigen::Matrix<double, N, N> fd_jacobian(F&& f, const Eigen::Matrix<double, N, 1>& x, double h) {
  Eigen::Matrix<double, N, N> j;
  for (int k = 0; k < N; ++k) {
    Eigen::Matrix<double, N, 1> xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    j.col(k) = (f(xp) - f(xm)) / (2 * h);
  }
  return j;
}

inline double angle_up_to_sign(const Vec6& a, const Vec6& b) {
  const double c = std::abs(a.normalized().dot(b.normalized()));
  return std::acos(std::min(1.0, c));
}

}  // namespace fpt::testing

namespace fpt::testing {

// Orbit record for a test-only dynamics hook; the mass parameter is unused
// by such models but must still be valid.
inline ReferenceOrbit hook_orbit(const char* name, const State6& x0, double period) {
  ReferenceOrbit o;
  o.name = name;
  o.params.mu_star = kHaloMu;
  o.initial_state = x0;
  o.period = period;
  return o;
}

}  // namespace fpt::testing
