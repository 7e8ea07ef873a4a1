#include "fpt/bvp.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt {

void ShootingConfig::validate() const {
  if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
  if (max_iters <= 0) throw ConfigError("max_iters must be positive");
  if (!(step_damping > 0.0 && step_damping <= 1.0)) {
    throw ConfigError("step_damping must lie in (0, 1]");
  }
  if (max_halvings < 0) throw ConfigError("max_halvings must be non-negative");
  integrator.validate();
}

Costate6 solve_linear_costate(const StmHistory& history, const Vec6& dx0, const Vec6& dxf) {
  const Mat12& phi = history.back().stm;
  const Mat6 phi_xx = phi.topLeftCorner<6, 6>();
  const Mat6 phi_xl = phi.topRightCorner<6, 6>();
  const Eigen::JacobiSVD<Mat6> svd(phi_xl);
  const auto& sv = svd.singularValues();
  if (!(sv(5) > 0.0) || sv(0) / sv(5) > kMaxBvpCondition) {
    throw IllConditionedError(fmt::format(
        "orbit '{}': position-to-costate STM block is ill-conditioned", history.orbit().name));
  }
  return Eigen::PartialPivLU<Mat6>(phi_xl).solve(dxf - phi_xx * dx0);
}

namespace {

struct Shot {
  AugmentedPropagation prop;
  Vec6 residual;
  double norm;
};

Shot fire(const AugmentedDynamics& model, const State6& start, const Costate6& lambda, double t0,
          double tf, const ShootingConfig& cfg, bool with_stm) {
  AugmentedOptions options;
  options.with_stm = with_stm;
  Shot s{propagate_augmented(model, AugmentedState(start, lambda), t0, tf, cfg.integrator, options),
         Vec6::Zero(), 0.0};
  s.residual = s.prop.y.state - start;
  s.norm = s.residual.norm();
  return s;
}

Mat6 fd_jacobian(const AugmentedDynamics& model, const State6& start, const Costate6& lambda,
                 double t0, double tf, const ShootingConfig& cfg) {
  Mat6 jac;
  for (int k = 0; k < 6; ++k) {
    const double h = cfg.fd_step * std::max(1.0, std::abs(lambda(k)));
    Costate6 lp = lambda, lm = lambda;
    lp(k) += h;
    lm(k) -= h;
    const Vec6 rp = fire(model, start, lp, t0, tf, cfg, false).residual;
    const Vec6 rm = fire(model, start, lm, t0, tf, cfg, false).residual;
    jac.col(k) = (rp - rm) / (2.0 * h);
  }
  return jac;
}

}  // namespace

ShootingResult shoot_nonlinear(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                               const Vec6& dx0, const Costate6& lambda_guess,
                               const ShootingConfig& cfg) {
  cfg.validate();
  orbit.validate();
  const State6 start = orbit.initial_state + dx0;
  const double t0 = 0.0;
  const double tf = orbit.period;
  const bool use_stm = !cfg.fd_fallback;

  Costate6 lambda = lambda_guess;
  Shot shot = fire(model, start, lambda, t0, tf, cfg, use_stm);
  int iterations = 0;

  while (!(shot.norm <= cfg.residual_tol)) {
    if (!std::isfinite(shot.norm)) {
      throw ConvergenceError(fmt::format("orbit '{}': shooting residual became non-finite",
                                         orbit.name));
    }
    if (iterations >= cfg.max_iters) {
      throw ConvergenceError(fmt::format(
          "orbit '{}': shooting did not converge in {} iterations (residual {:.3e})", orbit.name,
          cfg.max_iters, shot.norm));
    }
    const Mat6 jac = use_stm ? Mat6(shot.prop.stm.topRightCorner<6, 6>())
                             : fd_jacobian(model, start, lambda, t0, tf, cfg);
    const Vec6 step = -Eigen::PartialPivLU<Mat6>(jac).solve(shot.residual);

    double alpha = cfg.step_damping;
    int halvings = 0;
    for (;;) {
      const Costate6 trial_lambda = lambda + alpha * step;
      Shot trial = fire(model, start, trial_lambda, t0, tf, cfg, use_stm);
      if (trial.norm < shot.norm || trial.norm <= cfg.residual_tol) {
        lambda = trial_lambda;
        shot = std::move(trial);
        break;
      }
      if (++halvings > cfg.max_halvings) {
        throw ConvergenceError(fmt::format(
            "orbit '{}': shooting stagnated at residual {:.3e} after {} step halvings",
            orbit.name, shot.norm, cfg.max_halvings));
      }
      alpha *= 0.5;
    }
    ++iterations;
  }

  ShootingResult result;
  result.lambda0 = lambda;
  result.iterations = iterations;
  result.residual = shot.norm;
  result.true_cost = shot.prop.cost;
  if (cfg.n_checkpoints > 0) {
    AugmentedOptions options;
    options.n_checkpoints = cfg.n_checkpoints;
    result.trajectory = propagate_augmented(model, AugmentedState(start, lambda), t0, tf,
                                            cfg.integrator, options)
                            .checkpoints;
  }
  return result;
}

ShootingResult shoot_nonlinear(const AugmentedDynamics& model, const StmHistory& history,
                               const Vec6& dx0, const ShootingConfig& cfg) {
  return shoot_nonlinear(model, history.orbit(), dx0, solve_linear_costate(history, dx0, dx0), cfg);
}

ClosureReport closure_error(const NaturalDynamics& dynamics, const ReferenceOrbit& orbit,
                            const IntegratorConfig& cfg) {
  orbit.validate();
  const State6 end = propagate_state(dynamics, orbit.initial_state, 0.0, orbit.period, cfg);
  ClosureReport report;
  report.position_error = (end.head<3>() - orbit.initial_state.head<3>()).norm();
  report.velocity_error = (end.tail<3>() - orbit.initial_state.tail<3>()).norm();
  return report;
}

ClosureReport check_closure(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                            const ShootingConfig& cfg) {
  ClosureReport report = closure_error(model.natural(), orbit, cfg.integrator);
  const ShootingResult shot = shoot_nonlinear(model, orbit, Vec6::Zero(), Costate6::Zero(), cfg);
  report.inherent_cost = shot.true_cost;
  report.shooting_iterations = shot.iterations;
  return report;
}

std::vector<double> scales_for_costs(const EStarForm& form, const Vec6& direction,
                                     std::span<const double> costs) {
  const double unit = quadratic_cost(form, direction);
  if (!(unit > 0.0)) throw NumericalError("direction has zero linear cost; cannot scale");
  std::vector<double> scales;
  scales.reserve(costs.size());
  for (double c : costs) scales.push_back(std::sqrt(std::max(c, 0.0) / unit));
  return scales;
}

namespace {

ValidationRow validate_row(const AugmentedDynamics& model, const StmHistory& history,
                           const EStarForm& form, const Vec6& direction, double scale,
                           double inherent, const ShootingConfig& cfg) {
  ValidationRow row;
  row.scale = scale;
  const Vec6 dx0 = scale * direction;
  row.linear_cost = quadratic_cost(form, dx0);
  try {
    const ShootingResult shot = shoot_nonlinear(model, history, dx0, cfg);
    row.true_cost = shot.true_cost;
    row.iterations = shot.iterations;
    row.converged = true;
    row.abs_error = std::abs(row.linear_cost - row.true_cost);
    row.rel_error = row.true_cost > 0.0 ? row.abs_error / row.true_cost
                                        : std::numeric_limits<double>::infinity();
    row.trusted = row.true_cost > kInherentTrustFactor * inherent;
  } catch (const Error& e) {
    row.failure = e.what();
  }
  return row;
}

ValidationTable sweep(const AugmentedDynamics& model, const StmHistory& history,
                      const Vec6& direction, std::span<const double> scales,
                      const ShootingConfig& cfg, bool parallel) {
  const double dnorm = direction.norm();
  if (std::abs(dnorm - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("validation direction must be unit length (|d| = {})", dnorm));
  }
  const EStarForm form = assemble_e_star(assemble_e(history));
  ValidationTable table;
  table.inherent_cost =
      shoot_nonlinear(model, history.orbit(), Vec6::Zero(), Costate6::Zero(), cfg).true_cost;
  table.rows.resize(scales.size());
  const auto n = static_cast<std::ptrdiff_t>(scales.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      table.rows[i] =
          validate_row(model, history, form, direction, scales[i], table.inherent_cost, cfg);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      table.rows[i] =
          validate_row(model, history, form, direction, scales[i], table.inherent_cost, cfg);
    }
  }
  return table;
}

}  // namespace

ValidationTable validation_sweep(const AugmentedDynamics& model, const StmHistory& history,
                                 const Vec6& direction, std::span<const double> scales,
                                 const ShootingConfig& cfg) {
  return sweep(model, history, direction, scales, cfg, true);
}

ValidationTable validation_sweep_serial(const AugmentedDynamics& model, const StmHistory& history,
                                        const Vec6& direction, std::span<const double> scales,
                                        const ShootingConfig& cfg) {
  return sweep(model, history, direction, scales, cfg, false);
}

}  // namespace fpt
