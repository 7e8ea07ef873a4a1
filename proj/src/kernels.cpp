#include "fpt/kernels.hpp"

#include <algorithm>
#include <limits>

#include <omp.h>

namespace fpt::kernels {

int max_threads() { return omp_get_max_threads(); }

std::vector<LinearTrajectory> propagate_samples(const LinearBvp& bvp, std::span<const Vec6> samples,
                                                std::size_t stride) {
  std::vector<LinearTrajectory> out(samples.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = bvp.propagate(samples[i], samples[i], stride);
  }
  return out;
}

std::vector<LinearTrajectory> propagate_samples_serial(const LinearBvp& bvp,
                                                       std::span<const Vec6> samples,
                                                       std::size_t stride) {
  std::vector<LinearTrajectory> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(bvp.propagate(s, s, stride));
  return out;
}

std::vector<double> sample_costs(const EStarForm& form, std::span<const Vec6> samples) {
  std::vector<double> out(samples.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = quadratic_cost(form, samples[i]);
  return out;
}

std::vector<double> sample_costs_serial(const EStarForm& form, std::span<const Vec6> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(quadratic_cost(form, s));
  return out;
}

namespace {

PositionEnvelope empty_envelope(const StmHistory& history) {
  PositionEnvelope env;
  const std::size_t m = history.size();
  env.t.resize(m);
  for (std::size_t k = 0; k < m; ++k) env.t[k] = history[k].t;
  env.max_position.assign(m, 0.0);
  env.min_position.assign(m, std::numeric_limits<double>::infinity());
  env.max_abs.assign(m, Vec3::Zero());
  return env;
}

// Position rows of Phi(t_k) times dy0 for one sample, folded into env.
void fold_sample(const StmHistory& history, const Vec12& dy0, std::vector<double>& max_pos,
                 std::vector<double>& min_pos, std::vector<Vec3>& max_abs) {
  for (std::size_t k = 0; k < history.size(); ++k) {
    const Vec3 dr = history[k].stm.topRows<3>() * dy0;
    const double r = dr.norm();
    max_pos[k] = std::max(max_pos[k], r);
    min_pos[k] = std::min(min_pos[k], r);
    max_abs[k] = max_abs[k].cwiseMax(dr.cwiseAbs());
  }
}

}  // namespace

PositionEnvelope position_envelope(const LinearBvp& bvp, std::span<const Vec6> samples) {
  const auto& history = bvp.history();
  PositionEnvelope env = empty_envelope(history);
  const std::size_t m = history.size();
  const auto n = static_cast<std::ptrdiff_t>(samples.size());

#pragma omp parallel
  {
    std::vector<double> local_max(m, 0.0);
    std::vector<double> local_min(m, std::numeric_limits<double>::infinity());
    std::vector<Vec3> local_abs(m, Vec3::Zero());
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      fold_sample(history, bvp.initial_deviation(samples[i], samples[i]), local_max, local_min,
                  local_abs);
    }
    // max/min are order independent, so the merge is deterministic.
#pragma omp critical
    for (std::size_t k = 0; k < m; ++k) {
      env.max_position[k] = std::max(env.max_position[k], local_max[k]);
      env.min_position[k] = std::min(env.min_position[k], local_min[k]);
      env.max_abs[k] = env.max_abs[k].cwiseMax(local_abs[k]);
    }
  }
  return env;
}

PositionEnvelope position_envelope_serial(const LinearBvp& bvp, std::span<const Vec6> samples) {
  const auto& history = bvp.history();
  PositionEnvelope env = empty_envelope(history);
  for (const auto& s : samples) {
    fold_sample(history, bvp.initial_deviation(s, s), env.max_position, env.min_position,
                env.max_abs);
  }
  return env;
}

}  // namespace fpt::kernels
