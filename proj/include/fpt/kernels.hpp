#pragma once

/// \file kernels.hpp
/// \brief Batch kernels over many boundary samples.
///
/// Each kernel has an OpenMP version and a serial reference with identical
/// results; tests compare the two bit-for-bit and bench/ times them. Output
/// order always follows input order.

#include <cstddef>
#include <span>
#include <vector>

#include "fpt/reachability.hpp"

namespace fpt::kernels {

/// Linear trajectories for every sample (dx0 = dxf = sample).
std::vector<LinearTrajectory> propagate_samples(const LinearBvp& bvp, std::span<const Vec6> samples,
                                                std::size_t stride);
std::vector<LinearTrajectory> propagate_samples_serial(const LinearBvp& bvp,
                                                       std::span<const Vec6> samples,
                                                       std::size_t stride);

/// E* cost of every sample.
std::vector<double> sample_costs(const EStarForm& form, std::span<const Vec6> samples);
std::vector<double> sample_costs_serial(const EStarForm& form, std::span<const Vec6> samples);

/// Per-checkpoint envelope over all samples: max and min of |d r| and the
/// largest |dx|, |dy|, |dz|. Used for reachable-set shape summaries.
struct PositionEnvelope {
  std::vector<double> t;
  std::vector<double> max_position;
  std::vector<double> min_position;
  std::vector<Vec3> max_abs;
};

PositionEnvelope position_envelope(const LinearBvp& bvp, std::span<const Vec6> samples);
PositionEnvelope position_envelope_serial(const LinearBvp& bvp, std::span<const Vec6> samples);

int max_threads();

}  // namespace fpt::kernels
