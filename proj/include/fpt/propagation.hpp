#pragma once

/// \file propagation.hpp
/// \brief Trajectory, augmented-state and variational propagation.
///
/// The variational system carries the 12x12 augmented STM together with the
/// running cost Gram integral
///
///   G(t) = int_{t0}^{t} Phi_{lambda_v,y}(s)^T Phi_{lambda_v,y}(s) ds,
///
/// so that G inherits the integrator's error control instead of being
/// reconstructed by quadrature over checkpoints.

#include <cstddef>
#include <vector>

#include "fpt/dop853.hpp"
#include "fpt/dynamics.hpp"
#include "fpt/types.hpp"

namespace fpt {

State6 propagate_state(const NaturalDynamics& dynamics, const State6& state0, double t0, double t1,
                       const IntegratorConfig& cfg);
State6 propagate_state(const State6& state0, double t0, double t1, const SystemParams& params,
                       const IntegratorConfig& cfg);

struct AugmentedSample {
  double t = 0.0;
  AugmentedState y;
  double cost = 0.0;  // accumulated 1/2 int |lambda_v|^2 up to t
};

struct AugmentedPropagation {
  AugmentedState y;
  double cost = 0.0;  // DU^2/TU^3
  Mat12 stm = Mat12::Identity();  // only filled when requested
  std::vector<AugmentedSample> checkpoints;
  IntegrationStats stats;
};

struct AugmentedOptions {
  bool with_stm = false;
  /// Uniform checkpoints over [t0, t1] including both ends; 0 disables.
  std::size_t n_checkpoints = 0;
};

/// Integrates the augmented system with the control-energy quadrature as one
/// extra ODE component under the same error control.
AugmentedPropagation propagate_augmented(const AugmentedDynamics& model, const AugmentedState& y0,
                                         double t0, double t1, const IntegratorConfig& cfg,
                                         const AugmentedOptions& options = {});

struct StmRecord {
  double t = 0.0;
  AugmentedState y;  // reference, costate identically zero
  Mat12 stm = Mat12::Identity();
  Mat12 gram = Mat12::Zero();
};

/// Checkpointed variational solution along one period of a reference orbit.
/// Immutable once built.
class StmHistory {
 public:
  StmHistory(ReferenceOrbit orbit, CostateConvention convention, IntegratorConfig cfg,
             std::vector<StmRecord> records);

  const ReferenceOrbit& orbit() const { return orbit_; }
  CostateConvention convention() const { return convention_; }
  const IntegratorConfig& integrator() const { return cfg_; }
  const std::vector<StmRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const StmRecord& operator[](std::size_t i) const { return records_[i]; }
  const StmRecord& front() const { return records_.front(); }
  const StmRecord& back() const { return records_.back(); }

  double t0() const { return records_.front().t; }
  double tf() const { return records_.back().t; }

  bool operator==(const StmHistory& other) const;

 private:
  ReferenceOrbit orbit_;
  CostateConvention convention_;
  IntegratorConfig cfg_;
  std::vector<StmRecord> records_;
};

/// Jointly integrates the reference, the 12x12 STM at zero costate and the
/// Gram integral over [t0, t0 + period], recording n_checkpoints uniform
/// samples (n_checkpoints >= 2). The natural dynamics come from `model`, the
/// orbit supplies initial state and period.
StmHistory build_stm_history(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                             std::size_t n_checkpoints, const IntegratorConfig& cfg,
                             double t0 = 0.0);

/// Same as above over an arbitrary span starting from `start` at time t0.
/// Used for STM composition checks from interior times.
StmHistory build_stm_history(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                             const State6& start, double t0, double t1, std::size_t n_checkpoints,
                             const IntegratorConfig& cfg);

/// Uniform grid of n points over [t0, t1], endpoints exact.
std::vector<double> uniform_times(double t0, double t1, std::size_t n);

}  // namespace fpt
