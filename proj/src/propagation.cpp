#include "fpt/propagation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fpt/error.hpp"

namespace fpt {
namespace {

constexpr std::size_t kStmSize = 144;
constexpr std::size_t kGramSize = 78;  // upper triangle of a 12x12 block
constexpr double kReferenceCostateBound = 1e-15;

using ConstMap12 = Eigen::Map<const Mat12>;
using Map12 = Eigen::Map<Mat12>;

void pack_upper(const Mat12& m, std::span<double> out) {
  std::size_t k = 0;
  for (int j = 0; j < 12; ++j)
    for (int i = 0; i <= j; ++i) out[k++] = m(i, j);
}

Mat12 unpack_upper(std::span<const double> in) {
  Mat12 m;
  std::size_t k = 0;
  for (int j = 0; j < 12; ++j)
    for (int i = 0; i <= j; ++i) {
      m(i, j) = in[k];
      m(j, i) = in[k];
      ++k;
    }
  return m;
}

}  // namespace

std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
  std::vector<double> times(n);
  if (n == 0) return times;
  if (n == 1) {
    times[0] = t1;
    return times;
  }
  for (std::size_t i = 0; i < n; ++i) {
    times[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  times.back() = t1;
  return times;
}

State6 propagate_state(const NaturalDynamics& dynamics, const State6& state0, double t0, double t1,
                       const IntegratorConfig& cfg) {
  std::vector<double> y(state0.data(), state0.data() + 6);
  if (t0 == t1) return state0;
  const OdeRhs rhs = [&dynamics](double, std::span<const double> s, std::span<double> ds) {
    Eigen::Map<Vec6>(ds.data()) = dynamics.field(Eigen::Map<const Vec6>(s.data()));
  };
  integrate_dop853(rhs, y, t0, t1, cfg);
  return Eigen::Map<const Vec6>(y.data());
}

State6 propagate_state(const State6& state0, double t0, double t1, const SystemParams& params,
                       const IntegratorConfig& cfg) {
  return propagate_state(Cr3bp(params), state0, t0, t1, cfg);
}

AugmentedPropagation propagate_augmented(const AugmentedDynamics& model, const AugmentedState& y0,
                                         double t0, double t1, const IntegratorConfig& cfg,
                                         const AugmentedOptions& options) {
  // Layout: [y(12), cost(1), Phi(144, column-major)?]
  const std::size_t dim = 13 + (options.with_stm ? kStmSize : 0);
  std::vector<double> s(dim, 0.0);
  Eigen::Map<Vec12>(s.data()) = y0.stacked();
  if (options.with_stm) Map12(s.data() + 13) = Mat12::Identity();

  const OdeRhs rhs = [&model, with_stm = options.with_stm](double, std::span<const double> x,
                                                          std::span<double> dx) {
    const Vec12 y = Eigen::Map<const Vec12>(x.data());
    Eigen::Map<Vec12>(dx.data()) = model.field(y);
    dx[12] = 0.5 * y.tail<3>().squaredNorm();
    if (with_stm) {
      Map12(dx.data() + 13).noalias() = model.jacobian(y) * ConstMap12(x.data() + 13);
    }
  };

  AugmentedPropagation out;
  const auto times = uniform_times(t0, t1, std::max<std::size_t>(options.n_checkpoints, 1));
  const OdeObserver observer = [&out](std::size_t, double t, std::span<const double> x) {
    out.checkpoints.push_back(
        {t, AugmentedState(Vec12(Eigen::Map<const Vec12>(x.data()))), x[12]});
  };
  if (t0 != t1 || options.n_checkpoints > 0) {
    out.stats = integrate_dop853(rhs, s, t0, times, cfg,
                                 options.n_checkpoints > 0 ? observer : OdeObserver{});
  }
  out.y = AugmentedState(Vec12(Eigen::Map<const Vec12>(s.data())));
  out.cost = s[12];
  if (options.with_stm) out.stm = ConstMap12(s.data() + 13);
  return out;
}

StmHistory::StmHistory(ReferenceOrbit orbit, CostateConvention convention, IntegratorConfig cfg,
                       std::vector<StmRecord> records)
    : orbit_(std::move(orbit)), convention_(convention), cfg_(cfg), records_(std::move(records)) {
  if (records_.size() < 2) throw ConfigError("STM history needs at least two records");
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (!(records_[i].t > records_[i - 1].t)) {
      throw ConfigError("STM history times must be strictly increasing");
    }
  }
}

bool StmHistory::operator==(const StmHistory& other) const {
  if (records_.size() != other.records_.size()) return false;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& a = records_[i];
    const auto& b = other.records_[i];
    if (a.t != b.t || a.y.stacked() != b.y.stacked() || a.stm != b.stm || a.gram != b.gram) {
      return false;
    }
  }
  return orbit_.initial_state == other.orbit_.initial_state &&
         orbit_.period == other.orbit_.period && convention_ == other.convention_;
}

StmHistory build_stm_history(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                             const State6& start, double t0, double t1, std::size_t n_checkpoints,
                             const IntegratorConfig& cfg) {
  if (n_checkpoints < 2) throw ConfigError("n_checkpoints must be at least 2");

  // Layout: [y(12), Phi(144, column-major), G upper(78)]
  constexpr std::size_t kDim = 12 + kStmSize + kGramSize;
  std::vector<double> s(kDim, 0.0);
  Eigen::Map<Vec6>(s.data()) = start;
  Map12(s.data() + 12) = Mat12::Identity();

  const OdeRhs rhs = [&model](double, std::span<const double> x, std::span<double> dx) {
    const Vec12 y = Eigen::Map<const Vec12>(x.data());
    const ConstMap12 phi(x.data() + 12);
    Eigen::Map<Vec12>(dx.data()) = model.field(y);
    Map12(dx.data() + 12).noalias() = model.jacobian(y) * phi;
    const Eigen::Matrix<double, 3, 12> lv = phi.bottomRows<3>();
    const Mat12 integrand = lv.transpose() * lv;
    pack_upper(integrand, dx.subspan(12 + kStmSize));
  };

  std::vector<StmRecord> records;
  records.reserve(n_checkpoints);
  const auto times = uniform_times(t0, t1, n_checkpoints);
  const OdeObserver observer = [&](std::size_t, double t, std::span<const double> x) {
    StmRecord rec;
    rec.t = t;
    rec.y = AugmentedState(Vec12(Eigen::Map<const Vec12>(x.data())));
    if (rec.y.costate.norm() >= kReferenceCostateBound) {
      throw NumericalError(fmt::format(
          "orbit '{}': reference costate drifted to {} at t = {}", orbit.name,
          rec.y.costate.norm(), t));
    }
    rec.stm = ConstMap12(x.data() + 12);
    rec.gram = unpack_upper(x.subspan(12 + kStmSize));
    records.push_back(std::move(rec));
  };
  integrate_dop853(rhs, s, t0, times, cfg, observer);
  return StmHistory(orbit, model.convention(), cfg, std::move(records));
}

StmHistory build_stm_history(const AugmentedDynamics& model, const ReferenceOrbit& orbit,
                             std::size_t n_checkpoints, const IntegratorConfig& cfg, double t0) {
  orbit.validate();
  return build_stm_history(model, orbit, orbit.initial_state, t0, t0 + orbit.period,
                           n_checkpoints, cfg);
}

}  // namespace fpt
