#include "fpt/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "fpt/bvp.hpp"
#include "fpt/error.hpp"
#include "fpt/io/csv.hpp"
#include "fpt/io/stm_cache.hpp"
#include "fpt/kernels.hpp"
#include "fpt/reachability.hpp"

namespace fpt::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::vector<std::string> kStateCols = {"dx", "dy", "dz", "dvx", "dvy", "dvz"};
const std::vector<std::string> kStateColsSi = {"dx_km",   "dy_km",   "dz_km",
                                               "dvx_km_s", "dvy_km_s", "dvz_km_s"};

std::vector<std::string> header(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> h;
  for (const auto& p : parts) h.insert(h.end(), p.begin(), p.end());
  return h;
}

Vec6 to_si(const Vec6& dx, const io::UnitSystem& units) {
  Vec6 out;
  for (int i = 0; i < 3; ++i) out(i) = units.length_to_km(dx(i));
  for (int i = 3; i < 6; ++i) out(i) = units.velocity_to_km_s(dx(i));
  return out;
}

// Everything a command needs about the selected orbit.
struct Pipeline {
  io::OrbitCatalogEntry entry;
  ReferenceOrbit orbit;
  std::shared_ptr<const AugmentedDynamics> model;
};

Pipeline prepare(const io::RunConfig& config) {
  config.validate();
  Pipeline p;
  p.entry = config.resolve_orbit();
  p.orbit = p.entry.to_orbit();
  p.model = std::make_shared<const AugmentedDynamics>(
      make_cr3bp_model(p.orbit.params, config.convention));
  return p;
}

StmHistory obtain_history(const io::RunConfig& config, const Pipeline& p, std::ostream& log) {
  if (config.stm_cache) {
    const auto key =
        io::stm_cache_key(p.orbit, config.n_checkpoints, config.integrator, config.convention);
    const auto file = io::stm_cache_file(*config.stm_cache, key);
    if (auto cached = io::load_stm_history(file, key, p.orbit, config.convention,
                                           config.integrator)) {
      fmt::print(log, "stm cache hit: {}\n", file.string());
      return std::move(*cached);
    }
    auto history = build_stm_history(*p.model, p.orbit, config.n_checkpoints, config.integrator);
    fs::create_directories(*config.stm_cache);
    io::save_stm_history(file, key, history);
    fmt::print(log, "stm cache stored: {}\n", file.string());
    return history;
  }
  return build_stm_history(*p.model, p.orbit, config.n_checkpoints, config.integrator);
}

double resolve_j_star(const io::RunConfig& config, const Pipeline& p) {
  return config.thrust.j_star_for(p.orbit.period, p.entry.units);
}

fs::path output_file(const io::RunConfig& config, const char* name) {
  fs::create_directories(config.output_dir);
  return config.output_dir / name;
}

void print_table(std::ostream& out, const ReachableSet& set) {
  fmt::print(out, "{:>4} {:>14} {:>14}  {}\n", "axis", "extent", "gamma", "direction");
  for (int i = 0; i < 6; ++i) {
    const auto& w = set.form.eigenvectors.col(i);
    const std::string extent =
        set.unbounded[i] ? std::string("inf") : fmt::format("{:.8f}", set.extents(i));
    fmt::print(out, "{:>4} {:>14} {:>14.6e}  [{:+.5f} {:+.5f} {:+.5f} {:+.5f} {:+.5f} {:+.5f}]\n",
               i + 1, extent, set.form.eigenvalues(i), w(0), w(1), w(2), w(3), w(4), w(5));
  }
}

}  // namespace

int cmd_orbit_check(const io::RunConfig& config, std::ostream& out, std::ostream& log) {
  const Pipeline p = prepare(config);
  ClosureReport report = closure_error(p.model->natural(), p.orbit, config.integrator);
  const bool within = report.position_error <= config.closure_bound;
  double inherent = std::nan("");
  if (within) {
    report = check_closure(*p.model, p.orbit, config.shooting);
    inherent = report.inherent_cost;
  }

  io::CsvWriter csv(output_file(config, "closure.csv"),
                    {"orbit", "position_error", "velocity_error", "inherent_cost", "iterations",
                     "within_bound"});
  csv.row(p.orbit.name, report.position_error, report.velocity_error, inherent,
          report.shooting_iterations, within ? 1 : 0);
  csv.commit();

  fmt::print(out, "orbit            {}\n", p.orbit.name);
  fmt::print(out, "position error   {:.6e} DU\n", report.position_error);
  fmt::print(out, "velocity error   {:.6e} DU/TU\n", report.velocity_error);
  if (!within) {
    fmt::print(log, "error: orbit '{}' does not close: position error {:.3e} DU > bound {:.3e} DU\n",
               p.orbit.name, report.position_error, config.closure_bound);
    return kExitThreshold;
  }
  fmt::print(out, "inherent cost    {:.6e} DU^2/TU^3 ({} Newton iterations)\n", inherent,
             report.shooting_iterations);
  return kExitOk;
}

int cmd_reachable(const io::RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto start = Clock::now();
  const Pipeline p = prepare(config);
  const double j_star = resolve_j_star(config, p);
  const StmHistory history = obtain_history(config, p, log);
  const LinearBvp bvp(history);
  const EStarForm form = assemble_e_star(bvp.e_form());
  const ReachableSet set = reachable_set(form, j_star);
  if (form.degenerate) {
    fmt::print(log, "warning: {} near-zero eigenvalues in E*\n", form.near_zero_count);
  }
  const io::UnitSystem& units = p.entry.units;

  // Table rows are listed largest extent first, i.e. ascending eigenvalue.
  {
    auto h = header({{"axis", "extent", "gamma", "unbounded"},
                     {"w_x", "w_y", "w_z", "w_vx", "w_vy", "w_vz"}});
    if (config.si_columns) {
      h = header({h, {"a_x_km", "a_y_km", "a_z_km", "a_vx_km_s", "a_vy_km_s", "a_vz_km_s"}});
    }
    io::CsvWriter csv(output_file(config, "eigenstructure.csv"), h);
    for (int i = 0; i < 6; ++i) {
      const Vec6 w = form.eigenvectors.col(i);
      if (config.si_columns) {
        const Vec6 a = set.unbounded[i] ? Vec6::Constant(std::numeric_limits<double>::infinity())
                                        : to_si(set.semi_axes[i], units);
        csv.row(i + 1, set.extents(i), form.eigenvalues(i), set.unbounded[i] ? 1 : 0, w, a);
      } else {
        csv.row(i + 1, set.extents(i), form.eigenvalues(i), set.unbounded[i] ? 1 : 0, w);
      }
    }
    csv.commit();
  }

  const std::vector<Vec6> samples = sample_boundary(set, config.n_samples, config.seed);
  const std::vector<double> costs = kernels::sample_costs(form, samples);
  {
    auto h = header({{"sample"}, kStateCols, {"cost"}});
    if (config.si_columns) h = header({h, kStateColsSi});
    io::CsvWriter csv(output_file(config, "samples.csv"), h);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (config.si_columns) {
        csv.row(i, samples[i], costs[i], to_si(samples[i], units));
      } else {
        csv.row(i, samples[i], costs[i]);
      }
    }
    csv.commit();
  }

  const std::size_t n_traj = std::min(samples.size(), config.trajectory_samples);
  const auto trajectories = kernels::propagate_samples(
      bvp, std::span<const Vec6>(samples.data(), n_traj), config.trajectory_stride);
  {
    auto h = header({{"sample", "t"}, kStateCols, {"u_norm"}});
    if (config.si_columns) h = header({h, {"t_s"}, kStateColsSi, {"u_norm_m_s2"}});
    io::CsvWriter csv(output_file(config, "trajectories.csv"), h);
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
      const auto& tr = trajectories[i];
      for (std::size_t k = 0; k < tr.t.size(); ++k) {
        if (config.si_columns) {
          csv.row(i, tr.t[k], tr.dx[k], tr.thrust[k], units.time_to_s(tr.t[k]),
                  to_si(tr.dx[k], units), tr.thrust[k] * units.accel_si_per_canonical());
        } else {
          csv.row(i, tr.t[k], tr.dx[k], tr.thrust[k]);
        }
      }
    }
    csv.commit();
  }

  {
    io::CsvWriter csv(output_file(config, "envelope.csv"),
                      {"t", "max_position", "min_position", "max_abs_dx", "max_abs_dy",
                       "max_abs_dz"});
    if (!samples.empty()) {
      const auto env = kernels::position_envelope(bvp, samples);
      for (std::size_t k = 0; k < env.t.size(); ++k) {
        csv.row(env.t[k], env.max_position[k], env.min_position[k], env.max_abs[k](0),
                env.max_abs[k](1), env.max_abs[k](2));
      }
    }
    csv.commit();
  }

  fmt::print(out, "orbit {}  convention {}  J* = {:.6e} DU^2/TU^3\n", p.orbit.name,
             to_string(config.convention), j_star);
  print_table(out, set);
  fmt::print(out, "{} samples, {} trajectories written to {} ({:.2f} s)\n", samples.size(),
             trajectories.size(), config.output_dir.string(), seconds_since(start));
  return kExitOk;
}

int cmd_validate(const io::RunConfig& config, std::ostream& out, std::ostream& log) {
  const Pipeline p = prepare(config);
  const double j_star = resolve_j_star(config, p);
  const StmHistory history = obtain_history(config, p, log);
  const EStarForm form = assemble_e_star(assemble_e(history));
  const Vec6 direction = form.eigenvectors.col(config.validate_spec.direction - 1);

  std::vector<double> scales;
  if (config.validate_spec.scales) {
    scales = *config.validate_spec.scales;
  } else {
    const double lo = config.validate_spec.cost_min;
    const double hi = config.validate_spec.cost_max.value_or(j_star);
    const std::size_t n = config.validate_spec.points;
    if (n > 0 && !(lo > 0.0 && hi >= lo)) {
      throw ConfigError(fmt::format("validate cost range [{}, {}] is invalid", lo, hi));
    }
    std::vector<double> costs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double f = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      costs[i] = n == 1 ? hi : lo * std::pow(hi / lo, f);
    }
    scales = scales_for_costs(form, direction, costs);
  }

  io::CsvWriter csv(output_file(config, "validation.csv"),
                    {"scale", "linear_cost", "true_cost", "abs_error", "rel_error", "trusted",
                     "converged", "iterations"});
  if (scales.empty()) {
    csv.commit();
    fmt::print(out, "empty scale list; nothing to validate\n");
    return kExitOk;
  }

  const ValidationTable table =
      validation_sweep(*p.model, history, direction, scales, config.shooting);
  fmt::print(out, "inherent cost {:.6e} DU^2/TU^3, trust floor {:.6e}\n", table.inherent_cost,
             kInherentTrustFactor * table.inherent_cost);
  fmt::print(out, "{:>14} {:>14} {:>14} {:>11} {:>7}\n", "scale", "linear", "true", "rel_err",
             "trusted");
  for (const auto& row : table.rows) {
    csv.row(row.scale, row.linear_cost, row.true_cost, row.abs_error, row.rel_error,
            row.trusted ? 1 : 0, row.converged ? 1 : 0, row.iterations);
    if (!row.converged) {
      fmt::print(log, "warning: scale {:.6e} did not converge: {}\n", row.scale, row.failure);
    }
    fmt::print(out, "{:>14.6e} {:>14.6e} {:>14.6e} {:>11.3e} {:>7}\n", row.scale, row.linear_cost,
               row.true_cost, row.rel_error, row.trusted ? "yes" : "no");
  }
  csv.commit();
  return kExitOk;
}

int cmd_eigentrajectories(const io::RunConfig& config, std::ostream& out, std::ostream& log) {
  const Pipeline p = prepare(config);
  const double j_star = resolve_j_star(config, p);
  const StmHistory history = obtain_history(config, p, log);
  const LinearBvp bvp(history);
  const ReachableSet set = reachable_set(assemble_e_star(bvp.e_form()), j_star);
  const io::UnitSystem& units = p.entry.units;

  auto traj_h = header({{"eigvec", "t"}, kStateCols});
  auto thrust_h = header({{"eigvec", "t", "u_norm"}});
  if (config.si_columns) {
    traj_h = header({traj_h, {"t_s"}, kStateColsSi});
    thrust_h = header({thrust_h, {"t_s", "u_norm_m_s2"}});
  }
  io::CsvWriter traj_csv(output_file(config, "eigen_trajectories.csv"), traj_h);
  io::CsvWriter thrust_csv(output_file(config, "thrust_history.csv"), thrust_h);

  for (int i = 0; i < 6; ++i) {
    if (set.unbounded[i]) {
      fmt::print(log, "note: eigenvector {} has a near-zero eigenvalue; skipped\n", i + 1);
      continue;
    }
    const LinearTrajectory tr = bvp.propagate(set.semi_axes[i], set.semi_axes[i]);
    double peak = 0.0;
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      peak = std::max(peak, tr.thrust[k]);
      if (config.si_columns) {
        traj_csv.row(i + 1, tr.t[k], tr.dx[k], units.time_to_s(tr.t[k]), to_si(tr.dx[k], units));
        thrust_csv.row(i + 1, tr.t[k], tr.thrust[k], units.time_to_s(tr.t[k]),
                       tr.thrust[k] * units.accel_si_per_canonical());
      } else {
        traj_csv.row(i + 1, tr.t[k], tr.dx[k]);
        thrust_csv.row(i + 1, tr.t[k], tr.thrust[k]);
      }
    }
    fmt::print(out, "eigenvector {}: extent {:.8f}, closure {:.3e}, cost {:.6e}, peak |u| {:.6e}\n",
               i + 1, set.extents(i), (tr.dx.back() - tr.dx.front()).norm(), tr.cost, peak);
  }
  traj_csv.commit();
  thrust_csv.commit();
  return kExitOk;
}

}  // namespace fpt::cli
