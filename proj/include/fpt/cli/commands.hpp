#pragma once

/// \file commands.hpp
/// \brief Subcommands of the `fpt` tool. Each writes its CSV files into the
/// configured output directory and returns a process exit code; pipeline
/// failures propagate as fpt::Error and are mapped by run_cli.

#include <iosfwd>

#include "fpt/io/config.hpp"

namespace fpt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitThreshold = 4,
};

/// closure.csv: orbit,position_error,velocity_error,inherent_cost,iterations,within_bound
int cmd_orbit_check(const io::RunConfig& config, std::ostream& out, std::ostream& log);

/// eigenstructure.csv, samples.csv, trajectories.csv, envelope.csv
int cmd_reachable(const io::RunConfig& config, std::ostream& out, std::ostream& log);

/// validation.csv
int cmd_validate(const io::RunConfig& config, std::ostream& out, std::ostream& log);

/// eigen_trajectories.csv, thrust_history.csv
int cmd_eigentrajectories(const io::RunConfig& config, std::ostream& out, std::ostream& log);

/// Parses arguments, loads the config (flags win over the file) and
/// dispatches. Never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fpt::cli
