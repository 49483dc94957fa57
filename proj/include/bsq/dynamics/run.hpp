#pragma once
// Full runs: initial data, time loop, diagnostics and run-directory output.
//
// A run directory holds config.json (resolved configuration), diagnostics.csv,
// besov.csv, theta_final.bin / omega_final.bin and, when scheduled,
// snapshots/{theta,omega}_<step>.bin.

#include <filesystem>
#include <optional>
#include <string>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/diagnostics.hpp"
#include "bsq/dynamics/stepper.hpp"
#include "bsq/dynamics/trajectory.hpp"

namespace bsq::dynamics {

SolverState initial_state(const RunConfig& cfg);

// Step sizes from t = 0 to t_end for a fixed-dt configuration; the last one
// is shortened when dt does not divide t_end.
std::size_t fixed_step_count(double dt, double t_end);

struct RunResult {
  Trajectory trajectory;
  std::string besov_csv;
  SolverState final_state;
  std::size_t steps = 0;
};

// Runs cfg to t_end. With out_dir set, artifacts are written there; on a CFL
// or numerical abort the rows recorded so far are still written before the
// exception propagates.
RunResult run(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir = {});

void write_config(const std::filesystem::path& dir, const RunConfig& cfg);
RunConfig read_config(const std::filesystem::path& dir);

}  // namespace bsq::dynamics
