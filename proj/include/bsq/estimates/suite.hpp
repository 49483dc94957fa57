#pragma once
// The full verification suite and cross-resolution comparison.

#include <string>
#include <vector>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/trajectory.hpp"
#include "bsq/estimates/report.hpp"

namespace bsq::estimates {

struct SuiteOptions {
  std::size_t sample_count = 100;  // random band-limited samples; 0 skips them
  std::uint64_t sample_seed = 2024;
  bool operator_checks = true;     // exactness, heat appendix, sigma
};

std::vector<EstimateReport> full_suite(const dynamics::RunConfig& cfg,
                                       const dynamics::Trajectory& traj,
                                       const SuiteOptions& options = {});

inline constexpr double kStabilityLimit = 0.25;

// (max - min) / max |c| over the constants; 0 when all are zero.
double relative_variation(const std::vector<double>& constants);

struct StabilityRow {
  std::string name;
  std::vector<double> constants;  // one per run, in input order
  double variation = 0.0;
  bool pass = false;  // every constant finite and below 10, variation < limit
};

// Empirical trajectory reports matched by name across runs.
std::vector<StabilityRow> stability_table(const std::vector<std::vector<EstimateReport>>& runs,
                                          double limit = kStabilityLimit);
json stability_to_json(const std::vector<StabilityRow>& rows);
std::string stability_summary(const std::vector<StabilityRow>& rows);

}  // namespace bsq::estimates
