#pragma once
// Estimates evaluated from recorded diagnostic channels. Each check is a
// pure fold over the trajectory and throws MissingChannels when a channel it
// reads is absent.

#include <vector>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/trajectory.hpp"
#include "bsq/estimates/report.hpp"

namespace bsq::estimates {

using dynamics::RunConfig;
using dynamics::Trajectory;

inline constexpr double kIdentityTolerance = 1e-5;
inline constexpr double kDerivativeTolerance = 1e-4;

// d/dt of a sampled series: centered three-point formula inside, second
// order one-sided at the ends; spacing may vary.
std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& y);

EstimateReport check_energy_identity(const RunConfig& cfg, const Trajectory& tr);
EstimateReport check_velocity_l2(const RunConfig& cfg, const Trajectory& tr);
std::vector<EstimateReport> check_vorticity_transport(const RunConfig& cfg, const Trajectory& tr);
std::vector<EstimateReport> check_biot_savart_constant(const RunConfig& cfg, const Trajectory& tr);
std::vector<EstimateReport> check_interpolations(const RunConfig& cfg, const Trajectory& tr);
EstimateReport check_velocity_besov(const RunConfig& cfg, const Trajectory& tr);
// para2 plus the remainder-divergence, remainder and paraproduct pieces.
std::vector<EstimateReport> check_advection_besov(const RunConfig& cfg, const Trajectory& tr);
std::vector<EstimateReport> check_smoothing(const RunConfig& cfg, const Trajectory& tr);
// Gronwall bound for Theta and the intermediate vorticity bound.
std::vector<EstimateReport> check_gronwall_chain(const RunConfig& cfg, const Trajectory& tr);
std::vector<EstimateReport> check_vishik_propagation(const RunConfig& cfg, const Trajectory& tr);
EstimateReport check_yudovich(const RunConfig& cfg, const Trajectory& tr);
// Two differential identities and the e^{2t} growth bound.
std::vector<EstimateReport> check_benard_energy(const RunConfig& cfg, const Trajectory& tr);

// Every check that applies to the configuration's system and kappa.
std::vector<EstimateReport> trajectory_reports(const RunConfig& cfg, const Trajectory& tr);

// Smallest C with lhs <= C (f + a g) exp(C^2 b g), found by bisection;
// infinity if none below 1e6.
double smallest_gronwall_constant(double lhs, double f, double a, double b, double g);

}  // namespace bsq::estimates
