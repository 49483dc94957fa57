#pragma once
// Twin runs: two solutions from (theta0, omega0) and (theta0, omega0 +
// delta omega0), advanced in lockstep with identical steps, and the
// stability estimates for their difference.
//
// With X^2 = |dtheta|_2^2 + |du|_2^2, A = ||grad u_1||_L, B = |du|_inf,
// gamma = (1 + |grad theta_1|_inf) / 2 and Gamma = int gamma, the two
// differential inequalities give
//   d/dt X^2 <= 2 p A B^{2/p} (X^2)^{1-1/p} + 2 gamma X^2,
// hence
//   X^2(t) <= e^{2 Gamma} [ X0^{2/p} + 2 int A B^{2/p} e^{-(2/p) Gamma} ]^p.
// The comparison ODE with equality is integrated independently as a check
// on this closed form.

#include <filesystem>
#include <optional>
#include <vector>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/trajectory.hpp"
#include "bsq/estimates/report.hpp"
#include "bsq/spectral/field.hpp"

namespace bsq::estimates {

struct TwinResult {
  dynamics::Trajectory channels;
  std::vector<EstimateReport> reports;
};

// Vorticity perturbation from cfg.twin.perturbation, rescaled so that its
// velocity has sup norm equal to the descriptor's "amplitude".
spectral::ScalarField twin_perturbation(const dynamics::RunConfig& cfg,
                                        const spectral::GridPtr& grid);

// partner: configuration of the second run; it must agree with cfg on every
// numerical parameter (ConfigError otherwise). Defaults to cfg.
TwinResult run_twin(const dynamics::RunConfig& cfg,
                    const std::optional<dynamics::RunConfig>& partner = {},
                    const std::optional<std::filesystem::path>& out_dir = {});

// Closed-form bound and comparison-ODE solution for one p, on coefficient
// series sampled at t (linearly interpolated in between).
struct TwinBound {
  std::vector<double> bound;
  std::vector<double> oracle;
};
TwinBound twin_integrated_bound(const std::vector<double>& t, const std::vector<double>& a,
                                const std::vector<double>& b, const std::vector<double>& gamma,
                                double z0, double p, int substeps = 64);

std::vector<EstimateReport> twin_reports(const dynamics::RunConfig& cfg,
                                         const dynamics::Trajectory& channels);

}  // namespace bsq::estimates
