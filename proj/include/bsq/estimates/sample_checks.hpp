#pragma once
// Estimates on individual fields rather than trajectories: random
// band-limited samples, the operator exactness checks, the heat-block
// appendix and the stationary whole-plane flows.

#include <cstdint>
#include <vector>

#include "bsq/dynamics/config.hpp"
#include "bsq/estimates/report.hpp"
#include "bsq/spectral/field.hpp"

namespace bsq::estimates {

using spectral::GridPtr;
using spectral::ScalarField;

struct FieldSample {
  ScalarField theta;
  ScalarField omega;  // zero mean
};

// Deterministic random band-limited pairs with bands cycling over [-1, q_max].
std::vector<FieldSample> random_samples(const GridPtr& grid, std::size_t count,
                                        std::uint64_t seed);

std::vector<EstimateReport> check_biot_savart_samples(const std::vector<FieldSample>& samples,
                                                      const std::vector<double>& p_grid);
// Both interpolation inequalities plus the frequency-split balance of the
// proof: with 4^N closest to ||theta||_{B^1_{inf,1}} / ||theta||_{L2}, the
// low and high parts of the bound agree within a factor 4.
std::vector<EstimateReport> check_interpolation_samples(const std::vector<FieldSample>& samples);
EstimateReport check_velocity_besov_samples(const std::vector<FieldSample>& samples);

// Closed-form forced heat flow d_t theta - kappa Lap theta = f with f
// independent of time.
ScalarField forced_heat(const ScalarField& theta0, const ScalarField& f, double kappa, double t);

// Maximum principle for the low block and the block decay fits.
std::vector<EstimateReport> check_heat_block_appendix(const GridPtr& grid, std::uint64_t seed);

// Operator exactness: Biot-Savart single modes, Bony identity, partition
// of unity, L2 heat floor, Parseval. Identity class at 1e-10.
inline constexpr double kExactnessTolerance = 1e-10;
std::vector<EstimateReport> exactness_reports(const GridPtr& grid, std::uint64_t seed);

// Stationary flows: divergence, transport-curl, far field, mass.
std::vector<EstimateReport> sigma_reports(std::size_t points = 64, double h = 1e-4);

}  // namespace bsq::estimates
