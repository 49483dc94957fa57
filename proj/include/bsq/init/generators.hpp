#pragma once
// Initial-data generators. Every output is real, band-limited (2/3 rule)
// and deterministic in its parameters.

#include <cstdint>

#include <json.hpp>

#include "bsq/spectral/field.hpp"

namespace bsq::init {

using spectral::GridPtr;
using spectral::ScalarField;

// Periodised Gaussian A exp(-|x - c|^2 / (2 w^2)), images within two cells.
ScalarField gaussian_bump(const GridPtr& grid, double cx, double cy, double width,
                          double amplitude);

// Smoothed indicator of the disc |x - c| < radius (minimal-image distance):
// A/2 (1 - erf((d - radius) / s)), with the 2%..98% rise spanning
// `transition`. Values lie in [0, A] before band limiting. No mean
// correction.
ScalarField vortex_patch(const GridPtr& grid, double cx, double cy, double radius,
                         double transition, double amplitude);

// Random coefficients on every retained mode whose out-of-band dyadic
// multipliers vanish, so Delta_q f = 0 exactly for q outside [q_lo, q_hi].
// Scaled to max |f| = amplitude on the grid. Throws std::invalid_argument if
// the band leaves [-1, q_max] or contains no mode.
ScalarField random_band_limited(const GridPtr& grid, std::uint64_t seed, int q_lo,
                                int q_hi, double amplitude);

// A sin(k.x) or A cos(k.x).
ScalarField single_mode(const GridPtr& grid, int k1, int k2, double amplitude,
                        bool cosine);

enum class Role { Temperature, Vorticity };

// Builds a field from a tagged descriptor ({"kind": ...}). Vorticity fields
// have their mean removed, and a patch may then be rescaled so that its grid
// maximum equals "target_linf". Errors are std::invalid_argument naming the
// offending key.
ScalarField from_descriptor(const nlohmann::json& desc, const GridPtr& grid, Role role,
                            std::uint64_t default_seed);

}  // namespace bsq::init
