#pragma once
// Exact spectral calculus on the torus. All functions are pure.

#include <limits>
#include <span>

#include "bsq/spectral/field.hpp"

namespace bsq::spectral {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

Samples to_physical(const ScalarField& f);
ScalarField to_spectral(const GridPtr& grid, std::span<const double> samples);

// Axis is 1 or 2.
ScalarField partial(const ScalarField& f, int axis);
ScalarField laplacian(const ScalarField& f);
// Mode k scaled by exp(-lambda |k|^2); lambda is diffusion time times kappa.
ScalarField heat_semigroup(const ScalarField& f, double lambda);

// u = grad^perp Delta^{-1} omega with grad^perp = (-d2, d1). Throws
// std::invalid_argument when omega has a non-zero mean.
VelocityField biot_savart(const ScalarField& omega);
ScalarField curl(const VectorField& v);
ScalarField curl(const VelocityField& u);
ScalarField divergence(const VectorField& v);
// Orthogonal projection onto divergence-free pairs. The k = 0 mode (a
// constant vector) is kept.
VelocityField leray_project(const VectorField& v);

// u.grad f, products on the physical grid, result dealiased.
ScalarField advect(const VelocityField& u, const ScalarField& f);
// Pointwise product, dealiased.
ScalarField product(const ScalarField& a, const ScalarField& b);

// Uniform-grid quadrature of |f|^p over [0, 2pi)^2; p = kInfinity is the grid
// maximum. Spectrally accurate for band-limited integrands.
double lp_norm(const ScalarField& f, double p);
double lp_norm_samples(std::span<const double> f, int n, double p);
// Pointwise Euclidean magnitude of a vector field.
double lp_norm(const VelocityField& u, double p);
double lp_norm(const VectorField& v, double p);
double lp_norm_samples(std::span<const double> a, std::span<const double> b,
                       int n, double p);
// Pointwise Frobenius norm of grad u.
double grad_lp_norm(const VelocityField& u, double p);
// Pointwise Euclidean norm of grad f.
double grad_lp_norm(const ScalarField& f, double p);

// Parseval forms.
double l2_norm_spectral(const ScalarField& f);
double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_inner(const VelocityField& a, const VelocityField& b);
// sqrt(||f||^2 + ||grad f||^2)
double h1_norm(const ScalarField& f);

// theta e2 - P_dealias(u.grad u), before the Leray projection.
VectorField momentum_tendency_unprojected(const ScalarField& theta,
                                          const VelocityField& u);
// Solves Delta Pi = div(theta e2 - u.grad u); zero mean.
ScalarField recover_pressure(const ScalarField& theta, const VelocityField& u);
VectorField gradient(const ScalarField& f);

}  // namespace bsq::spectral
