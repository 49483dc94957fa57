#include "bsq/lp/bony.hpp"

#include <stdexcept>

#include "bsq/simd/kernels.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::lp {
namespace {

ScalarField finish(const spectral::GridPtr& grid, const Samples& acc) {
  ScalarField out = spectral::to_spectral(grid, acc);
  out.dealias();
  return out;
}

}  // namespace

ScalarField paraproduct(const BlockDecomposition& f, const BlockDecomposition& g,
                        const spectral::GridPtr& grid) {
  Samples acc(grid->physical_size(), 0.0);
  for (int q = 1; q <= g.q_max(); ++q) simd::multiply_add(f.low(q - 1), g.block(q), acc);
  return finish(grid, acc);
}

ScalarField remainder(const BlockDecomposition& f, const BlockDecomposition& g,
                      const spectral::GridPtr& grid) {
  Samples acc(grid->physical_size(), 0.0);
  for (int q = -1; q <= f.q_max(); ++q) simd::multiply_add(f.block(q), g.tilde(q), acc);
  return finish(grid, acc);
}

ScalarField paraproduct(const ScalarField& f, const ScalarField& g) {
  spectral::require_same_grid(f, g);
  return paraproduct(BlockDecomposition(f), BlockDecomposition(g), f.grid_ptr());
}

ScalarField remainder(const ScalarField& f, const ScalarField& g) {
  spectral::require_same_grid(f, g);
  return remainder(BlockDecomposition(f), BlockDecomposition(g), f.grid_ptr());
}

BonyAdvection bony_advection(const spectral::VelocityField& u,
                             const ScalarField& theta) {
  spectral::require_same_grid(u.u1(), theta);
  if (spectral::divergence_residual(u.u1(), u.u2()) > 1e-10)
    throw std::invalid_argument("Bony advection needs a divergence-free velocity");
  const auto& grid = theta.grid_ptr();
  const BlockDecomposition u1(u.u1()), u2(u.u2()), th(theta);
  const BlockDecomposition d1(spectral::partial(theta, 1));
  const BlockDecomposition d2(spectral::partial(theta, 2));

  BonyAdvection out{ScalarField(grid), paraproduct(d1, u1, grid) + paraproduct(d2, u2, grid),
                    paraproduct(u1, d1, grid) + paraproduct(u2, d2, grid),
                    spectral::partial(remainder(u1, th, grid), 1) +
                        spectral::partial(remainder(u2, th, grid), 2),
                    remainder(u1, d1, grid) + remainder(u2, d2, grid)};
  out.t_terms = out.t_grad_u + out.t_u_grad;
  return out;
}

}  // namespace bsq::lp
