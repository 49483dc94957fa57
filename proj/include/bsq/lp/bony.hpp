#pragma once
// Bony calculus: paraproduct T_f g = sum_{q>=1} S_{q-1} f Delta_q g and
// remainder R(f,g) = sum_{q>=-1} Delta_q f Delta~_q g. Products are formed on
// the physical grid and the sum is dealiased once, so
// fg = T_f g + T_g f + R(f,g) holds to rounding.

#include "bsq/lp/blocks.hpp"
#include "bsq/spectral/field.hpp"

namespace bsq::lp {

ScalarField paraproduct(const ScalarField& f, const ScalarField& g);
ScalarField remainder(const ScalarField& f, const ScalarField& g);
ScalarField paraproduct(const BlockDecomposition& f, const BlockDecomposition& g,
                        const spectral::GridPtr& grid);
ScalarField remainder(const BlockDecomposition& f, const BlockDecomposition& g,
                      const spectral::GridPtr& grid);

struct BonyAdvection {
  // sum_j (T_{d_j theta} u_j + T_{u_j} d_j theta)
  ScalarField t_terms;
  // The two paraproduct families separately.
  ScalarField t_grad_u;  // sum_j T_{d_j theta} u_j
  ScalarField t_u_grad;  // sum_j T_{u_j} d_j theta
  // sum_j d_j R(u_j, theta)
  ScalarField div_r;
  // sum_j R(u_j, d_j theta); equals div_r when div u = 0
  ScalarField r_grad;
};

// Throws std::invalid_argument unless u is divergence-free to 1e-10.
BonyAdvection bony_advection(const spectral::VelocityField& u,
                             const ScalarField& theta);

}  // namespace bsq::lp
