#include "bsq/spectral/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bsq/simd/kernels.hpp"

namespace bsq::spectral {

ScalarField::ScalarField(GridPtr grid)
    : grid_(std::move(grid)), coeffs_(grid_->spectral_size(), cplx{}) {}

double ScalarField::max_coefficient() const noexcept {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool ScalarField::all_finite() const noexcept {
  for (const cplx& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

void ScalarField::dealias() { simd::scale_real(coeffs_, grid_->dealias_mask()); }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid_ptr() != b.grid_ptr() && a.grid().n() != b.grid().n())
    throw std::invalid_argument("fields live on different grids");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  return add_scaled(1.0, o);
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  return add_scaled(-1.0, o);
}

ScalarField& ScalarField::operator*=(double a) {
  for (cplx& c : coeffs_) c *= a;
  return *this;
}

ScalarField& ScalarField::add_scaled(double a, const ScalarField& o) {
  require_same_grid(*this, o);
  simd::axpy(a, std::span<const cplx>(o.coeffs_), std::span<cplx>(coeffs_));
  return *this;
}

double divergence_residual(const ScalarField& u1, const ScalarField& u2) {
  require_same_grid(u1, u2);
  const Grid& g = u1.grid();
  const auto d1 = g.deriv1();
  const auto d2 = g.deriv2();
  const auto a = u1.coefficients();
  const auto b = u2.coefficients();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(d1[i] * a[i] + d2[i] * b[i]));
  const double scale =
      std::max(u1.max_coefficient(), u2.max_coefficient()) * (g.n() / 2);
  return scale > 0.0 ? worst / scale : worst;
}

VelocityField VelocityField::from_components(ScalarField u1, ScalarField u2,
                                             double rel_tol) {
  const double r = divergence_residual(u1, u2);
  if (!(r <= rel_tol))
    throw std::invalid_argument("velocity is not divergence-free (relative residual " +
                                std::to_string(r) + ")");
  return VelocityField(std::move(u1), std::move(u2));
}

VelocityField VelocityField::zero(GridPtr grid) {
  ScalarField z(std::move(grid));
  return VelocityField(z, z);
}

VelocityField& VelocityField::operator+=(const VelocityField& o) {
  u1_ += o.u1_;
  u2_ += o.u2_;
  return *this;
}

VelocityField& VelocityField::operator-=(const VelocityField& o) {
  u1_ -= o.u1_;
  u2_ -= o.u2_;
  return *this;
}

VelocityField& VelocityField::operator*=(double a) {
  u1_ *= a;
  u2_ *= a;
  return *this;
}

}  // namespace bsq::spectral
