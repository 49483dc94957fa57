#pragma once
#include <span>
#include <utility>

#include "bsq/spectral/grid.hpp"

namespace bsq::spectral {

using Samples = AlignedVector<double>;

// Real scalar field on the periodic grid. The half-spectrum coefficients are
// the source of truth; physical samples are computed on demand.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  std::span<cplx> coefficients() noexcept { return coeffs_; }
  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  cplx& at(int k1, int k2) { return coeffs_[grid_->index_of(k1, k2)]; }
  const cplx& at(int k1, int k2) const { return coeffs_[grid_->index_of(k1, k2)]; }

  double mean() const noexcept { return coeffs_[0].real(); }
  // Largest coefficient modulus; used as a scale for relative tolerances.
  double max_coefficient() const noexcept;
  bool all_finite() const noexcept;

  // Zero every mode outside the 2/3-rule mask.
  void dealias();

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
  // this += a * o
  ScalarField& add_scaled(double a, const ScalarField& o);

  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

 private:
  GridPtr grid_;
  AlignedVector<cplx> coeffs_;
};

// Arbitrary pair of scalar fields (e.g. an unprojected momentum tendency).
struct VectorField {
  ScalarField x;
  ScalarField y;
};

// Divergence-free velocity: k1*u1hat + k2*u2hat = 0 on every mode. Only the
// Biot-Savart law, the Leray projector, and linear combinations of velocity
// fields produce values of this type.
class VelocityField {
 public:
  const ScalarField& u1() const noexcept { return u1_; }
  const ScalarField& u2() const noexcept { return u2_; }
  const Grid& grid() const noexcept { return u1_.grid(); }
  VectorField as_vector() const { return {u1_, u2_}; }

  // Accepts a pair after checking the discrete divergence to `rel_tol`
  // relative to the largest coefficient; throws std::invalid_argument.
  static VelocityField from_components(ScalarField u1, ScalarField u2,
                                       double rel_tol = 1e-12);
  static VelocityField zero(GridPtr grid);

  VelocityField& operator+=(const VelocityField& o);
  VelocityField& operator-=(const VelocityField& o);
  VelocityField& operator*=(double a);
  friend VelocityField operator-(VelocityField a, const VelocityField& b) { return a -= b; }
  friend VelocityField operator+(VelocityField a, const VelocityField& b) { return a += b; }

 private:
  VelocityField(ScalarField u1, ScalarField u2)
      : u1_(std::move(u1)), u2_(std::move(u2)) {}
  friend VelocityField biot_savart(const ScalarField& omega);
  friend VelocityField leray_project(const VectorField& v);
  ScalarField u1_;
  ScalarField u2_;
};

// max_k |k1*u1hat + k2*u2hat|, relative to the largest coefficient.
double divergence_residual(const ScalarField& u1, const ScalarField& u2);

void require_same_grid(const ScalarField& a, const ScalarField& b);

}  // namespace bsq::spectral
