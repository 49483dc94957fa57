#include "bsq/spectral/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bsq/simd/kernels.hpp"

namespace bsq::spectral {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cell_area(int n) {
  const double h = kTwoPi / n;
  return h * h;
}

ScalarField multiplied(const ScalarField& f, std::span<const double> m) {
  ScalarField out = f;
  simd::scale_real(out.coefficients(), m);
  return out;
}

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p exponent must be >= 1");
}

}  // namespace

Samples to_physical(const ScalarField& f) {
  const Grid& g = f.grid();
  AlignedVector<cplx> scratch(f.coefficients().begin(), f.coefficients().end());
  Samples out(g.physical_size());
  g.c2r(scratch.data(), out.data());
  return out;
}

ScalarField to_spectral(const GridPtr& grid, std::span<const double> samples) {
  if (samples.size() != grid->physical_size())
    throw std::invalid_argument("sample count " + std::to_string(samples.size()) +
                                " does not match grid " +
                                std::to_string(grid->physical_size()));
  ScalarField f(grid);
  Samples in(samples.begin(), samples.end());
  grid->r2c(in.data(), f.coefficients().data());
  const double scale = 1.0 / static_cast<double>(grid->physical_size());
  f *= scale;
  return f;
}

ScalarField partial(const ScalarField& f, int axis) {
  if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr());
  simd::mul_imag(f.coefficients(), axis == 1 ? g.deriv1() : g.deriv2(),
                 out.coefficients());
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out = multiplied(f, f.grid().ksq());
  out *= -1.0;
  return out;
}

ScalarField heat_semigroup(const ScalarField& f, double lambda) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("heat semigroup parameter must be >= 0");
  if (lambda == 0.0) return f;
  const auto ksq = f.grid().ksq();
  AlignedVector<double> m(ksq.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-lambda * ksq[i]);
  return multiplied(f, m);
}

VelocityField biot_savart(const ScalarField& omega) {
  const double mean = std::abs(omega.coefficients()[0]);
  const double scale = omega.max_coefficient();
  if (mean > 1e-12 * scale && mean > 1e-300)
    throw std::invalid_argument(
        "Biot-Savart needs zero-mean vorticity on the torus (mean = " +
        std::to_string(omega.mean()) + ")");
  // psi = -Delta^{-1} omega, u = (d2 psi, -d1 psi) = (-d2, d1) Delta^{-1} omega
  ScalarField inv = multiplied(omega, omega.grid().inv_ksq());
  ScalarField u1 = partial(inv, 2);
  ScalarField u2 = partial(inv, 1);
  u2 *= -1.0;
  u1.coefficients()[0] = 0.0;
  u2.coefficients()[0] = 0.0;
  return VelocityField(std::move(u1), std::move(u2));
}

ScalarField curl(const VectorField& v) {
  ScalarField out = partial(v.y, 1);
  out -= partial(v.x, 2);
  return out;
}

ScalarField curl(const VelocityField& u) { return curl(u.as_vector()); }

ScalarField divergence(const VectorField& v) {
  ScalarField out = partial(v.x, 1);
  out += partial(v.y, 2);
  return out;
}

VelocityField leray_project(const VectorField& v) {
  require_same_grid(v.x, v.y);
  const Grid& g = v.x.grid();
  ScalarField p1 = v.x;
  ScalarField p2 = v.y;
  const auto d1 = g.deriv1();
  const auto d2 = g.deriv2();
  const auto a = v.x.coefficients();
  const auto b = v.y.coefficients();
  auto o1 = p1.coefficients();
  auto o2 = p2.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Project with the same wavevector the derivative uses, so that the
    // output is exactly divergence-free under partial().
    const double kk = d1[i] * d1[i] + d2[i] * d2[i];
    if (kk == 0.0) continue;
    const cplx kdotv = d1[i] * a[i] + d2[i] * b[i];
    o1[i] = a[i] - d1[i] * kdotv / kk;
    o2[i] = b[i] - d2[i] * kdotv / kk;
  }
  return VelocityField(std::move(p1), std::move(p2));
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  const Samples pa = to_physical(a);
  const Samples pb = to_physical(b);
  Samples prod(pa.size());
  simd::multiply(pa, pb, prod);
  ScalarField out = to_spectral(a.grid_ptr(), prod);
  out.dealias();
  return out;
}

ScalarField advect(const VelocityField& u, const ScalarField& f) {
  require_same_grid(u.u1(), f);
  const Samples u1 = to_physical(u.u1());
  const Samples u2 = to_physical(u.u2());
  const Samples f1 = to_physical(partial(f, 1));
  const Samples f2 = to_physical(partial(f, 2));
  Samples out(u1.size());
  simd::dot2(u1, f1, u2, f2, out);
  ScalarField r = to_spectral(f.grid_ptr(), out);
  r.dealias();
  return r;
}

double lp_norm_samples(std::span<const double> f, int n, double p) {
  check_p(p);
  if (std::isinf(p)) return simd::max_abs(f);
  const double s = simd::sum_abs_pow(f, p) * cell_area(n);
  return std::pow(s, 1.0 / p);
}

double lp_norm_samples(std::span<const double> a, std::span<const double> b,
                       int n, double p) {
  check_p(p);
  if (std::isinf(p)) return simd::max_hypot(a, b);
  const double s = simd::sum_hypot_pow(a, b, p) * cell_area(n);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p) {
  check_p(p);
  return lp_norm_samples(to_physical(f), f.grid().n(), p);
}

double lp_norm(const VectorField& v, double p) {
  check_p(p);
  return lp_norm_samples(to_physical(v.x), to_physical(v.y), v.x.grid().n(), p);
}

double lp_norm(const VelocityField& u, double p) { return lp_norm(u.as_vector(), p); }

double grad_lp_norm(const VelocityField& u, double p) {
  check_p(p);
  const int n = u.grid().n();
  const Samples a = to_physical(partial(u.u1(), 1));
  const Samples b = to_physical(partial(u.u1(), 2));
  const Samples c = to_physical(partial(u.u2(), 1));
  const Samples d = to_physical(partial(u.u2(), 2));
  // |grad u|_F^2 = a^2 + b^2 + c^2 + d^2, evaluated as the magnitude of the
  // pair (|(a,b)|, |(c,d)|).
  Samples ab(a.size()), cd(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = std::hypot(a[i], b[i]);
    cd[i] = std::hypot(c[i], d[i]);
  }
  return lp_norm_samples(ab, cd, n, p);
}

double grad_lp_norm(const ScalarField& f, double p) {
  return lp_norm(gradient(f), p);
}

double l2_norm_spectral(const ScalarField& f) {
  const double s = simd::weighted_norm2(f.coefficients(), f.grid().parseval_weight());
  return kTwoPi * std::sqrt(s);
}

double l2_inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  return kTwoPi * kTwoPi *
         simd::weighted_dot(a.coefficients(), b.coefficients(),
                            a.grid().parseval_weight());
}

double l2_inner(const VelocityField& a, const VelocityField& b) {
  return l2_inner(a.u1(), b.u1()) + l2_inner(a.u2(), b.u2());
}

double h1_norm(const ScalarField& f) {
  const double l2 = l2_norm_spectral(f);
  const double g1 = l2_norm_spectral(partial(f, 1));
  const double g2 = l2_norm_spectral(partial(f, 2));
  return std::sqrt(l2 * l2 + g1 * g1 + g2 * g2);
}

VectorField gradient(const ScalarField& f) { return {partial(f, 1), partial(f, 2)}; }

VectorField momentum_tendency_unprojected(const ScalarField& theta,
                                          const VelocityField& u) {
  VectorField out{advect(u, u.u1()), advect(u, u.u2())};
  out.x *= -1.0;
  out.y *= -1.0;
  out.y += theta;
  return out;
}

ScalarField recover_pressure(const ScalarField& theta, const VelocityField& u) {
  const VectorField f = momentum_tendency_unprojected(theta, u);
  ScalarField div = divergence(f);
  // Delta Pi = div f  =>  Pi_hat = -div_hat / |k|^2
  ScalarField pi = multiplied(div, div.grid().inv_ksq());
  pi *= -1.0;
  pi.coefficients()[0] = 0.0;
  return pi;
}

}  // namespace bsq::spectral
