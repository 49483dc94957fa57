#include "bsq/init/sigma.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsq::init {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMesh = 256;

double bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

double bump_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double s = t * (1.0 - t);
  return bump(t) * (1.0 - 2.0 * t) / (s * s);
}

}  // namespace

RadialProfile::RadialProfile(double mass, double rho0, double rho1)
    : mass_(mass), rho0_(rho0), rho1_(rho1) {
  if (!(rho0 > 0.0) || !(rho1 > rho0))
    throw std::invalid_argument("radial profile needs 0 < rho0 < rho1");
  scale_ = 1.0;
  const double unit = 2.0 * kPi * segment(rho0_, rho1_);
  scale_ = mass_ / unit;
  mesh_.resize(kMesh + 1);
  cumulative_.resize(kMesh + 1);
  for (int j = 0; j <= kMesh; ++j) mesh_[j] = rho0_ + (rho1_ - rho0_) * j / kMesh;
  cumulative_[0] = 0.0;
  for (int j = 1; j <= kMesh; ++j)
    cumulative_[j] = cumulative_[j - 1] + segment(mesh_[j - 1], mesh_[j]);
}

double RadialProfile::g(double rho) const {
  return scale_ * bump((rho - rho0_) / (rho1_ - rho0_));
}

double RadialProfile::dg(double rho) const {
  return scale_ * bump_derivative((rho - rho0_) / (rho1_ - rho0_)) / (rho1_ - rho0_);
}

double RadialProfile::segment(double a, double b) const {
  using boost::math::quadrature::gauss_kronrod;
  if (b <= a) return 0.0;
  auto f = [this](double r) { return r * g(r); };
  return gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-15);
}

double RadialProfile::radial_integral(double r) const {
  if (r <= rho0_) return 0.0;
  if (r >= rho1_) return cumulative_.back();
  const double pos = (r - rho0_) / (rho1_ - rho0_) * kMesh;
  const int j = std::clamp(static_cast<int>(pos), 0, kMesh - 1);
  return cumulative_[j] + segment(mesh_[j], r);
}

double RadialProfile::mass_gauss_kronrod() const {
  return 2.0 * kPi * cumulative_.back();
}

double RadialProfile::mass_tanh_sinh() const {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [this](double r) { return r * g(r); };
  return 2.0 * kPi * ts.integrate(f, rho0_, rho1_);
}

Vec2 sigma_field(const RadialProfile& profile, const Vec2& x) {
  const double r2 = x[0] * x[0] + x[1] * x[1];
  const double r = std::sqrt(r2);
  if (r <= profile.rho0()) return {0.0, 0.0};
  const double c = profile.radial_integral(r) / r2;
  return {-x[1] * c, x[0] * c};
}

SigmaReport verify_sigma_stationary(const RadialProfile& profile,
                                    const std::vector<Vec2>& points, double h) {
  SigmaReport rep;
  rep.points = points.size();
  rep.h = h;
  auto s = [&](double a, double b) { return sigma_field(profile, {a, b}); };
  // Jacobian by centered differences: J[i][j] = d sigma_i / d x_j.
  auto jacobian = [&](double a, double b) {
    const Vec2 xp = s(a + h, b), xm = s(a - h, b), yp = s(a, b + h), ym = s(a, b - h);
    return std::array<double, 4>{(xp[0] - xm[0]) / (2 * h), (yp[0] - ym[0]) / (2 * h),
                                 (xp[1] - xm[1]) / (2 * h), (yp[1] - ym[1]) / (2 * h)};
  };
  // w = sigma . grad sigma
  auto transport = [&](double a, double b) {
    const Vec2 v = s(a, b);
    const auto J = jacobian(a, b);
    return Vec2{v[0] * J[0] + v[1] * J[1], v[0] * J[2] + v[1] * J[3]};
  };
  const double far = profile.mass() / (2.0 * kPi);
  for (const Vec2& p : points) {
    const double a = p[0], b = p[1];
    const double r = std::hypot(a, b);
    if (r == 0.0) throw std::invalid_argument("sigma sample point at the origin");
    const auto J = jacobian(a, b);
    rep.max_divergence = std::max(rep.max_divergence, std::abs(J[0] + J[3]));
    rep.max_vorticity_error =
        std::max(rep.max_vorticity_error, std::abs(J[2] - J[1] - profile.g(r)));
    const Vec2 wx1 = transport(a + h, b), wx0 = transport(a - h, b);
    const Vec2 wy1 = transport(a, b + h), wy0 = transport(a, b - h);
    const double curl_w = (wx1[1] - wx0[1]) / (2 * h) - (wy1[0] - wy0[0]) / (2 * h);
    rep.max_curl_transport = std::max(rep.max_curl_transport, std::abs(curl_w));
    const Vec2 v = s(a, b);
    if (r >= profile.rho1()) {
      const Vec2 ref{-b * far / (r * r), a * far / (r * r)};
      const double err = std::hypot(v[0] - ref[0], v[1] - ref[1]) / std::hypot(ref[0], ref[1]);
      rep.max_far_field_error = std::max(rep.max_far_field_error, err);
    }
    // Rotation by an irrational-ish angle.
    const double c = std::cos(0.7), sn = std::sin(0.7);
    const Vec2 rv = s(c * a - sn * b, sn * a + c * b);
    const Vec2 vr{c * v[0] - sn * v[1], sn * v[0] + c * v[1]};
    rep.max_rotation_error =
        std::max(rep.max_rotation_error, std::hypot(rv[0] - vr[0], rv[1] - vr[1]));
  }
  const double m = profile.mass();
  const double scale = m != 0.0 ? std::abs(m) : 1.0;
  rep.mass_error_gk = std::abs(profile.mass_gauss_kronrod() - m) / scale;
  rep.mass_error_ts = std::abs(profile.mass_tanh_sinh() - m) / scale;
  return rep;
}

std::vector<Vec2> sigma_sample_points(const RadialProfile& profile, std::size_t count) {
  std::vector<Vec2> pts;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (i + 0.5) / count;
    const double r = profile.rho1() * (0.2 + 2.3 * u);
    const double th = 2.0 * kPi * std::fmod(i * golden, 1.0);
    pts.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return pts;
}

}  // namespace bsq::init
