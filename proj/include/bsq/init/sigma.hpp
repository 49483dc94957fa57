#pragma once
// Radial stationary Euler flows on the whole plane:
//   sigma(x) = x^perp / |x|^2 * int_0^{|x|} rho g(rho) d rho,  x^perp = (-x2, x1),
// whose vorticity is g(|x|). Evaluated pointwise only; sigma is not periodic.

#include <array>
#include <vector>

namespace bsq::init {

using Vec2 = std::array<double, 2>;

// g(rho) = c * b((rho - rho0) / (rho1 - rho0)), b(t) = exp(-1/(t(1-t))),
// with c fixed by the total mass 2 pi int rho g = m.
class RadialProfile {
 public:
  explicit RadialProfile(double mass = 1.0, double rho0 = 0.5, double rho1 = 1.0);

  double mass() const noexcept { return mass_; }
  double rho0() const noexcept { return rho0_; }
  double rho1() const noexcept { return rho1_; }
  double g(double rho) const;
  double dg(double rho) const;  // g'(rho), for the analytic gradient of the vorticity
  // int_0^r rho g(rho) d rho, from a cached mesh plus one adaptive segment.
  double radial_integral(double r) const;
  // 2 pi int rho g by Gauss-Kronrod and by tanh-sinh; both should equal m.
  double mass_gauss_kronrod() const;
  double mass_tanh_sinh() const;

 private:
  double mass_, rho0_, rho1_, scale_ = 0.0;
  std::vector<double> mesh_, cumulative_;
  double segment(double a, double b) const;
};

Vec2 sigma_field(const RadialProfile& profile, const Vec2& x);

struct SigmaReport {
  std::size_t points = 0;
  double h = 0.0;
  double max_divergence = 0.0;          // |div sigma|
  double max_curl_transport = 0.0;      // |curl(sigma . grad sigma)|
  double max_vorticity_error = 0.0;     // |curl sigma - g(|x|)|
  double max_far_field_error = 0.0;     // relative, over points with |x| >= rho1
  double max_rotation_error = 0.0;      // |sigma(Rx) - R sigma(x)|
  double mass_error_gk = 0.0;           // relative
  double mass_error_ts = 0.0;
};

// Centered finite differences with step h at the given points (none may be
// the origin). Far-field and rotation checks use the same points.
SigmaReport verify_sigma_stationary(const RadialProfile& profile,
                                    const std::vector<Vec2>& points, double h);

// Deterministic sample: radii spread over [0.2, 2.5] rho1, angles by the
// golden ratio.
std::vector<Vec2> sigma_sample_points(const RadialProfile& profile, std::size_t count);

}  // namespace bsq::init
