#include "bsq/dynamics/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsq/lp/blocks.hpp"
#include "bsq/simd/kernels.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::dynamics {
namespace {

std::string cfl_message(double time, double dt, double umax, double limit) {
  std::ostringstream os;
  os << "CFL violation at t=" << time << ": dt=" << dt << " exceeds " << limit
     << " (max |u| = " << umax << ")";
  return os.str();
}

ScalarField scaled(const ScalarField& f, std::span<const double> m) {
  ScalarField out = f;
  simd::scale_real(out.coefficients(), m);
  return out;
}

}  // namespace

CflViolation::CflViolation(double time_, double dt_, double umax_, double limit_)
    : std::runtime_error(cfl_message(time_, dt_, umax_, limit_)),
      time(time_), dt(dt_), umax(umax_), limit(limit_) {}

NumericalAbort::NumericalAbort(double time_, const std::string& what)
    : std::runtime_error(what), time(time_) {}

VelocityField SolverState::velocity() const { return spectral::biot_savart(omega); }

Tendency tendency(const ScalarField& theta, const ScalarField& omega, const VelocityField& u,
                  System system) {
  Tendency k{ScalarField(theta.grid_ptr()), spectral::advect(u, omega)};
  k.domega *= -1.0;
  if (system == System::Euler) return k;
  k.dtheta = spectral::advect(u, theta);
  k.dtheta *= -1.0;
  if (system == System::Benard) k.dtheta += u.u2();
  k.domega += spectral::partial(theta, 1);
  return k;
}

Tendency tendency(const ScalarField& theta, const ScalarField& omega, System system) {
  return tendency(theta, omega, spectral::biot_savart(omega), system);
}

double dissipation_rate(const ScalarField& theta, double kappa) {
  if (kappa == 0.0) return 0.0;
  const double g1 = spectral::l2_norm_spectral(spectral::partial(theta, 1));
  const double g2 = spectral::l2_norm_spectral(spectral::partial(theta, 2));
  return 2.0 * kappa * (g1 * g1 + g2 * g2);
}

Stepper::Stepper(GridPtr grid, double kappa, System system, double cfl)
    : grid_(std::move(grid)), kappa_(kappa), system_(system), cfl_(cfl) {}

double Stepper::stable_dt(const SolverState& s) const {
  const double umax = spectral::lp_norm(s.velocity(), spectral::kInfinity);
  return cfl_ * grid_->spacing() / std::max(umax, kVelocityFloor);
}

void Stepper::prepare(double dt) {
  if (dt == cached_dt_) return;
  const auto ksq = grid_->ksq();
  e_half_.resize(ksq.size());
  e_full_.resize(ksq.size());
  for (std::size_t i = 0; i < ksq.size(); ++i) {
    e_half_[i] = std::exp(-kappa_ * ksq[i] * 0.5 * dt);
    e_full_[i] = std::exp(-kappa_ * ksq[i] * dt);
  }
  cached_dt_ = dt;
}

void Stepper::step(SolverState& s, double dt) {
  prepare(dt);
  const VelocityField u0 = s.velocity();
  const double umax = spectral::lp_norm(u0, spectral::kInfinity);
  const double limit = cfl_ * grid_->spacing() / std::max(umax, kVelocityFloor);
  if (dt > limit * (1.0 + 1e-12)) throw CflViolation(s.t, dt, umax, limit);

  const bool heat = system_ != System::Euler;
  auto half = [&](const ScalarField& f) { return scaled(f, e_half_); };
  auto full = [&](const ScalarField& f) { return scaled(f, e_full_); };

  // Stage 1
  const Tendency k1 = tendency(s.theta, s.omega, u0, system_);
  const double d1 = dissipation_rate(s.theta, kappa_);
  // Stage 2: theta_a = E_h (theta_n + dt/2 k1)
  ScalarField th_a = s.theta;
  th_a.add_scaled(0.5 * dt, k1.dtheta);
  if (heat) th_a = half(th_a);
  ScalarField om_a = s.omega;
  om_a.add_scaled(0.5 * dt, k1.domega);
  const Tendency k2 = tendency(th_a, om_a, system_);
  const double d2 = dissipation_rate(th_a, kappa_);
  // Stage 3: theta_b = E_h theta_n + dt/2 k2
  const ScalarField th_n_half = heat ? half(s.theta) : s.theta;
  ScalarField th_b = th_n_half;
  th_b.add_scaled(0.5 * dt, k2.dtheta);
  ScalarField om_b = s.omega;
  om_b.add_scaled(0.5 * dt, k2.domega);
  const Tendency k3 = tendency(th_b, om_b, system_);
  const double d3 = dissipation_rate(th_b, kappa_);
  // Stage 4: theta_c = E theta_n + dt E_h k3
  const ScalarField th_n_full = heat ? full(s.theta) : s.theta;
  ScalarField th_c = th_n_full;
  th_c.add_scaled(dt, heat ? half(k3.dtheta) : k3.dtheta);
  ScalarField om_c = s.omega;
  om_c.add_scaled(dt, k3.domega);
  const Tendency k4 = tendency(th_c, om_c, system_);
  const double d4 = dissipation_rate(th_c, kappa_);

  // theta_{n+1} = E theta_n + dt/6 (E k1 + 2 E_h (k2 + k3) + k4)
  ScalarField th_new = th_n_full;
  if (system_ != System::Euler) {
    ScalarField mid = k2.dtheta + k3.dtheta;
    th_new.add_scaled(dt / 6.0, heat ? full(k1.dtheta) : k1.dtheta);
    th_new.add_scaled(dt / 3.0, heat ? half(mid) : mid);
    th_new.add_scaled(dt / 6.0, k4.dtheta);
  }
  ScalarField om_new = s.omega;
  om_new.add_scaled(dt / 6.0, k1.domega);
  om_new.add_scaled(dt / 3.0, k2.domega + k3.domega);
  om_new.add_scaled(dt / 6.0, k4.domega);
  om_new.coefficients()[0] = 0.0;

  const double t_new = s.t + dt;
  if (!th_new.all_finite() || !om_new.all_finite()) {
    std::ostringstream os;
    os << "non-finite state at t=" << t_new;
    throw NumericalAbort(t_new, os.str());
  }
  s.theta = std::move(th_new);
  s.omega = std::move(om_new);
  s.dissipation += dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
  s.t = t_new;
}

ScalarField mollify(const ScalarField& f, int level) {
  if (level < 0) throw std::invalid_argument("mollification level must be >= 0");
  return lp::low_cutoff(f, level);
}

}  // namespace bsq::dynamics
