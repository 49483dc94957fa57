#pragma once
// Integrating-factor (Lawson) RK4 for the vorticity-temperature system
//   d_t theta - kappa Lap theta = -u.grad theta (+ u2 for Benard)
//   d_t omega                   = -u.grad omega + d_1 theta,   u = BS(omega).
// The heat factor exp(kappa dt Lap) is applied exactly; the nonlinear terms
// are advanced by classical RK4.

#include <stdexcept>
#include <string>

#include "bsq/dynamics/config.hpp"
#include "bsq/spectral/field.hpp"

namespace bsq::dynamics {

using spectral::GridPtr;
using spectral::ScalarField;
using spectral::VelocityField;

struct SolverState {
  double t = 0.0;
  ScalarField theta;
  ScalarField omega;
  // 2 kappa int_0^t ||grad theta||_{L2}^2, advanced with the RK4 stage
  // weights of the step so that it carries the scheme's order.
  double dissipation = 0.0;

  explicit SolverState(const GridPtr& grid) : theta(grid), omega(grid) {}
  SolverState(ScalarField th, ScalarField om)
      : theta(std::move(th)), omega(std::move(om)) {}
  VelocityField velocity() const;
};

struct Tendency {
  ScalarField dtheta;
  ScalarField domega;
};

// Nonlinear tendencies only; kappa Lap theta is not included.
Tendency tendency(const ScalarField& theta, const ScalarField& omega, System system);
Tendency tendency(const ScalarField& theta, const ScalarField& omega,
                  const VelocityField& u, System system);

// 2 kappa ||grad theta||_{L2}^2 by Parseval.
double dissipation_rate(const ScalarField& theta, double kappa);

class CflViolation : public std::runtime_error {
 public:
  CflViolation(double time, double dt, double umax, double limit);
  double time, dt, umax, limit;
};

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(double time, const std::string& what);
  double time;
};

inline constexpr double kVelocityFloor = 1e-12;

class Stepper {
 public:
  Stepper(GridPtr grid, double kappa, System system, double cfl);

  // Largest dt allowed by the CFL bound for this state.
  double stable_dt(const SolverState& s) const;
  // Advances s by dt. Throws CflViolation (state untouched) or
  // NumericalAbort when a non-finite value appears.
  void step(SolverState& s, double dt);

  double kappa() const noexcept { return kappa_; }
  System system() const noexcept { return system_; }

 private:
  void prepare(double dt);
  GridPtr grid_;
  double kappa_;
  System system_;
  double cfl_;
  double cached_dt_ = -1.0;
  AlignedVector<double> e_half_, e_full_;
};

// S_level applied to the initial data (Step-1 smoothing). level >= 0.
ScalarField mollify(const ScalarField& f, int level);

}  // namespace bsq::dynamics
