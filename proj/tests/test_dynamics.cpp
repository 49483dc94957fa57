#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/stepper.hpp"
#include "bsq/init/generators.hpp"
#include "bsq/spectral/operators.hpp"
#include "test_support.hpp"

using namespace bsq;
using namespace bsq::dynamics;
using spectral::Grid;
using spectral::kInfinity;

namespace {
const double pi = std::numbers::pi;

double energy(const SolverState& s) {
  const double l2 = spectral::l2_norm_spectral(s.theta);
  return 0.5 * l2 * l2 + 0.5 * s.dissipation;
}

SolverState reference_like(int n) {
  auto g = Grid::create(n);
  auto om = init::vortex_patch(g, pi, pi, 1.0, 0.5, 1.0);
  om.coefficients()[0] = 0.0;
  om *= 1.0 / spectral::lp_norm(om, kInfinity);
  return SolverState(init::gaussian_bump(g, pi / 2, pi, 0.5, 1.0), om);
}
}  // namespace

TEST_CASE("heat part is exact for a single mode without flow") {
  auto g = Grid::create(32);
  SolverState s(init::single_mode(g, 3, 1, 1.0, false), spectral::ScalarField(g));
  Stepper st(g, 0.2, System::Boussinesq, 0.5);
  for (int i = 0; i < 10; ++i) st.step(s, 0.01);
  const double decay = std::exp(-0.2 * 10 * 0.1);
  CHECK(testing::max_diff(s.theta, init::single_mode(g, 3, 1, decay, false)) < 1e-14);
  // omega picks up d_1 theta: int_0^t 3 cos(3x+y) e^{-2 tau} d tau
  const double amp = 3.0 * (1 - decay) / 2.0;
  CHECK(testing::max_diff(s.omega, init::single_mode(g, 3, 1, amp, true)) < 1e-10);
  // dissipation 2 kappa int ||grad theta||^2
  const double expect = (1 - decay * decay) * 2 * pi * pi;
  CHECK(s.dissipation == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("stationary Euler shear flow stays put") {
  auto g = Grid::create(32);
  SolverState s(spectral::ScalarField(g), init::single_mode(g, 0, 2, 1.0, false));
  Stepper st(g, 0.0, System::Euler, 0.5);
  const auto om0 = s.omega;
  for (int i = 0; i < 20; ++i) st.step(s, 0.01);
  CHECK(testing::max_diff(s.omega, om0) < 1e-14);
}

TEST_CASE("energy identity converges at fourth order") {
  auto run = [](double dt) {
    SolverState s = reference_like(64);
    const double e0 = energy(s);
    Stepper st(s.theta.grid_ptr(), 0.1, System::Boussinesq, 0.9);
    const int steps = static_cast<int>(std::lround(0.2 / dt));
    for (int i = 0; i < steps; ++i) st.step(s, dt);
    return std::abs(energy(s) - e0) / e0;
  };
  const double d1 = run(0.02), d2 = run(0.01);
  CHECK(d1 < 1e-5);
  CHECK(d1 / d2 > 12.0);
}

TEST_CASE("CFL violation leaves the state untouched") {
  SolverState s = reference_like(64);
  Stepper st(s.theta.grid_ptr(), 0.1, System::Boussinesq, 0.5);
  const double lim = st.stable_dt(s);
  const auto before = s.omega;
  CHECK_THROWS_AS(st.step(s, 2 * lim), CflViolation);
  CHECK(s.t == 0.0);
  CHECK(testing::max_diff(s.omega, before) == 0.0);
  CHECK_NOTHROW(st.step(s, 0.5 * lim));
}

TEST_CASE("non-finite data aborts") {
  auto g = Grid::create(32);
  SolverState s(g);
  s.theta.at(1, 0) = std::numeric_limits<double>::quiet_NaN();
  Stepper st(g, 0.1, System::Boussinesq, 0.5);
  CHECK_THROWS_AS(st.step(s, 1e-3), NumericalAbort);
}

TEST_CASE("Benard source exchanges energy through theta u2") {
  auto g = Grid::create(32);
  auto th = testing::random_field(g, 3, 6);
  auto om = testing::random_field(g, 4, 6);
  const auto u = spectral::biot_savart(om);
  const auto k = tendency(th, om, u, System::Benard);
  // <theta, -u.grad theta + u2> = <theta, u2>
  CHECK(spectral::l2_inner(th, k.dtheta) ==
        doctest::Approx(spectral::l2_inner(th, u.u2())).epsilon(1e-12));
  // <u, BS(d_t omega)> = <theta, u2> for the Boussinesq momentum balance
  const auto du = spectral::biot_savart(k.domega);
  CHECK(spectral::l2_inner(u, du) == doctest::Approx(spectral::l2_inner(th, u.u2())).epsilon(1e-10));
}

TEST_CASE("config round trip, overrides and errors") {
  json doc = default_config_json();
  apply_override(doc, "n=64");
  apply_override(doc, "kappa=0.05");
  apply_override(doc, "system=benard");
  apply_override(doc, "p_grid=[2,\"inf\"]");
  const RunConfig cfg = RunConfig::from_json(doc);
  CHECK(cfg.n == 64);
  CHECK(cfg.kappa == 0.05);
  CHECK(cfg.system == System::Benard);
  REQUIRE(cfg.p_grid.size() == 2);
  CHECK(std::isinf(cfg.p_grid[1]));
  CHECK(config_hash(cfg.to_json()) == config_hash(RunConfig::from_json(cfg.to_json()).to_json()));
  CHECK(config_hash(cfg.to_json()).size() == 16);

  CHECK_THROWS_AS(apply_override(doc, "n=\"big\""), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "nosuch=1"), ConfigError);
  json bad = default_config_json();
  bad["n"] = 100;
  try {
    RunConfig::from_json(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "n");
  }
  bad = default_config_json();
  bad["extra"] = 1;
  CHECK_THROWS_AS(RunConfig::from_json(bad), ConfigError);
}
