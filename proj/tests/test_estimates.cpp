#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/trajectory.hpp"
#include "bsq/estimates/report.hpp"
#include "bsq/estimates/sample_checks.hpp"
#include "bsq/estimates/suite.hpp"
#include "bsq/estimates/trajectory_checks.hpp"
#include "bsq/estimates/twin.hpp"
#include "bsq/init/generators.hpp"
#include "bsq/spectral/operators.hpp"
#include "test_support.hpp"

using namespace bsq;
using namespace bsq::estimates;
using spectral::Grid;

namespace {
const double pi = std::numbers::pi;
const double inf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("identity reports use the relative defect") {
  auto ok = identity_report("a", {0, 1}, {1.0, 2.0 + 1e-7}, {1.0, 2.0}, 1e-5);
  CHECK(ok.pass);
  CHECK(ok.max_relative_defect == doctest::Approx(5e-8));
  auto bad = identity_report("b", {0, 1}, {1.0, 2.1}, {1.0, 2.0}, 1e-5);
  CHECK_FALSE(bad.pass);
  CHECK(bad.hard());
  CHECK_THROWS_AS(identity_report("c", {0}, {1, 2}, {1, 2}, 1e-5), std::invalid_argument);
}

TEST_CASE("constant-free reports allow only round-off slack") {
  CHECK(constant_free_report("a", {0, 1}, {1.0, 2.0}, {1.0, 3.0}).pass);
  CHECK(constant_free_report("a", {0, 1}, {1.0, 3.0 + 1e-9}, {1.0, 3.0}).pass);
  auto bad = constant_free_report("b", {0, 1}, {1.0, 3.0 + 1e-6}, {1.0, 3.0});
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin == doctest::Approx(-1e-6));
}

TEST_CASE("empirical constant skips vanishing cores") {
  auto r = empirical_report("e", {0, 1, 2}, {0.0, 2.0, 3.0}, {0.0, 1.0, 2.0});
  CHECK(r.empirical_constant == doctest::Approx(2.0));
  CHECK(r.pass);
  CHECK_FALSE(r.hard());
  CHECK_FALSE(empirical_report("e", {0, 1}, {0.0, 20.0}, {0.0, 1.0}).pass);
  CHECK(all_hard_pass({r, constant_free_report("a", {0}, {1}, {2})}));
  CHECK_FALSE(all_hard_pass({constant_free_report("a", {0}, {3}, {2})}));
}

TEST_CASE("time derivative is exact for quadratics on uneven samples") {
  std::vector<double> t{0.0, 0.1, 0.25, 0.3, 0.7, 1.0}, y, dy;
  for (double s : t) y.push_back(3 * s * s - 2 * s + 1), dy.push_back(6 * s - 2);
  const auto d = time_derivative(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(dy[i]).epsilon(1e-12));
}

TEST_CASE("Gronwall constant is the smallest admissible one") {
  const double lhs = 5.0, f = 1.0, a = 0.5, b = 0.2, g = 2.0;
  const double c = smallest_gronwall_constant(lhs, f, a, b, g);
  auto rhs = [&](double k) { return k * (f + a * g) * std::exp(k * k * b * g); };
  CHECK(rhs(c) >= lhs);
  CHECK(rhs(c * (1 - 1e-10)) < lhs * (1 + 1e-12));
  CHECK(rhs(0.99 * c) < lhs);
  CHECK(smallest_gronwall_constant(0.0, f, a, b, g) == 0.0);
  CHECK(smallest_gronwall_constant(1e300, 1e-300, 0, 0, 0) == inf);
}

TEST_CASE("forced heat closed form on a single mode") {
  auto g = Grid::create(32);
  const double kappa = 0.3, t = 0.7;
  auto th0 = init::single_mode(g, 2, 1, 1.5, false);
  auto f = init::single_mode(g, 2, 1, 0.4, false);
  const double l = kappa * 5.0, decay = std::exp(-l * t);
  const double amp = 1.5 * decay + 0.4 * (1 - decay) / l;
  CHECK(testing::max_diff(forced_heat(th0, f, kappa, t), init::single_mode(g, 2, 1, amp, false)) <
        1e-14);
}

TEST_CASE("energy identity check on an exact heat trajectory") {
  // theta = e^{-kappa t} sin(x1): ||theta||^2 = 2 pi^2 e^{-2 kappa t},
  // dissipation = 2 pi^2 (1 - e^{-2 kappa t}).
  dynamics::RunConfig cfg;
  cfg.kappa = 0.25;
  dynamics::Trajectory tr({"time", "theta_l2", "dissipation"});
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i, e = std::exp(-2 * cfg.kappa * t);
    tr.append({t, std::sqrt(2 * pi * pi * e), 2 * pi * pi * (1 - e)});
  }
  auto r = check_energy_identity(cfg, tr);
  CHECK(r.pass);
  CHECK(r.max_relative_defect < 1e-14);

  dynamics::Trajectory missing({"time", "theta_l2"});
  missing.append({0.0, 1.0});
  CHECK_THROWS_AS(check_energy_identity(cfg, missing), dynamics::MissingChannels);
}

namespace {
// Constant coefficients: W = Z^{1/p} solves W' = 2 a b^{2/p} + (2 gam / p) W.
double twin_exact(double a, double b, double gam, double z0, double p, double t) {
  const double r = 2 * gam / p, src = 2 * a * std::pow(b, 2 / p);
  return std::pow(std::exp(r * t) * std::pow(z0, 1 / p) + src / r * std::expm1(r * t), p);
}
}  // namespace

TEST_CASE("twin bound and comparison ODE agree with the constant-coefficient solution") {
  const double a = 0.7, b = 0.3, gam = 0.8;
  std::vector<double> t, av, bv, gv;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.05 * i);
    av.push_back(a), bv.push_back(b), gv.push_back(gam);
  }
  for (double p : {2.0, 4.0, 8.0}) {
    const auto res = twin_integrated_bound(t, av, bv, gv, 1e-2, p);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double z = twin_exact(a, b, gam, 1e-2, p, t[i]);
      CHECK(res.bound[i] == doctest::Approx(z).epsilon(1e-10));
      CHECK(res.oracle[i] == doctest::Approx(z).epsilon(1e-9));
    }
  }
  // Near Z = 0 the comparison ODE is stiff; the oracle still converges at fourth order.
  auto oracle_error = [&](int substeps) {
    const auto res = twin_integrated_bound(t, av, bv, gv, 1e-6, 2.0, substeps);
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double z = twin_exact(a, b, gam, 1e-6, 2.0, t[i]);
      worst = std::max(worst, std::abs(res.oracle[i] - z) / z);
      CHECK(res.bound[i] == doctest::Approx(z).epsilon(1e-10));
    }
    return worst;
  };
  CHECK(oracle_error(64) / oracle_error(128) > 12.0);
}

TEST_CASE("relative variation and stability rows") {
  CHECK(relative_variation({}) == 0.0);
  CHECK(relative_variation({0.0, 0.0}) == 0.0);
  CHECK(relative_variation({1.0, 1.2}) == doctest::Approx(0.2 / 1.2));

  auto e1 = empirical_report("x", {0, 1}, {1.0, 2.0}, {1.0, 1.0});
  auto e2 = empirical_report("x", {0, 1}, {1.0, 2.1}, {1.0, 1.0});
  auto far = empirical_report("y", {0}, {1.0}, {1.0});
  auto far2 = empirical_report("y", {0}, {2.0}, {1.0});
  auto rows = stability_table({{e1, far}, {e2, far2}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].name == "x");
  CHECK(rows[0].pass);
  CHECK(rows[0].variation == doctest::Approx(0.1 / 2.1));
  CHECK(rows[1].name == "y");
  CHECK_FALSE(rows[1].pass);
}

TEST_CASE("exactness and sigma reports pass") {
  for (const auto& r : exactness_reports(Grid::create(64), 3)) {
    INFO(r.name);
    CHECK(r.pass);
  }
  for (const auto& r : sigma_reports(16)) {
    INFO(r.name);
    CHECK(r.pass);
  }
}

TEST_CASE("sample checks hold on random band-limited fields") {
  auto g = Grid::create(32);
  auto samples = random_samples(g, 6, 11);
  REQUIRE(samples.size() == 6);
  std::vector<EstimateReport> all;
  for (auto& r : check_biot_savart_samples(samples, {2.0, 4.0, inf})) all.push_back(r);
  for (auto& r : check_interpolation_samples(samples)) all.push_back(r);
  all.push_back(check_velocity_besov_samples(samples));
  for (const auto& r : all) {
    INFO(r.name);
    CHECK(r.pass);
  }
}
