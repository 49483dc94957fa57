#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "bsq/spectral/operators.hpp"
#include "bsq/spectral/snapshot.hpp"
#include "test_support.hpp"

using namespace bsq;
using namespace bsq::spectral;
using testing::max_abs;
using testing::max_diff;
using testing::random_field;
using testing::sample;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("grid rejects sizes that are not powers of two >= 16") {
  CHECK_THROWS_AS(Grid::create(100), std::invalid_argument);
  CHECK_THROWS_AS(Grid::create(8), std::invalid_argument);
  CHECK_NOTHROW(Grid::create(16));
}

TEST_CASE("dealias mask is the 2/3 rule") {
  auto g = Grid::create(64);
  const int cut = 64 / 3;
  for (std::size_t i = 0; i < g->spectral_size(); ++i) {
    const int k1 = g->k1_of(i), k2 = g->k2_of(i);
    const bool nyquist = k1 == 32;
    const bool expect = !nyquist && std::abs(k1) <= cut && std::abs(k2) <= cut;
    REQUIRE(g->retained(i) == expect);
  }
}

TEST_CASE("transform round trip, constants and single modes") {
  auto g = Grid::create(32);
  const auto f = sample(g, [](double x, double y) { return std::sin(3 * x) * std::exp(std::cos(y)); });
  const auto back = to_spectral(g, to_physical(f));
  CHECK(max_diff(f, back) < 1e-12);

  const auto c = sample(g, [](double, double) { return 2.5; });
  CHECK(c.mean() == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(c.max_coefficient() == doctest::Approx(2.5).epsilon(1e-15));
  for (std::size_t i = 1; i < g->spectral_size(); ++i) CHECK(std::abs(c.coefficients()[i]) < 1e-15);

  const auto s = sample(g, [](double x, double) { return std::sin(x); });
  int nonzero = 0;
  for (const cplx& v : s.coefficients()) nonzero += std::abs(v) > 1e-14;
  // k = (1,0) is stored once in the half spectrum; (-1,0) is its conjugate.
  CHECK(nonzero == 1);
  CHECK(std::abs(s.at(1, 0) - cplx(0.0, -0.5)) < 1e-15);

  CHECK_THROWS_AS(to_spectral(g, Samples(10)), std::invalid_argument);
}

TEST_CASE("derivatives of analytic fields") {
  auto g = Grid::create(32);
  const auto s = sample(g, [](double x, double) { return std::sin(x); });
  CHECK(max_diff(partial(s, 1), sample(g, [](double x, double) { return std::cos(x); })) < 1e-13);
  CHECK(max_abs(partial(s, 2)) < 1e-14);
  const auto f = random_field(g, 3, 8);
  CHECK(max_diff(partial(partial(f, 1), 2), partial(partial(f, 2), 1)) < 1e-12);
  CHECK_THROWS_AS(partial(f, 3), std::invalid_argument);
  CHECK(max_diff(laplacian(f), partial(partial(f, 1), 1) + partial(partial(f, 2), 2)) < 1e-11);
}

TEST_CASE("heat semigroup") {
  auto g = Grid::create(32);
  const auto f = random_field(g, 5, 8);
  CHECK(max_diff(heat_semigroup(f, 0.0), f) == 0.0);
  const auto m = sample(g, [](double x, double y) { return std::sin(2 * x + 3 * y); });
  CHECK(max_diff(heat_semigroup(m, 0.01), std::exp(-0.13) * m) < 1e-14);
  double prev = l2_norm_spectral(f);
  for (double lam : {0.001, 0.01, 0.1, 1.0}) {
    const double cur = l2_norm_spectral(heat_semigroup(f, lam));
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(heat_semigroup(f, -1.0), std::invalid_argument);
}

TEST_CASE("Biot-Savart closed forms and the curl oracle") {
  auto g = Grid::create(128);
  const auto zero = biot_savart(ScalarField(g));
  CHECK(max_abs(zero.u1()) == 0.0);

  const auto w1 = sample(g, [](double x, double) { return std::sin(x); });
  const auto u = biot_savart(w1);
  CHECK(max_abs(u.u1()) < 1e-14);
  CHECK(max_diff(u.u2(), sample(g, [](double x, double) { return -std::cos(x); })) < 1e-14);
  CHECK(max_diff(curl(u), w1) < 1e-14);

  const auto w2 = sample(g, [](double, double y) { return std::cos(y); });
  const auto v = biot_savart(w2);
  CHECK(max_diff(v.u1(), sample(g, [](double, double y) { return -std::sin(y); })) < 1e-14);
  CHECK(max_abs(v.u2()) < 1e-14);

  const auto w = random_field(g, 7);
  const auto ur = biot_savart(w);
  CHECK(max_diff(curl(ur), w) < 1e-12 * max_abs(w));
  CHECK(divergence_residual(ur.u1(), ur.u2()) < 1e-15);

  const auto shifted = sample(g, [](double x, double) { return 1.0 + std::sin(x); });
  CHECK_THROWS_AS(biot_savart(shifted), std::invalid_argument);
}

TEST_CASE("Leray projection") {
  auto g = Grid::create(64);
  const auto w = biot_savart(random_field(g, 1));
  const auto phi = random_field(g, 2);
  const VectorField grad = gradient(phi);
  VectorField mix{w.u1() + grad.x, w.u2() + grad.y};
  const auto p = leray_project(mix);
  CHECK(max_diff(p.u1(), w.u1()) < 1e-12);
  CHECK(max_diff(p.u2(), w.u2()) < 1e-12);
  CHECK(max_abs(divergence(p.as_vector())) < 1e-12);
  const auto pp = leray_project(p.as_vector());
  CHECK(max_diff(pp.u1(), p.u1()) < 1e-14);
  const auto cosx = sample(g, [](double x, double) { return std::cos(x); });
  const auto killed = leray_project(VectorField{cosx, ScalarField(g)});
  CHECK(max_abs(killed.u1()) < 1e-15);
  CHECK_THROWS_AS(VelocityField::from_components(cosx, ScalarField(g)), std::invalid_argument);
}

TEST_CASE("advection") {
  auto g = Grid::create(64);
  const auto u = biot_savart(sample(g, [](double x, double) { return std::sin(x); }));
  const auto f = sample(g, [](double, double y) { return std::sin(y); });
  const auto expect = sample(g, [](double x, double y) { return -std::cos(x) * std::cos(y); });
  CHECK(max_diff(advect(u, f), expect) < 1e-13);
  CHECK(max_abs(advect(VelocityField::zero(g), f)) == 0.0);
  const auto c = sample(g, [](double, double) { return 3.0; });
  CHECK(max_abs(advect(u, c)) < 1e-15);

  const auto ur = biot_savart(random_field(g, 4));
  const auto fr = random_field(g, 5);
  const auto a = advect(ur, fr);
  CHECK(std::abs(a.mean()) < 1e-10);
  // Outside the 2/3 mask every coefficient is exactly zero.
  for (std::size_t i = 0; i < g->spectral_size(); ++i)
    if (!g->retained(i)) REQUIRE(a.coefficients()[i] == cplx{});
}

TEST_CASE("L^p quadrature norms") {
  auto g = Grid::create(64);
  const auto c = sample(g, [](double, double) { return -2.0; });
  for (double p : {1.0, 2.0, 3.0, 8.0})
    CHECK(lp_norm(c, p) == doctest::Approx(2.0 * std::pow(2 * pi, 2.0 / p)).epsilon(1e-13));
  CHECK(lp_norm(c, kInfinity) == doctest::Approx(2.0));
  // Independent oracle: exact integral of sin^2 over the torus is 2 pi^2.
  for (int n : {16, 32, 64}) {
    auto gn = Grid::create(n);
    const auto s = sample(gn, [](double x, double) { return std::sin(x); });
    CHECK(lp_norm(s, 2.0) == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(lp_norm(s, kInfinity) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(lp_norm(c, 0.5), std::invalid_argument);

  const auto f = random_field(g, 9);
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 4.0, 8.0, 16.0, kInfinity}) {
    const double normalised = lp_norm(f, p) * std::pow(2 * pi, std::isinf(p) ? 0.0 : -2.0 / p);
    CHECK(normalised >= prev * (1 - 1e-14));
    prev = normalised;
  }
}

TEST_CASE("Parseval") {
  auto g = Grid::create(128);
  const auto f = random_field(g, 21, 40);
  const double quad = lp_norm(f, 2.0);
  const double spec = l2_norm_spectral(f);
  CHECK(std::abs(quad - spec) / spec < 1e-12);
  const auto h = random_field(g, 22, 40);
  double direct = 0.0;
  const auto pf = to_physical(f), ph = to_physical(h);
  for (std::size_t i = 0; i < pf.size(); ++i) direct += pf[i] * ph[i];
  direct *= std::pow(2 * pi / 128, 2);
  CHECK(std::abs(l2_inner(f, h) - direct) < 1e-12 * spec * l2_norm_spectral(h));
}

TEST_CASE("pressure recovery") {
  auto g = Grid::create(64);
  CHECK(max_abs(recover_pressure(ScalarField(g), VelocityField::zero(g))) == 0.0);
  const auto th = sample(g, [](double, double y) { return std::sin(y); });
  const auto pi_field = recover_pressure(th, VelocityField::zero(g));
  CHECK(max_diff(pi_field, sample(g, [](double, double y) { return -std::cos(y); })) < 1e-14);

  const auto theta = random_field(g, 31);
  const auto u = biot_savart(random_field(g, 32));
  const VectorField f = momentum_tendency_unprojected(theta, u);
  const VectorField gp = gradient(recover_pressure(theta, u));
  const auto projected = leray_project(f);
  CHECK(max_diff(f.x - gp.x, projected.u1()) < 1e-10);
  CHECK(max_diff(f.y - gp.y, projected.u2()) < 1e-10);
  CHECK(std::abs(recover_pressure(theta, u).mean()) == 0.0);
}

TEST_CASE("snapshot round trip") {
  auto g = Grid::create(16);
  const auto f = random_field(g, 41, 4);
  const auto path = std::filesystem::temp_directory_path() / "bsqlab_snapshot_test.bin";
  write_snapshot(path, f, 0.25, "theta");
  const Snapshot s = read_snapshot(path);
  CHECK(s.n == 16);
  CHECK(s.time == 0.25);
  CHECK(s.name == "theta");
  const auto phys = to_physical(f);
  for (std::size_t i = 0; i < phys.size(); ++i) REQUIRE(s.samples[i] == phys[i]);
  const std::string header = R"({"n":16,"name":"theta","time":0.25})";
  CHECK(std::filesystem::file_size(path) == header.size() + 1 + 16 * 16 * 8);

  std::ofstream(path, std::ios::app | std::ios::binary) << 'x';
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::resize_file(path, header.size() + 1 + 100);
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove(path);
}
