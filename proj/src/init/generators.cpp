#include "bsq/init/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "bsq/lp/blocks.hpp"
#include "bsq/lp/filter.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::init {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// erf(x) = 0.96 at x = 1.4522; the 2%..98% rise of (1 - erf)/2 spans 2.9044 s.
constexpr double kErfSpan = 2.0 * 1.45222;

template <class F>
ScalarField tabulate(const GridPtr& grid, F&& f) {
  const int n = grid->n();
  const double h = grid->spacing();
  spectral::Samples s(grid->physical_size());
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) s[static_cast<std::size_t>(i2) * n + i1] = f(i1 * h, i2 * h);
  ScalarField out = spectral::to_spectral(grid, s);
  out.dealias();
  return out;
}

double wrap(double d) {
  d = std::fmod(d, kTwoPi);
  if (d > std::numbers::pi) d -= kTwoPi;
  if (d < -std::numbers::pi) d += kTwoPi;
  return d;
}

double get_number(const nlohmann::json& d, const char* key, double fallback, bool required) {
  if (!d.contains(key)) {
    if (required) throw std::invalid_argument(std::string("initial data: missing '") + key + "'");
    return fallback;
  }
  if (!d[key].is_number())
    throw std::invalid_argument(std::string("initial data: '") + key + "' must be a number");
  return d[key].get<double>();
}

std::pair<double, double> get_point(const nlohmann::json& d, const char* key) {
  if (!d.contains(key) || !d[key].is_array() || d[key].size() != 2 || !d[key][0].is_number() ||
      !d[key][1].is_number())
    throw std::invalid_argument(std::string("initial data: '") + key +
                                "' must be a pair of numbers");
  return {d[key][0].get<double>(), d[key][1].get<double>()};
}

}  // namespace

ScalarField gaussian_bump(const GridPtr& grid, double cx, double cy, double width,
                          double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian width must be > 0");
  const double inv = 1.0 / (2.0 * width * width);
  return tabulate(grid, [&](double x, double y) {
    double v = 0.0;
    for (int m1 = -2; m1 <= 2; ++m1)
      for (int m2 = -2; m2 <= 2; ++m2) {
        const double dx = x - cx - kTwoPi * m1, dy = y - cy - kTwoPi * m2;
        v += std::exp(-(dx * dx + dy * dy) * inv);
      }
    return amplitude * v;
  });
}

ScalarField vortex_patch(const GridPtr& grid, double cx, double cy, double radius,
                         double transition, double amplitude) {
  if (!(radius > 0.0) || !(transition > 0.0))
    throw std::invalid_argument("patch radius and transition must be > 0");
  if (radius + transition >= std::numbers::pi)
    throw std::invalid_argument("patch does not fit in the periodic box");
  const double s = transition / kErfSpan;
  return tabulate(grid, [&](double x, double y) {
    const double d = std::hypot(wrap(x - cx), wrap(y - cy));
    return 0.5 * amplitude * std::erfc((d - radius) / s);
  });
}

ScalarField random_band_limited(const GridPtr& grid, std::uint64_t seed, int q_lo, int q_hi,
                                double amplitude) {
  const auto filter = lp::DyadicFilter::for_grid(grid);
  if (q_lo < -1 || q_hi > filter->q_max() || q_lo > q_hi)
    throw std::invalid_argument("band [" + std::to_string(q_lo) + ", " + std::to_string(q_hi) +
                                "] is not inside [-1, " + std::to_string(filter->q_max()) + "]");
  ScalarField f(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto c = f.coefficients();
  std::size_t count = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    // Draw for every mode so the stream does not depend on the band.
    const spectral::cplx z(normal(rng), normal(rng));
    if (i == 0 || !grid->retained(i)) continue;
    bool in_band = true;
    for (int q = -1; q <= filter->q_max() && in_band; ++q)
      if ((q < q_lo || q > q_hi) && filter->block(q)[i] != 0.0) in_band = false;
    if (!in_band) continue;
    c[i] = z;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("band contains no grid mode");
  // Column k1 = 0 holds both k and -k; make it Hermitian.
  for (int k2 = 1; k2 < grid->n() / 2; ++k2)
    c[grid->index_of(0, -k2)] = std::conj(c[grid->index_of(0, k2)]);
  const double m = spectral::lp_norm(f, spectral::kInfinity);
  f *= amplitude / m;
  return f;
}

ScalarField single_mode(const GridPtr& grid, int k1, int k2, double amplitude, bool cosine) {
  return tabulate(grid, [&](double x, double y) {
    const double ph = k1 * x + k2 * y;
    return amplitude * (cosine ? std::cos(ph) : std::sin(ph));
  });
}

ScalarField from_descriptor(const nlohmann::json& desc, const GridPtr& grid, Role role,
                            std::uint64_t default_seed) {
  if (!desc.is_object() || !desc.contains("kind") || !desc["kind"].is_string())
    throw std::invalid_argument("initial data: descriptor needs a string 'kind'");
  const std::string kind = desc["kind"];
  ScalarField f(grid);
  if (kind == "zero") {
  } else if (kind == "gaussian") {
    const auto [cx, cy] = get_point(desc, "center");
    f = gaussian_bump(grid, cx, cy, get_number(desc, "width", 0, true),
                      get_number(desc, "amplitude", 1.0, false));
  } else if (kind == "patch") {
    const auto [cx, cy] = get_point(desc, "center");
    f = vortex_patch(grid, cx, cy, get_number(desc, "radius", 0, true),
                     get_number(desc, "transition", 4.0 * grid->spacing(), false),
                     get_number(desc, "amplitude", 1.0, false));
  } else if (kind == "random_band") {
    if (!desc.contains("band") || !desc["band"].is_array() || desc["band"].size() != 2 ||
        !desc["band"][0].is_number_integer() || !desc["band"][1].is_number_integer())
      throw std::invalid_argument("initial data: 'band' must be a pair of integers");
    std::uint64_t seed = default_seed;
    if (desc.contains("seed")) {
      if (!desc["seed"].is_number_integer())
        throw std::invalid_argument("initial data: 'seed' must be an integer");
      seed = desc["seed"].get<std::uint64_t>();
    }
    f = random_band_limited(grid, seed, desc["band"][0].get<int>(), desc["band"][1].get<int>(),
                            get_number(desc, "amplitude", 1.0, false));
  } else if (kind == "mode") {
    if (!desc.contains("k") || !desc["k"].is_array() || desc["k"].size() != 2)
      throw std::invalid_argument("initial data: 'k' must be a pair of integers");
    const std::string phase = desc.value("phase", std::string("sin"));
    if (phase != "sin" && phase != "cos")
      throw std::invalid_argument("initial data: 'phase' must be sin or cos");
    f = single_mode(grid, desc["k"][0].get<int>(), desc["k"][1].get<int>(),
                    get_number(desc, "amplitude", 1.0, false), phase == "cos");
  } else {
    throw std::invalid_argument("initial data: unknown kind '" + kind + "'");
  }
  if (role == Role::Vorticity) {
    f.coefficients()[0] = 0.0;
    if (desc.contains("target_linf")) {
      const double target = get_number(desc, "target_linf", 0, true);
      const double m = spectral::lp_norm(f, spectral::kInfinity);
      if (m > 0.0) f *= target / m;
    }
  }
  return f;
}

}  // namespace bsq::init
