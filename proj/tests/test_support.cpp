#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bsq/spectral/operators.hpp"

namespace bsq::testing {

ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& f) {
  const int n = grid->n();
  const double h = 2.0 * std::numbers::pi / n;
  spectral::Samples s(grid->physical_size());
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) s[i2 * n + i1] = f(i1 * h, i2 * h);
  return spectral::to_spectral(grid, s);
}

ScalarField random_field(const GridPtr& grid, std::uint64_t seed, int kmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int n = grid->n();
  const double h = 2.0 * std::numbers::pi / n;
  spectral::Samples s(grid->physical_size(), 0.0);
  // Sum of random Fourier modes evaluated directly, so the field is real by
  // construction and independent of the transform under test.
  std::vector<std::array<double, 4>> modes;
  for (int k1 = 0; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      if (k1 * k1 + k2 * k2 > kmax * kmax) continue;
      const double decay = 1.0 / (1.0 + 0.1 * (k1 * k1 + k2 * k2));
      modes.push_back({double(k1), double(k2), normal(rng) * decay, normal(rng) * decay});
    }
  // Separable tables: cos/sin(k x_i) for k in [-kmax, kmax].
  const int w = 2 * kmax + 1;
  std::vector<double> c(w * n), sn(w * n);
  for (int k = -kmax; k <= kmax; ++k)
    for (int i = 0; i < n; ++i) {
      c[(k + kmax) * n + i] = std::cos(k * i * h);
      sn[(k + kmax) * n + i] = std::sin(k * i * h);
    }
  for (const auto& m : modes) {
    const int a = static_cast<int>(m[0]) + kmax, b = static_cast<int>(m[1]) + kmax;
    for (int i2 = 0; i2 < n; ++i2) {
      const double cb = c[b * n + i2], sb = sn[b * n + i2];
      double* row = s.data() + static_cast<std::size_t>(i2) * n;
      for (int i1 = 0; i1 < n; ++i1) {
        const double ca = c[a * n + i1], sa = sn[a * n + i1];
        // cos(p + q) and sin(p + q) by the addition formulas
        row[i1] += m[2] * (ca * cb - sa * sb) + m[3] * (sa * cb + ca * sb);
      }
    }
  }
  ScalarField f = spectral::to_spectral(grid, s);
  f.coefficients()[0] = 0.0;
  f.dealias();
  return f;
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  return max_abs(a - b);
}

double max_abs(const ScalarField& a) {
  double m = 0.0;
  for (double v : spectral::to_physical(a)) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace bsq::testing
