#pragma once
// Smooth dyadic partition of unity on the grid frequencies.
//
//   chi(r) = 1 - H((r - 3/4) / (4/3 - 3/4)),  H(t) = int_0^t b / int_0^1 b,
//   b(t)   = exp(-1 / (t (1 - t))),
//   phi(r) = chi(r/2) - chi(r).
//
// Block q >= 0 has multiplier phi(|k| / 2^q); block -1 has chi(|k|).

#include <memory>
#include <span>
#include <vector>

#include "bsq/spectral/grid.hpp"
#include "bsq/spectral/aligned.hpp"

namespace bsq::lp {

using spectral::GridPtr;

// Normalised smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
double chi(double r);
double phi(double r);

struct BesovSpec {
  double s = 0.0;
  double p = 2.0;  // Lebesgue exponent, may be infinity
  double r = 2.0;  // summation exponent, may be infinity
  void validate() const;  // throws std::invalid_argument unless p, r >= 1
};

class DyadicFilter {
 public:
  // Filters depend only on n and are shared between grids of equal size.
  static std::shared_ptr<const DyadicFilter> for_grid(const GridPtr& grid);
  // q_max = ceil(log2(floor(n/3))).
  static int q_max_for(int n);

  int q_min() const noexcept { return -1; }
  int q_max() const noexcept { return q_max_; }
  int n() const noexcept { return n_; }

  // Multiplier of Delta_q over the half spectrum; throws std::out_of_range
  // outside [-1, q_max].
  std::span<const double> block(int q) const;
  // Multiplier of S_p = sum_{q' <= p-1} Delta_q'. Zero for p <= -1 and the
  // identity for p > q_max.
  std::span<const double> low(int p) const;

 private:
  explicit DyadicFilter(const spectral::Grid& grid);
  int n_;
  int q_max_;
  std::vector<bsq::AlignedVector<double>> blocks_;  // index q + 1
  std::vector<bsq::AlignedVector<double>> lows_;    // index p in [0, q_max+1]
  bsq::AlignedVector<double> zero_;
};

}  // namespace bsq::lp
