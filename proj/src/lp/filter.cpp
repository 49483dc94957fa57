#include "bsq/lp/filter.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bsq::lp {
namespace {

constexpr double kInner = 3.0 / 4.0;
constexpr double kOuter = 4.0 / 3.0;

double bump(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (t * (1.0 - t)));
}

double bump_integral(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(bump, a, b, 8, 1e-13);
}

double bump_mass() {
  static const double m = bump_integral(0.0, 1.0);
  return m;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // Integrate over the shorter side; the bump is symmetric about 1/2.
  if (t > 0.5) return 1.0 - smooth_step(1.0 - t);
  return bump_integral(0.0, t) / bump_mass();
}

double chi(double r) {
  r = std::abs(r);
  if (r <= kInner) return 1.0;
  if (r >= kOuter) return 0.0;
  return 1.0 - smooth_step((r - kInner) / (kOuter - kInner));
}

double phi(double r) { return chi(r / 2.0) - chi(r); }

void BesovSpec::validate() const {
  if (!(p >= 1.0) || !(r >= 1.0))
    throw std::invalid_argument("Besov exponents p and r must be >= 1");
}

int DyadicFilter::q_max_for(int n) {
  const int cut = n / 3;
  int q = 0;
  while ((1 << q) < cut) ++q;
  return q;
}

std::shared_ptr<const DyadicFilter> DyadicFilter::for_grid(const GridPtr& grid) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const DyadicFilter>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[grid->n()];
  if (!slot) slot.reset(new DyadicFilter(*grid));
  return slot;
}

DyadicFilter::DyadicFilter(const spectral::Grid& grid)
    : n_(grid.n()), q_max_(q_max_for(grid.n())) {
  const auto ksq = grid.ksq();
  const std::size_t ns = ksq.size();
  zero_.assign(ns, 0.0);
  // chi(|k| / 2^j) for j = 0 .. q_max+1, memoised on |k|^2.
  std::vector<bsq::AlignedVector<double>> chis(q_max_ + 2);
  for (int j = 0; j <= q_max_ + 1; ++j) {
    std::unordered_map<double, double> memo;
    chis[j].resize(ns);
    const double scale = std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < ns; ++i) {
      auto [it, fresh] = memo.try_emplace(ksq[i], 0.0);
      if (fresh) it->second = chi(std::sqrt(ksq[i]) * scale);
      chis[j][i] = it->second;
    }
  }
  blocks_.resize(q_max_ + 2);
  blocks_[0] = chis[0];
  for (int q = 0; q <= q_max_; ++q) {
    blocks_[q + 1].resize(ns);
    for (std::size_t i = 0; i < ns; ++i)
      blocks_[q + 1][i] = chis[q + 1][i] - chis[q][i];
  }
  // S_p telescopes to chi(|k| / 2^p), so S_{q+1} - S_q is bit-identical to
  // the block multiplier, and S_{q_max+1} is exactly 1 on the whole grid.
  lows_ = std::move(chis);
}

std::span<const double> DyadicFilter::block(int q) const {
  if (q < -1 || q > q_max_)
    throw std::out_of_range("block index " + std::to_string(q) +
                            " outside [-1, " + std::to_string(q_max_) + "]");
  return blocks_[q + 1];
}

std::span<const double> DyadicFilter::low(int p) const {
  if (p < 0) return zero_;
  if (p > q_max_ + 1) p = q_max_ + 1;
  return lows_[p];
}

}  // namespace bsq::lp
