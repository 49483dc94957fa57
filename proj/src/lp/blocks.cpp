#include "bsq/lp/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bsq/simd/kernels.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::lp {
namespace {

ScalarField apply(const ScalarField& f, std::span<const double> m) {
  ScalarField out = f;
  simd::scale_real(out.coefficients(), m);
  return out;
}

}  // namespace

ScalarField block(const ScalarField& f, int q) {
  if (q < -1) return ScalarField(f.grid_ptr());
  return apply(f, DyadicFilter::for_grid(f.grid_ptr())->block(q));
}

ScalarField low_cutoff(const ScalarField& f, int p) {
  return apply(f, DyadicFilter::for_grid(f.grid_ptr())->low(p));
}

ScalarField block_tilde(const ScalarField& f, int q) {
  const auto filter = DyadicFilter::for_grid(f.grid_ptr());
  ScalarField out(f.grid_ptr());
  for (int j = q - 1; j <= q + 1; ++j)
    if (j >= -1 && j <= filter->q_max()) out += block(f, j);
  return out;
}

std::vector<double> block_norms(const ScalarField& f, double p) {
  const int qm = DyadicFilter::for_grid(f.grid_ptr())->q_max();
  std::vector<double> out;
  out.reserve(qm + 2);
  for (int q = -1; q <= qm; ++q) out.push_back(spectral::lp_norm(block(f, q), p));
  return out;
}

double besov_from_blocks(const std::vector<double>& norms, double s, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("summation exponent must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double v = std::pow(2.0, s * (static_cast<int>(i) - 1)) * norms[i];
    if (std::isinf(r))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, r);
  }
  return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

double besov_norm(const ScalarField& f, const BesovSpec& spec) {
  spec.validate();
  return besov_from_blocks(block_norms(f, spec.p), spec.s, spec.r);
}

BlockDecomposition::BlockDecomposition(const ScalarField& f) : n_(f.grid().n()) {
  const auto filter = DyadicFilter::for_grid(f.grid_ptr());
  q_max_ = filter->q_max();
  zero_.assign(f.grid().physical_size(), 0.0);
  for (int q = -1; q <= q_max_; ++q)
    blocks_.push_back(spectral::to_physical(apply(f, filter->block(q))));
  // Partial sums in physical space match the spectral S_p up to rounding.
  lows_.push_back(blocks_[0]);
  for (int p = 1; p <= q_max_ + 1; ++p) {
    Samples s = lows_.back();
    simd::axpy(1.0, blocks_[p], s);
    lows_.push_back(std::move(s));
  }
  for (int q = -1; q <= q_max_; ++q) {
    Samples t = blocks_[q + 1];
    if (q - 1 >= -1) simd::axpy(1.0, blocks_[q], t);
    if (q + 1 <= q_max_) simd::axpy(1.0, blocks_[q + 2], t);
    tildes_.push_back(std::move(t));
  }
}

const Samples& BlockDecomposition::block(int q) const {
  if (q < -1 || q > q_max_) return zero_;
  return blocks_[q + 1];
}

const Samples& BlockDecomposition::low(int p) const {
  if (p < 0) return zero_;
  return lows_[std::min(p, q_max_ + 1)];
}

const Samples& BlockDecomposition::tilde(int q) const {
  if (q < -1 || q > q_max_) return zero_;
  return tildes_[q + 1];
}

double BlockDecomposition::block_norm(int q, double p) const {
  return spectral::lp_norm_samples(block(q), n_, p);
}

HeatBlockDecay heat_block_decay(const ScalarField& g, int q,
                                const std::vector<double>& lambdas) {
  if (q < 0) throw std::invalid_argument("heat block decay needs q >= 0");
  const ScalarField b = block(g, q);
  const double base_inf = spectral::lp_norm(b, spectral::kInfinity);
  const double base_l2 = spectral::l2_norm_spectral(b);
  const double datum = spectral::l2_norm_spectral(g);
  if (!(base_l2 > 1e-14 * datum) || !(base_inf > 0.0))
    throw std::invalid_argument("block " + std::to_string(q) + " of the datum is zero");
  HeatBlockDecay r;
  r.q = q;
  const double floor_rate = 0.5625 * std::ldexp(1.0, 2 * q);
  for (double lam : lambdas) {
    const ScalarField h = spectral::heat_semigroup(b, lam);
    r.lambda.push_back(lam);
    r.linf_ratio.push_back(spectral::lp_norm(h, spectral::kInfinity) / base_inf);
    r.l2_ratio.push_back(spectral::l2_norm_spectral(h) / base_l2);
    r.l2_floor.push_back(std::exp(-lam * floor_rate));
    if (r.l2_ratio.back() > r.l2_floor.back() * (1.0 + 1e-12)) r.l2_bound_holds = false;
  }
  // Fit log ratio = log C - rate * lambda by least squares.
  const std::size_t m = r.lambda.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = r.lambda[i];
      const double y = std::log(r.linf_ratio[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double den = m * sxx - sx * sx;
    r.fitted_rate = den > 0.0 ? -(m * sxy - sx * sy) / den : 0.0;
  }
  for (std::size_t i = 0; i < m; ++i)
    r.fitted_constant = std::max(
        r.fitted_constant, r.linf_ratio[i] * std::exp(r.fitted_rate * r.lambda[i]));
  return r;
}

}  // namespace bsq::lp
