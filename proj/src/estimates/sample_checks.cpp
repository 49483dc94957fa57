#include "bsq/estimates/sample_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bsq/init/generators.hpp"
#include "bsq/init/sigma.hpp"
#include "bsq/lp/blocks.hpp"
#include "bsq/lp/bony.hpp"
#include "bsq/lp/filter.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::estimates {
namespace {

using spectral::kInfinity;

double max_pointwise(const ScalarField& f) { return spectral::lp_norm(f, kInfinity); }

std::vector<double> indices(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return v;
}

EstimateReport exact(std::string name, std::vector<double> errors, std::string what) {
  std::vector<double> zero(errors.size(), 0.0);
  auto idx = indices(errors.size());
  auto r = identity_report(std::move(name), std::move(idx), std::move(errors),
                           std::move(zero), kExactnessTolerance);
  r.extra["measures"] = std::move(what);
  return r;
}

}  // namespace

std::vector<FieldSample> random_samples(const GridPtr& grid, std::size_t count,
                                        std::uint64_t seed) {
  const int qm = lp::DyadicFilter::for_grid(grid)->q_max();
  std::vector<FieldSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Bands of width 1..3 starting at every admissible block.
    const int width = static_cast<int>(i % 3);
    const int lo = static_cast<int>((i / 3) % static_cast<std::size_t>(qm + 1 - width)) - 1;
    const int hi = std::min(lo + width, qm);
    const int lo_th = std::max(-1, lo - 1);
    auto omega = init::random_band_limited(grid, seed + 2 * i, std::max(lo, 0), std::max(hi, 0), 1.0);
    omega.coefficients()[0] = 0.0;
    out.push_back({init::random_band_limited(grid, seed + 2 * i + 1, lo_th, std::max(hi, 0), 1.0),
                   std::move(omega)});
  }
  return out;
}

std::vector<EstimateReport> check_biot_savart_samples(const std::vector<FieldSample>& samples,
                                                      const std::vector<double>& p_grid) {
  std::vector<EstimateReport> out;
  for (double p : p_grid) {
    if (std::isinf(p)) continue;
    std::vector<double> lhs, core;
    for (const auto& s : samples) {
      const auto u = spectral::biot_savart(s.omega);
      lhs.push_back(spectral::grad_lp_norm(u, p));
      core.push_back(p * p / (p - 1.0) * spectral::lp_norm(s.omega, p));
    }
    auto r = empirical_report("samples_biot_savart_p" + dynamics::exponent_label(p),
                              indices(samples.size()), std::move(lhs), std::move(core));
    r.truncation = "finite p only";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_interpolation_samples(const std::vector<FieldSample>& samples) {
  std::vector<double> l1, c1, l2, c2, split, four;
  std::vector<double> actual_low, actual_high;
  for (const auto& s : samples) {
    const auto u = spectral::biot_savart(s.omega);
    l1.push_back(spectral::lp_norm(u, kInfinity));
    const double ua = spectral::l2_norm_spectral(u.u1()), ub = spectral::l2_norm_spectral(u.u2());
    c1.push_back(std::sqrt(std::hypot(ua, ub) * spectral::lp_norm(s.omega, kInfinity)));

    const auto blocks = lp::block_norms(s.theta, kInfinity);
    const double b0 = lp::besov_from_blocks(blocks, 0.0, 1.0);
    const double b1 = lp::besov_from_blocks(blocks, 1.0, 1.0);
    const double th2 = spectral::l2_norm_spectral(s.theta);
    l2.push_back(b0);
    c2.push_back(std::sqrt(th2 * b1));
    // Split at block N: low part <~ 2^N ||theta||_2, high part <= 2^-N ||theta||_{B^1}.
    const int n_split = static_cast<int>(std::lround(0.5 * std::log2(b1 / th2)));
    const double low = std::ldexp(th2, n_split), high = std::ldexp(b1, -n_split);
    split.push_back(std::max(low, high) / std::min(low, high));
    four.push_back(4.0);
    double lo_sum = 0.0, hi_sum = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      (static_cast<int>(i) - 1 < n_split ? lo_sum : hi_sum) += blocks[i];
    actual_low.push_back(lo_sum);
    actual_high.push_back(hi_sum);
  }
  const auto idx = indices(samples.size());
  std::vector<EstimateReport> out;
  out.push_back(empirical_report("samples_interpolation_velocity", idx, std::move(l1), std::move(c1)));
  out.push_back(empirical_report("samples_interpolation_besov", idx, std::move(l2), std::move(c2)));
  auto bal = constant_free_report("samples_interpolation_split_balance", idx, std::move(split),
                                  std::move(four));
  bal.extra["low_block_sums"] = actual_low;
  bal.extra["high_block_sums"] = actual_high;
  out.push_back(std::move(bal));
  return out;
}

EstimateReport check_velocity_besov_samples(const std::vector<FieldSample>& samples) {
  std::vector<double> lhs, core;
  for (const auto& s : samples) {
    const int qm = lp::DyadicFilter::for_grid(s.omega.grid_ptr())->q_max();
    std::vector<double> blocks;
    for (int q = -1; q <= qm; ++q)
      blocks.push_back(spectral::lp_norm(spectral::biot_savart(lp::block(s.omega, q)), kInfinity));
    lhs.push_back(lp::besov_from_blocks(blocks, 1.0, kInfinity));
    core.push_back(spectral::lp_norm(spectral::biot_savart(s.omega), kInfinity) +
                   spectral::lp_norm(s.omega, kInfinity));
  }
  return empirical_report("samples_velocity_besov", indices(samples.size()), std::move(lhs),
                          std::move(core));
}

ScalarField forced_heat(const ScalarField& theta0, const ScalarField& f, double kappa, double t) {
  spectral::require_same_grid(theta0, f);
  if (!(kappa > 0.0) || t < 0.0) throw std::invalid_argument("forced heat needs kappa > 0, t >= 0");
  ScalarField out(theta0.grid_ptr());
  const auto ksq = theta0.grid().ksq();
  auto o = out.coefficients();
  const auto a = theta0.coefficients();
  const auto b = f.coefficients();
  for (std::size_t i = 0; i < o.size(); ++i) {
    const double lk = kappa * ksq[i];
    const double decay = std::exp(-lk * t);
    // (1 - e^{-lk t}) / lk, continued to t at lk = 0
    const double gain = lk == 0.0 ? t : -std::expm1(-lk * t) / lk;
    o[i] = decay * a[i] + gain * b[i];
  }
  return out;
}

std::vector<EstimateReport> check_heat_block_appendix(const GridPtr& grid, std::uint64_t seed) {
  std::vector<EstimateReport> out;
  const int qm = lp::DyadicFilter::for_grid(grid)->q_max();
  {
    const auto th0 = init::random_band_limited(grid, seed, -1, qm, 1.0);
    auto f = init::random_band_limited(grid, seed + 1, -1, 2, 0.5);
    f.coefficients()[0] = 0.2;
    const double kappa = 0.1;
    const double low0 = max_pointwise(lp::block(th0, -1));
    const double lowf = max_pointwise(lp::block(f, -1));
    std::vector<double> t, lhs, rhs;
    for (int i = 0; i <= 20; ++i) {
      const double ti = 0.1 * i;
      t.push_back(ti);
      lhs.push_back(max_pointwise(lp::block(forced_heat(th0, f, kappa, ti), -1)));
      rhs.push_back(low0 + ti * lowf);
    }
    out.push_back(constant_free_report("heat_low_block_maximum", std::move(t), std::move(lhs),
                                       std::move(rhs)));
  }
  const auto g = init::random_band_limited(grid, seed + 2, -1, qm, 1.0);
  std::vector<double> qs, floor, rate, cons, qs_c;
  for (int q = 0; q <= qm; ++q) {
    std::vector<double> lambdas;
    const double unit = 1.0 / std::ldexp(1.0, 2 * q);
    for (double c : {0.0, 0.1, 0.2, 0.4, 0.8}) lambdas.push_back(c * unit);
    const auto d = lp::heat_block_decay(g, q, lambdas);
    qs.push_back(q);
    floor.push_back(0.99 * 0.5625 * std::ldexp(1.0, 2 * q));
    rate.push_back(d.fitted_rate);
    cons.push_back(d.fitted_constant);
  }
  // fitted rate >= 0.99 (3/4)^2 4^q, written as floor <= rate
  out.push_back(constant_free_report("heat_block_decay_rate", qs, floor, rate));
  out.push_back(empirical_report("heat_block_decay_constant", qs, cons,
                                 std::vector<double>(qs.size(), 1.0)));
  return out;
}

std::vector<EstimateReport> exactness_reports(const GridPtr& grid, std::uint64_t seed) {
  std::vector<EstimateReport> out;
  const int n = grid->n();
  const int qm = lp::DyadicFilter::for_grid(grid)->q_max();

  {  // omega = sin(k.x) gives u = (k2, -k1) cos(k.x) / |k|^2
    std::vector<double> err;
    const int modes[][2] = {{1, 0}, {0, 1}, {1, 1}, {3, -2}, {5, 7}, {n / 3, 1}, {2, -(n / 3)}};
    for (const auto& m : modes) {
      const int k1 = m[0], k2 = m[1];
      if (std::max(std::abs(k1), std::abs(k2)) > n / 3) continue;  // removed by the dealias mask
      const double k2n = static_cast<double>(k1 * k1 + k2 * k2);
      const auto u = spectral::biot_savart(init::single_mode(grid, k1, k2, 1.0, false));
      const auto e1 = u.u1() - init::single_mode(grid, k1, k2, k2 / k2n, true);
      const auto e2 = u.u2() - init::single_mode(grid, k1, k2, -k1 / k2n, true);
      err.push_back(std::max(max_pointwise(e1), max_pointwise(e2)));
    }
    out.push_back(exact("exact_biot_savart_modes", std::move(err),
                        "max |u - closed form| per mode"));
  }
  const auto a = init::random_band_limited(grid, seed, -1, qm, 1.0);
  const auto b = init::random_band_limited(grid, seed + 1, -1, qm, 1.0);
  {
    const auto ab = spectral::product(a, b);
    const auto sum = lp::paraproduct(a, b) + lp::paraproduct(b, a) + lp::remainder(a, b);
    out.push_back(exact("exact_bony_identity",
                        {max_pointwise(ab - sum) / max_pointwise(ab)},
                        "|ab - T_a b - T_b a - R(a,b)|_inf / |ab|_inf"));
  }
  {
    const auto filter = lp::DyadicFilter::for_grid(grid);
    double mult = 0.0;
    for (std::size_t i = 0; i < grid->spectral_size(); ++i) {
      double s = 0.0;
      for (int q = -1; q <= qm; ++q) s += filter->block(q)[i];
      mult = std::max(mult, std::abs(s - 1.0));
    }
    ScalarField sum(grid);
    for (int q = -1; q <= qm; ++q) sum += lp::block(a, q);
    out.push_back(exact("exact_partition_of_unity",
                        {mult, max_pointwise(a - sum) / max_pointwise(a)},
                        "max |sum_q phi_q - 1| over modes; |f - sum_q Delta_q f|_inf / |f|_inf"));
  }
  {
    std::vector<double> excess;
    for (int q = 0; q <= qm; ++q) {
      const double unit = 1.0 / std::ldexp(1.0, 2 * q);
      const auto d = lp::heat_block_decay(a, q, {0.0, 0.5 * unit, unit, 2.0 * unit, 4.0 * unit});
      double worst = 0.0;
      for (std::size_t i = 0; i < d.lambda.size(); ++i)
        worst = std::max(worst, d.l2_ratio[i] / d.l2_floor[i] - 1.0);
      excess.push_back(std::max(worst, 0.0));
    }
    out.push_back(exact("exact_heat_block_l2_floor", std::move(excess),
                        "max(0, |e^{lambda Lap} Delta_q g|_2 / (e^{-lambda (3/4)^2 4^q} "
                        "|Delta_q g|_2) - 1) per q"));
  }
  {
    const auto s = spectral::to_physical(a);
    double grid_sum = 0.0;
    for (double v : s) grid_sum += v * v;
    grid_sum *= 4.0 * std::numbers::pi * std::numbers::pi / (static_cast<double>(n) * n);
    const double spec = spectral::l2_norm_spectral(a);
    out.push_back(exact("exact_parseval", {std::abs(grid_sum - spec * spec) / (spec * spec)},
                        "relative gap between grid and coefficient L2 norms"));
  }
  return out;
}

std::vector<EstimateReport> sigma_reports(std::size_t points, double h) {
  const init::RadialProfile prof;
  const auto pts = init::sigma_sample_points(prof, points);
  const auto rep = init::verify_sigma_stationary(prof, pts, h);
  std::vector<EstimateReport> out;
  auto add = [&](std::string name, double value, double tol, const char* what) {
    auto r = identity_report(std::move(name), {0.0}, {value}, {0.0}, tol);
    r.extra["measures"] = what;
    r.extra["points"] = rep.points;
    r.extra["fd_step"] = rep.h;
    out.push_back(std::move(r));
  };
  add("sigma_divergence", rep.max_divergence, 1e-6, "max |div sigma| by centered differences");
  add("sigma_transport_curl", rep.max_curl_transport, 1e-6,
      "max |curl(sigma . grad sigma)| by centered differences");
  add("sigma_vorticity", rep.max_vorticity_error, 1e-6, "max |curl sigma - g(|x|)|");
  add("sigma_far_field", rep.max_far_field_error, 1e-8,
      "max relative gap to (m / 2 pi) x^perp / |x|^2 for |x| >= rho1");
  add("sigma_rotation", rep.max_rotation_error, 1e-10, "max |sigma(Rx) - R sigma(x)|");
  add("sigma_mass_gauss_kronrod", rep.mass_error_gk, 1e-8, "relative mass error");
  add("sigma_mass_tanh_sinh", rep.mass_error_ts, 1e-8, "relative mass error");
  return out;
}

}  // namespace bsq::estimates
