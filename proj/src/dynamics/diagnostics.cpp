#include "bsq/dynamics/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "bsq/lp/blocks.hpp"
#include "bsq/lp/bony.hpp"
#include "bsq/lp/filter.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::dynamics {
namespace {

using spectral::kInfinity;
using spectral::Samples;

std::string p_channel(const std::string& stem, double p) { return stem + "_" + exponent_label(p); }
std::string a_channel(const std::string& stem, double a) {
  return stem + "_a" + exponent_label(a);
}

// Sobolev index of the Besov space paired with alpha in the smoothing estimate.
double smoothing_index(double alpha) { return -1.0 + 2.0 / alpha; }

std::vector<double> velocity_block_linf(const ScalarField& omega) {
  const int qm = lp::DyadicFilter::for_grid(omega.grid_ptr())->q_max();
  std::vector<double> out;
  for (int q = -1; q <= qm; ++q)
    out.push_back(spectral::lp_norm(spectral::biot_savart(lp::block(omega, q)), kInfinity));
  return out;
}

std::vector<double> pair_block_linf(const ScalarField& a, const ScalarField& b) {
  const int qm = lp::DyadicFilter::for_grid(a.grid_ptr())->q_max();
  std::vector<double> out;
  for (int q = -1; q <= qm; ++q)
    out.push_back(spectral::lp_norm(spectral::VectorField{lp::block(a, q), lp::block(b, q)},
                                    kInfinity));
  return out;
}

// Frobenius magnitude of grad u as the pair (|(d1u1,d2u1)|, |(d1u2,d2u2)|).
std::pair<Samples, Samples> grad_u_pair(const VelocityField& u) {
  const Samples a = spectral::to_physical(spectral::partial(u.u1(), 1));
  const Samples b = spectral::to_physical(spectral::partial(u.u1(), 2));
  const Samples c = spectral::to_physical(spectral::partial(u.u2(), 1));
  const Samples d = spectral::to_physical(spectral::partial(u.u2(), 2));
  Samples ab(a.size()), cd(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = std::hypot(a[i], b[i]);
    cd[i] = std::hypot(c[i], d[i]);
  }
  return {std::move(ab), std::move(cd)};
}

std::vector<std::string> integrand_names(const RunConfig& cfg) {
  std::vector<std::string> v;
  for (double p : cfg.p_grid) v.push_back(p_channel("d1theta_lp", p));
  v.insert(v.end(), {"d1theta_b0", "grad_u_linf", "adv_bm1", "h1_ul2", "g_core"});
  for (double a : cfg.alpha_grid)
    if (!std::isinf(a)) v.push_back(a_channel("theta_bs_pow", a));
  return v;
}

}  // namespace

std::vector<double> yudovich_grid(double r, double p_max) {
  if (!(r >= 1.0) || !(p_max >= r) || std::isinf(p_max))
    throw std::invalid_argument("Yudovich grid needs 1 <= r <= p_max < inf");
  std::vector<double> out;
  for (double p = r; p <= p_max; p *= 2.0) out.push_back(p);
  return out;
}

YudovichValue yudovich_norm(const VelocityField& u, double r, double p_max) {
  YudovichValue y;
  y.p_grid = yudovich_grid(r, p_max);
  const auto [ab, cd] = grad_u_pair(u);
  const int n = u.grid().n();
  y.argmax = y.p_grid.front();
  for (double p : y.p_grid) {
    const double v = spectral::lp_norm_samples(ab, cd, n, p) / p;
    if (v > y.value) {
      y.value = v;
      y.argmax = p;
    }
  }
  return y;
}

std::vector<std::string> channel_names(const RunConfig& cfg) {
  std::vector<std::string> c{"time",          "dt",           "q_max",          "theta_mean",
                             "omega_mean",    "theta_l2",     "grad_theta_l2",  "theta_h1",
                             "dissipation",   "u_l2",         "u_linf",         "u1_linf",
                             "u2_linf",       "omega_linf",   "grad_u_linf",    "grad_theta_linf",
                             "theta_u2_inner"};
  for (double p : cfg.p_grid) {
    c.push_back(p_channel("omega_lp", p));
    c.push_back(p_channel("d1theta_lp", p));
    c.push_back(p_channel("int_d1theta_lp", p));
    if (!std::isinf(p)) c.push_back(p_channel("grad_u_lp", p));
  }
  c.insert(c.end(), {"grad_u_yudovich", "grad_u_yudovich_p", "theta_bm1", "theta_b0", "theta_b1",
                     "theta_b0_inf"});
  for (double a : cfg.alpha_grid) {
    c.push_back(a_channel("theta_bs", a));
    c.push_back(a_channel("theta_smooth", a));
  }
  c.insert(c.end(),
           {"Theta",          "d1theta_b0",        "int_d1theta_b0",    "d1theta_bm1",
            "d2theta_bm1",    "omega_b0",          "int_grad_u_linf",   "u_b1_inf",
            "adv_bm1",        "int_adv_bm1",       "bony_divr_bm1",     "bony_t_grad_u_bm1",
            "bony_t_u_grad_bm1", "remainder_b1_inf", "int_h1_ul2",       "f_core",
            "g_core",         "int_g_core"});
  return c;
}

DiagnosticsRecorder::DiagnosticsRecorder(const RunConfig& cfg)
    : cfg_(cfg),
      traj_(channel_names(cfg)),
      yud_grid_(yudovich_grid(cfg.yudovich_r, cfg.yudovich_p_max)),
      integrands_(integrand_names(cfg)),
      prev_integrand_(integrands_.size(), 0.0),
      integral_(integrands_.size(), 0.0),
      smooth_sup_(cfg.alpha_grid.size(), 0.0) {}

void DiagnosticsRecorder::record(const SolverState& s, double dt) {
  const auto& grid = s.theta.grid_ptr();
  const int n = grid->n();
  const double kappa = cfg_.kappa;
  const int q_max = lp::DyadicFilter::for_grid(grid)->q_max();
  std::unordered_map<std::string, double> v;

  const VelocityField u = s.velocity();
  const ScalarField d1 = spectral::partial(s.theta, 1);
  const ScalarField d2 = spectral::partial(s.theta, 2);
  const Samples d1p = spectral::to_physical(d1);
  const Samples d2p = spectral::to_physical(d2);
  const Samples omp = spectral::to_physical(s.omega);
  const Samples u1p = spectral::to_physical(u.u1());
  const Samples u2p = spectral::to_physical(u.u2());
  const auto [gab, gcd] = grad_u_pair(u);

  v["time"] = s.t;
  v["dt"] = dt;
  v["q_max"] = q_max;
  v["theta_mean"] = s.theta.mean();
  v["omega_mean"] = s.omega.mean();
  const double th_l2 = spectral::l2_norm_spectral(s.theta);
  const double g1 = spectral::l2_norm_spectral(d1), g2 = spectral::l2_norm_spectral(d2);
  const double grad_l2 = std::sqrt(g1 * g1 + g2 * g2);
  const double h1 = std::sqrt(th_l2 * th_l2 + grad_l2 * grad_l2);
  v["theta_l2"] = th_l2;
  v["grad_theta_l2"] = grad_l2;
  v["theta_h1"] = h1;
  v["dissipation"] = s.dissipation;
  const double ua = spectral::l2_norm_spectral(u.u1()), ub = spectral::l2_norm_spectral(u.u2());
  const double u_l2 = std::sqrt(ua * ua + ub * ub);
  const double u_linf = spectral::lp_norm_samples(u1p, u2p, n, kInfinity);
  const double om_linf = spectral::lp_norm_samples(omp, n, kInfinity);
  v["u_l2"] = u_l2;
  v["u_linf"] = u_linf;
  v["u1_linf"] = spectral::lp_norm_samples(u1p, n, kInfinity);
  v["u2_linf"] = spectral::lp_norm_samples(u2p, n, kInfinity);
  v["omega_linf"] = om_linf;
  v["grad_u_linf"] = spectral::lp_norm_samples(gab, gcd, n, kInfinity);
  v["grad_theta_linf"] = spectral::lp_norm_samples(d1p, d2p, n, kInfinity);
  v["theta_u2_inner"] = spectral::l2_inner(s.theta, u.u2());

  for (double p : cfg_.p_grid) {
    v[p_channel("omega_lp", p)] = spectral::lp_norm_samples(omp, n, p);
    v[p_channel("d1theta_lp", p)] = spectral::lp_norm_samples(d1p, n, p);
    if (!std::isinf(p)) v[p_channel("grad_u_lp", p)] = spectral::lp_norm_samples(gab, gcd, n, p);
  }
  double yud = 0.0, yud_p = yud_grid_.front();
  for (double p : yud_grid_) {
    const double val = spectral::lp_norm_samples(gab, gcd, n, p) / p;
    if (val > yud) {
      yud = val;
      yud_p = p;
    }
  }
  v["grad_u_yudovich"] = yud;
  v["grad_u_yudovich_p"] = yud_p;

  // Besov norms from L^inf block norms.
  const auto th_blocks = lp::block_norms(s.theta, kInfinity);
  const auto d1_blocks = lp::block_norms(d1, kInfinity);
  const auto d2_blocks = lp::block_norms(d2, kInfinity);
  const auto om_blocks = lp::block_norms(s.omega, kInfinity);
  auto besov = [&](const std::string& field, const std::vector<double>& blocks, double sidx,
                   double r) {
    const double val = lp::besov_from_blocks(blocks, sidx, r);
    besov_.push_back({s.t, field, sidx, kInfinity, r, val, q_max});
    return val;
  };
  v["theta_bm1"] = besov("theta", th_blocks, -1.0, 1.0);
  v["theta_b0"] = besov("theta", th_blocks, 0.0, 1.0);
  v["theta_b1"] = besov("theta", th_blocks, 1.0, 1.0);
  v["theta_b0_inf"] = besov("theta", th_blocks, 0.0, kInfinity);
  for (double a : cfg_.alpha_grid) {
    const double sidx = smoothing_index(a);
    v[a_channel("theta_bs", a)] = lp::besov_from_blocks(th_blocks, sidx, 1.0);
  }
  v["d1theta_b0"] = besov("d1theta", d1_blocks, 0.0, 1.0);
  v["d1theta_bm1"] = besov("d1theta", d1_blocks, -1.0, 1.0);
  v["d2theta_bm1"] = besov("d2theta", d2_blocks, -1.0, 1.0);
  v["omega_b0"] = besov("omega", om_blocks, 0.0, 1.0);
  v["u_b1_inf"] = besov("u", velocity_block_linf(s.omega), 1.0, kInfinity);

  const ScalarField adv = spectral::advect(u, s.theta);
  v["adv_bm1"] = besov("advection", lp::block_norms(adv, kInfinity), -1.0, 1.0);
  const lp::BonyAdvection bony = lp::bony_advection(u, s.theta);
  v["bony_divr_bm1"] = lp::besov_from_blocks(lp::block_norms(bony.div_r, kInfinity), -1.0, 1.0);
  v["bony_t_grad_u_bm1"] =
      lp::besov_from_blocks(lp::block_norms(bony.t_grad_u, kInfinity), -1.0, 1.0);
  v["bony_t_u_grad_bm1"] =
      lp::besov_from_blocks(lp::block_norms(bony.t_u_grad, kInfinity), -1.0, 1.0);
  const ScalarField r1 = lp::remainder(u.u1(), s.theta);
  const ScalarField r2 = lp::remainder(u.u2(), s.theta);
  v["remainder_b1_inf"] = lp::besov_from_blocks(pair_block_linf(r1, r2), 1.0, kInfinity);

  v["h1_ul2"] = h1 * u_l2;
  v["g_core"] = kappa > 0.0 ? h1 + u_l2 * th_l2 / kappa : 0.0;
  for (double a : cfg_.alpha_grid)
    if (!std::isinf(a)) v[a_channel("theta_bs_pow", a)] = std::pow(v[a_channel("theta_bs", a)], a);

  // Trapezoid integrals on the output cadence.
  const double span = first_ ? 0.0 : s.t - prev_time_;
  for (std::size_t i = 0; i < integrands_.size(); ++i) {
    const double now = v[integrands_[i]];
    if (!first_) integral_[i] += 0.5 * span * (prev_integrand_[i] + now);
    prev_integrand_[i] = now;
    v["int_" + integrands_[i]] = integral_[i];
  }
  prev_time_ = s.t;

  double theta_fn = 0.0;
  for (std::size_t i = 0; i < cfg_.alpha_grid.size(); ++i) {
    const double a = cfg_.alpha_grid[i];
    double val;
    if (std::isinf(a)) {
      smooth_sup_[i] = std::max(smooth_sup_[i], v[a_channel("theta_bs", a)]);
      val = smooth_sup_[i];
    } else {
      val = std::pow(kappa, 1.0 / a) * std::pow(v["int_" + a_channel("theta_bs_pow", a)], 1.0 / a);
    }
    v[a_channel("theta_smooth", a)] = val;
    theta_fn = std::max(theta_fn, val);
  }
  v["Theta"] = theta_fn;
  if (first_) theta_initial_ = theta_fn;
  v["f_core"] = (1.0 + kappa * s.t) * (theta_initial_ + v["int_h1_ul2"]);
  first_ = false;

  std::vector<double> row;
  row.reserve(traj_.columns().size());
  for (const auto& name : traj_.columns()) {
    const auto it = v.find(name);
    if (it == v.end()) throw std::logic_error("diagnostic channel not computed: " + name);
    row.push_back(it->second);
  }
  traj_.append(std::move(row));
}

std::string DiagnosticsRecorder::besov_csv() const {
  std::string out = "time,field,s,p,r,value,q_max\n";
  for (const auto& b : besov_) {
    out += format_double(b.time) + "," + b.field + "," + format_double(b.s) + "," +
           exponent_label(b.p) + "," + exponent_label(b.r) + "," + format_double(b.value) + "," +
           std::to_string(b.q_max) + "\n";
  }
  return out;
}

}  // namespace bsq::dynamics
