#include "bsq/estimates/twin.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "bsq/dynamics/diagnostics.hpp"
#include "bsq/dynamics/run.hpp"
#include "bsq/dynamics/stepper.hpp"
#include "bsq/estimates/trajectory_checks.hpp"
#include "bsq/init/generators.hpp"
#include "bsq/spectral/operators.hpp"

namespace bsq::estimates {
namespace {

using dynamics::ConfigError;
using dynamics::exponent_label;
using dynamics::RunConfig;
using dynamics::SolverState;
using dynamics::Trajectory;
using spectral::kInfinity;

std::vector<std::string> twin_columns(const RunConfig& cfg) {
  std::vector<std::string> c{"time",           "dt",
                             "du_l2",          "du_linf",
                             "dtheta_l2",      "X",
                             "Y",              "gamma",
                             "Gamma",          "grad_u1_yudovich",
                             "grad_theta1_linf", "du_rate",
                             "dtheta_rate",    "du_rate_fd",
                             "dtheta_rate_fd", "dtheta_rhs"};
  for (double p : cfg.twin.p_list) c.push_back("du_rhs_p" + exponent_label(p));
  for (double p : cfg.twin.p_list) {
    c.push_back("bound_p" + exponent_label(p));
    c.push_back("oracle_p" + exponent_label(p));
  }
  return c;
}

void require_partner(const RunConfig& a, const RunConfig& b) {
  auto same = [](const char* key, bool ok) {
    if (!ok) throw ConfigError(key, "twin runs must share this value");
  };
  same("n", a.n == b.n);
  same("dt", a.dt == b.dt);
  same("kappa", a.kappa == b.kappa);
  same("cfl", a.cfl == b.cfl);
  same("adaptive", a.adaptive == b.adaptive);
  same("t_end", a.t_end == b.t_end);
  same("system", a.system == b.system);
  same("diag_every", a.diag_every == b.diag_every);
}

}  // namespace

spectral::ScalarField twin_perturbation(const RunConfig& cfg, const spectral::GridPtr& grid) {
  const auto& desc = cfg.twin.perturbation;
  auto d = init::from_descriptor(desc, grid, init::Role::Vorticity, cfg.seed + 101);
  const double target = desc.contains("amplitude") ? desc["amplitude"].get<double>() : 1.0;
  const double now = spectral::lp_norm(spectral::biot_savart(d), kInfinity);
  if (now > 0.0) d *= target / now;
  return d;
}

TwinBound twin_integrated_bound(const std::vector<double>& t, const std::vector<double>& a,
                                const std::vector<double>& b, const std::vector<double>& gamma,
                                double z0, double p, int substeps) {
  const std::size_t n = t.size();
  TwinBound out;
  if (n == 0) return out;
  // Linear interpolants on [t_i, t_{i+1}].
  auto lerp = [](double x0, double x1, double s) { return x0 + (x1 - x0) * s; };
  double big_gamma = 0.0, drive = 0.0, z = z0;
  const double z0p = std::pow(std::max(z0, 0.0), 1.0 / p);
  auto integrand = [&](double av, double bv, double gam) {
    return av * std::pow(std::max(bv, 0.0), 2.0 / p) * std::exp(-(2.0 / p) * gam);
  };
  auto rhs = [&](double zz, double av, double bv, double gv) {
    return 2.0 * p * av * std::pow(std::max(bv, 0.0), 2.0 / p) *
               std::pow(std::max(zz, kZeroGuard), 1.0 - 1.0 / p) +
           2.0 * gv * zz;
  };
  out.bound.push_back(z0);
  out.oracle.push_back(z0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = (t[i + 1] - t[i]) / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double s0 = static_cast<double>(k) / substeps, s1 = static_cast<double>(k + 1) / substeps;
      const double sm = 0.5 * (s0 + s1);
      const double a0 = lerp(a[i], a[i + 1], s0), am = lerp(a[i], a[i + 1], sm),
                   a1 = lerp(a[i], a[i + 1], s1);
      const double b0 = lerp(b[i], b[i + 1], s0), bm = lerp(b[i], b[i + 1], sm),
                   b1 = lerp(b[i], b[i + 1], s1);
      const double g0 = lerp(gamma[i], gamma[i + 1], s0), gm = lerp(gamma[i], gamma[i + 1], sm),
                   g1 = lerp(gamma[i], gamma[i + 1], s1);
      // Gamma is exact for the linear gamma; the drive integral uses Simpson.
      const double G0 = big_gamma;
      const double Gm = G0 + 0.5 * h * 0.5 * (g0 + gm);
      const double G1 = G0 + 0.5 * h * (g0 + g1);
      drive += h / 6.0 * (integrand(a0, b0, G0) + 4.0 * integrand(am, bm, Gm) + integrand(a1, b1, G1));
      big_gamma = G1;
      // Classical RK4 for the comparison ODE.
      const double k1 = rhs(z, a0, b0, g0);
      const double k2 = rhs(z + 0.5 * h * k1, am, bm, gm);
      const double k3 = rhs(z + 0.5 * h * k2, am, bm, gm);
      const double k4 = rhs(z + h * k3, a1, b1, g1);
      z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.bound.push_back(std::exp(2.0 * big_gamma) * std::pow(z0p + 2.0 * drive, p));
    out.oracle.push_back(z);
  }
  return out;
}

TwinResult run_twin(const RunConfig& cfg, const std::optional<RunConfig>& partner,
                    const std::optional<std::filesystem::path>& out_dir) {
  const RunConfig& cfg2 = partner ? *partner : cfg;
  require_partner(cfg, cfg2);
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    dynamics::write_config(*out_dir, cfg);
  }
  SolverState s1 = dynamics::initial_state(cfg);
  SolverState s2 = dynamics::initial_state(cfg2);
  s2.omega += twin_perturbation(cfg, s2.omega.grid_ptr());
  const auto grid = s1.theta.grid_ptr();
  dynamics::Stepper st1(grid, cfg.kappa, cfg.system, cfg.cfl);
  dynamics::Stepper st2(s2.theta.grid_ptr(), cfg2.kappa, cfg2.system, cfg2.cfl);

  Trajectory tr(twin_columns(cfg));
  double prev_t = 0.0, prev_gamma = 0.0, big_gamma = 0.0;
  bool first = true;
  auto record = [&](double dt) {
    const auto u1 = s1.velocity(), u2 = s2.velocity();
    const auto du = u2 - u1;
    const auto dth = s2.theta - s1.theta;
    const double du_l2 = std::sqrt(spectral::l2_inner(du, du));
    const double du_inf = spectral::lp_norm(du, kInfinity);
    const double dth_l2 = spectral::l2_norm_spectral(dth);
    const double x = std::hypot(du_l2, dth_l2);
    const auto y = dynamics::yudovich_norm(u1, cfg.yudovich_r, cfg.yudovich_p_max);
    const double gth = spectral::grad_lp_norm(s1.theta, kInfinity);
    const double gamma = 0.5 * (1.0 + gth);
    if (!first) big_gamma += 0.5 * (s1.t - prev_t) * (prev_gamma + gamma);
    prev_t = s1.t;
    prev_gamma = gamma;
    first = false;

    const auto k1 = dynamics::tendency(s1.theta, s1.omega, u1, cfg.system);
    const auto k2 = dynamics::tendency(s2.theta, s2.omega, u2, cfg.system);
    const double du_rate = spectral::l2_inner(du, spectral::biot_savart(k2.domega - k1.domega));
    const double gd1 = spectral::l2_norm_spectral(spectral::partial(dth, 1));
    const double gd2 = spectral::l2_norm_spectral(spectral::partial(dth, 2));
    const double dth_rate =
        spectral::l2_inner(dth, k2.dtheta - k1.dtheta) - cfg.kappa * (gd1 * gd1 + gd2 * gd2);

    std::unordered_map<std::string, double> v{
        {"time", s1.t},          {"dt", dt},
        {"du_l2", du_l2},        {"du_linf", du_inf},
        {"dtheta_l2", dth_l2},   {"X", x},
        {"Y", std::exp(-big_gamma) * x},
        {"gamma", gamma},        {"Gamma", big_gamma},
        {"grad_u1_yudovich", y.value},
        {"grad_theta1_linf", gth},
        {"du_rate", du_rate},    {"dtheta_rate", dth_rate},
        {"du_rate_fd", 0.0},     {"dtheta_rate_fd", 0.0},
        {"dtheta_rhs", gth * dth_l2 * du_l2}};
    for (double p : cfg.twin.p_list) {
      const double pp = p / (p - 1.0);
      v["du_rhs_p" + exponent_label(p)] =
          p * y.value * std::pow(du_inf, 2.0 / p) * std::pow(du_l2, 2.0 / pp) + dth_l2 * du_l2;
      v["bound_p" + exponent_label(p)] = 0.0;
      v["oracle_p" + exponent_label(p)] = 0.0;
    }
    std::vector<double> row;
    for (const auto& c : tr.columns()) row.push_back(v.at(c));
    tr.append(std::move(row));
  };

  record(cfg.dt);
  const std::size_t fixed = cfg.adaptive ? 0 : dynamics::fixed_step_count(cfg.dt, cfg.t_end);
  std::size_t k = 0;
  while (cfg.adaptive ? s1.t < cfg.t_end * (1.0 - 1e-14) : k < fixed) {
    ++k;
    double target;
    if (cfg.adaptive) {
      const double dt = std::min({cfg.dt, st1.stable_dt(s1), st2.stable_dt(s2)});
      target = std::min(s1.t + dt, cfg.t_end);
    } else {
      target = std::min(static_cast<double>(k) * cfg.dt, cfg.t_end);
    }
    const double dt = target - s1.t;
    st1.step(s1, dt);
    st2.step(s2, dt);
    s1.t = s2.t = target;
    const bool last = cfg.adaptive ? s1.t >= cfg.t_end * (1.0 - 1e-14) : k == fixed;
    if (k % static_cast<std::size_t>(cfg.diag_every) == 0 || last) record(dt);
  }

  // Fill the finite-difference rates and the integrated bounds.
  Trajectory full(tr.columns());
  const auto t = tr.times();
  std::vector<double> half_du, half_dth;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    half_du.push_back(0.5 * tr.at(i, "du_l2") * tr.at(i, "du_l2"));
    half_dth.push_back(0.5 * tr.at(i, "dtheta_l2") * tr.at(i, "dtheta_l2"));
  }
  const auto fd_u = time_derivative(t, half_du);
  const auto fd_th = time_derivative(t, half_dth);
  const double z0 = tr.at(0, "X") * tr.at(0, "X");
  std::unordered_map<std::string, TwinBound> bounds;
  for (double p : cfg.twin.p_list)
    bounds[exponent_label(p)] =
        twin_integrated_bound(t, tr.channel("grad_u1_yudovich"), tr.channel("du_linf"),
                              tr.channel("gamma"), z0, p);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    auto row = tr.row(i);
    row[tr.index("du_rate_fd")] = fd_u[i];
    row[tr.index("dtheta_rate_fd")] = fd_th[i];
    for (double p : cfg.twin.p_list) {
      const auto& b = bounds[exponent_label(p)];
      row[tr.index("bound_p" + exponent_label(p))] = b.bound[i];
      row[tr.index("oracle_p" + exponent_label(p))] = b.oracle[i];
    }
    full.append(std::move(row));
  }
  TwinResult result{std::move(full), {}};
  result.reports = twin_reports(cfg, result.channels);
  if (out_dir) result.channels.write_csv(*out_dir / "twin.csv");
  return result;
}

std::vector<EstimateReport> twin_reports(const RunConfig& cfg, const Trajectory& tr) {
  std::vector<std::string> need{"time", "du_rate", "dtheta_rate", "dtheta_rhs", "X"};
  for (double p : cfg.twin.p_list) {
    need.push_back("du_rhs_p" + exponent_label(p));
    need.push_back("bound_p" + exponent_label(p));
    need.push_back("oracle_p" + exponent_label(p));
  }
  tr.require(need);
  const auto t = tr.times();
  std::vector<EstimateReport> out;
  for (double p : cfg.twin.p_list) {
    auto r = constant_free_report("twin_velocity_p" + exponent_label(p), t, tr.channel("du_rate"),
                                  tr.channel("du_rhs_p" + exponent_label(p)));
    r.extra["derivative"] = "exact semi-discrete rate from the tendencies";
    out.push_back(std::move(r));
  }
  out.push_back(constant_free_report("twin_temperature", t, tr.channel("dtheta_rate"),
                                     tr.channel("dtheta_rhs")));
  std::vector<double> x2;
  for (double x : tr.channel("X")) x2.push_back(x * x);
  for (double p : cfg.twin.p_list) {
    const std::string lab = exponent_label(p);
    auto bound = tr.channel("bound_p" + lab);
    auto r = constant_free_report("twin_integrated_p" + lab, t, x2, bound);
    // Bound over measured separation at the sample closest to t = 0.5.
    std::size_t mid = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (std::abs(t[i] - 0.5) < std::abs(t[mid] - 0.5)) mid = i;
    r.extra["ratio_time"] = t[mid];
    r.extra["bound_over_measured"] = x2[mid] > 0.0 ? bound[mid] / x2[mid] : 0.0;
    out.push_back(std::move(r));
    out.push_back(identity_report("twin_bound_oracle_p" + lab, t, bound,
                                  tr.channel("oracle_p" + lab), 1e-6));
  }
  const std::string hash = dynamics::config_hash(cfg.to_json());
  for (auto& r : out) r.config_hash = hash;
  return out;
}

}  // namespace bsq::estimates
