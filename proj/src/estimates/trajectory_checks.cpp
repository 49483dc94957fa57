#include "bsq/estimates/trajectory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bsq::estimates {
namespace {

using dynamics::exponent_label;
using dynamics::System;

std::string p_channel(const std::string& stem, double p) { return stem + "_" + exponent_label(p); }
std::string a_channel(const std::string& stem, double a) {
  return stem + "_a" + exponent_label(a);
}

std::string grid_label(const std::vector<double>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + exponent_label(v[i]);
  return s + "}";
}

std::string q_label(const Trajectory& tr) {
  return "q_max=" + std::to_string(static_cast<int>(tr.at(0, "q_max")));
}

template <class F>
std::vector<double> map_rows(const Trajectory& tr, F f) {
  std::vector<double> out;
  out.reserve(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) out.push_back(f(i));
  return out;
}

void require_rows(const Trajectory& tr) {
  if (tr.empty()) throw std::invalid_argument("trajectory has no rows");
}

}  // namespace

std::vector<double> time_derivative(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (y.size() != n) throw std::invalid_argument("time_derivative: length mismatch");
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
    return d;
  }
  // Derivative at t[j] of the quadratic through points a, b, c.
  auto quad = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t j) {
    const double ta = t[a], tb = t[b], tc = t[c], x = t[j];
    return y[a] * ((x - tb) + (x - tc)) / ((ta - tb) * (ta - tc)) +
           y[b] * ((x - ta) + (x - tc)) / ((tb - ta) * (tb - tc)) +
           y[c] * ((x - ta) + (x - tb)) / ((tc - ta) * (tc - tb));
  };
  d[0] = quad(0, 1, 2, 0);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = quad(j - 1, j, j + 1, j);
  d[n - 1] = quad(n - 3, n - 2, n - 1, n - 1);
  return d;
}

EstimateReport check_energy_identity(const RunConfig& cfg, const Trajectory& tr) {
  tr.require({"time", "theta_l2", "dissipation"});
  require_rows(tr);
  const double l0 = tr.at(0, "theta_l2");
  auto lhs = map_rows(tr, [&](std::size_t i) {
    const double l = tr.at(i, "theta_l2");
    return l * l + tr.at(i, "dissipation");
  });
  std::vector<double> rhs(tr.size(), l0 * l0);
  auto r = identity_report("energy_identity", tr.times(), std::move(lhs), std::move(rhs),
                           kIdentityTolerance);
  r.extra["kappa"] = cfg.kappa;
  return r;
}

EstimateReport check_velocity_l2(const RunConfig&, const Trajectory& tr) {
  tr.require({"time", "u_l2", "theta_l2"});
  require_rows(tr);
  const double u0 = tr.at(0, "u_l2"), th0 = tr.at(0, "theta_l2");
  auto rhs = map_rows(tr, [&](std::size_t i) { return u0 + tr.at(i, "time") * th0; });
  return constant_free_report("velocity_l2", tr.times(), tr.channel("u_l2"), std::move(rhs));
}

std::vector<EstimateReport> check_vorticity_transport(const RunConfig& cfg, const Trajectory& tr) {
  require_rows(tr);
  std::vector<EstimateReport> out;
  for (double p : cfg.p_grid) {
    const std::string w = p_channel("omega_lp", p), i = p_channel("int_d1theta_lp", p);
    tr.require({w, i});
    const double w0 = tr.at(0, w);
    auto rhs = map_rows(tr, [&](std::size_t k) { return w0 + tr.at(k, i); });
    auto r = constant_free_report("vorticity_lp_p" + exponent_label(p), tr.times(), tr.channel(w),
                                  std::move(rhs));
    r.extra["p"] = dynamics::exponent_to_json(p);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_biot_savart_constant(const RunConfig& cfg, const Trajectory& tr) {
  require_rows(tr);
  std::vector<EstimateReport> out;
  for (double p : cfg.p_grid) {
    if (std::isinf(p)) continue;
    const std::string g = p_channel("grad_u_lp", p), w = p_channel("omega_lp", p);
    tr.require({g, w});
    auto core = map_rows(tr, [&](std::size_t k) { return p * p / (p - 1.0) * tr.at(k, w); });
    auto r = empirical_report("biot_savart_p" + exponent_label(p), tr.times(), tr.channel(g),
                              std::move(core));
    r.truncation = "finite p only";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EstimateReport> check_interpolations(const RunConfig&, const Trajectory& tr) {
  tr.require({"u_linf", "u_l2", "omega_linf", "theta_b0", "theta_l2", "theta_b1", "q_max"});
  require_rows(tr);
  auto c1 = map_rows(tr, [&](std::size_t k) {
    return std::sqrt(tr.at(k, "u_l2") * tr.at(k, "omega_linf"));
  });
  auto c2 = map_rows(tr, [&](std::size_t k) {
    return std::sqrt(tr.at(k, "theta_l2") * tr.at(k, "theta_b1"));
  });
  std::vector<EstimateReport> out;
  out.push_back(empirical_report("interpolation_velocity", tr.times(), tr.channel("u_linf"),
                                 std::move(c1)));
  out.push_back(empirical_report("interpolation_besov", tr.times(), tr.channel("theta_b0"),
                                 std::move(c2)));
  out.back().truncation = q_label(tr);
  return out;
}

EstimateReport check_velocity_besov(const RunConfig&, const Trajectory& tr) {
  tr.require({"u_b1_inf", "u_linf", "omega_linf", "q_max"});
  require_rows(tr);
  auto core = map_rows(tr, [&](std::size_t k) { return tr.at(k, "u_linf") + tr.at(k, "omega_linf"); });
  auto r = empirical_report("velocity_besov", tr.times(), tr.channel("u_b1_inf"), std::move(core));
  r.truncation = q_label(tr);
  return r;
}

std::vector<EstimateReport> check_advection_besov(const RunConfig&, const Trajectory& tr) {
  tr.require({"adv_bm1", "u_linf", "omega_linf", "theta_h1", "theta_b0", "bony_divr_bm1",
              "remainder_b1_inf", "theta_b0_inf", "u_b1_inf", "bony_t_grad_u_bm1",
              "bony_t_u_grad_bm1", "u1_linf", "u2_linf", "d1theta_bm1", "d2theta_bm1", "q_max"});
  require_rows(tr);
  const auto t = tr.times();
  auto uw = [&](std::size_t k) { return tr.at(k, "u_linf") + tr.at(k, "omega_linf"); };
  std::vector<EstimateReport> out;
  out.push_back(empirical_report(
      "advection_besov", t, tr.channel("adv_bm1"), map_rows(tr, [&](std::size_t k) {
        return uw(k) * tr.at(k, "theta_h1") + tr.at(k, "u_linf") * tr.at(k, "theta_b0");
      })));
  out.push_back(empirical_report(
      "advection_remainder_divergence", t, tr.channel("bony_divr_bm1"),
      map_rows(tr, [&](std::size_t k) { return uw(k) * tr.at(k, "theta_h1"); })));
  out.push_back(empirical_report(
      "advection_remainder", t, tr.channel("remainder_b1_inf"),
      map_rows(tr, [&](std::size_t k) { return tr.at(k, "theta_b0_inf") * tr.at(k, "u_b1_inf"); })));
  out.push_back(empirical_report(
      "advection_paraproducts", t,
      map_rows(tr, [&](std::size_t k) {
        return tr.at(k, "bony_t_grad_u_bm1") + tr.at(k, "bony_t_u_grad_bm1");
      }),
      map_rows(tr, [&](std::size_t k) {
        return tr.at(k, "u1_linf") * tr.at(k, "d1theta_bm1") +
               tr.at(k, "u2_linf") * tr.at(k, "d2theta_bm1");
      })));
  for (auto& r : out) r.truncation = q_label(tr);
  return out;
}

std::vector<EstimateReport> check_smoothing(const RunConfig& cfg, const Trajectory& tr) {
  require_rows(tr);
  tr.require({"time", "theta_bm1", "int_adv_bm1", "Theta"});
  const double b0 = tr.at(0, "theta_bm1");
  std::vector<EstimateReport> out;
  for (double a : cfg.alpha_grid) {
    const std::string ch = a_channel("theta_smooth", a);
    tr.require({ch});
    auto core = map_rows(tr, [&](std::size_t k) {
      const double grow = std::isinf(a) ? 1.0 : std::pow(1.0 + cfg.kappa * tr.at(k, "time"), 1.0 / a);
      return grow * (b0 + tr.at(k, "int_adv_bm1"));
    });
    auto r = empirical_report("smoothing_alpha" + exponent_label(a), tr.times(), tr.channel(ch),
                              std::move(core));
    r.truncation = q_label(tr) + "; alpha in " + grid_label(cfg.alpha_grid);
    out.push_back(std::move(r));
  }
  return out;
}

double smallest_gronwall_constant(double lhs, double f, double a, double b, double g) {
  auto rhs = [&](double c) {
    const double e = c * c * b * g;
    return e > 700.0 ? std::numeric_limits<double>::infinity() : c * (f + a * g) * std::exp(e);
  };
  if (lhs <= 0.0) return 0.0;
  double hi = 1.0;
  while (rhs(hi) < lhs) {
    hi *= 2.0;
    if (hi > 1e6) return std::numeric_limits<double>::infinity();
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (rhs(mid) >= lhs ? hi : lo) = mid;
  }
  return hi;
}

std::vector<EstimateReport> check_gronwall_chain(const RunConfig& cfg, const Trajectory& tr) {
  tr.require({"time", "Theta", "f_core", "int_g_core", "omega_linf"});
  require_rows(tr);
  const double kappa = cfg.kappa;
  if (!(kappa > 0.0)) throw std::invalid_argument("Gronwall chain needs kappa > 0");
  const double w0 = tr.at(0, "omega_linf");
  std::vector<EstimateReport> out;

  EstimateReport chain;
  chain.name = "gronwall_theta";
  chain.cls = EstimateClass::Empirical;
  chain.times = tr.times();
  chain.lhs = tr.channel("Theta");
  std::vector<double> per_time;
  double cmax = 0.0;
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double grow = 1.0 + kappa * tr.at(k, "time");
    const double c = smallest_gronwall_constant(chain.lhs[k], tr.at(k, "f_core"), grow * grow * w0,
                                                grow * grow / kappa, tr.at(k, "int_g_core"));
    per_time.push_back(c);
    cmax = std::max(cmax, c);
  }
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double grow = 1.0 + kappa * tr.at(k, "time");
    const double g = tr.at(k, "int_g_core");
    const double e = cmax * cmax * grow * grow / kappa * g;
    const double r = e > 700.0 ? std::numeric_limits<double>::infinity()
                               : cmax * (tr.at(k, "f_core") + grow * grow * w0 * g) * std::exp(e);
    chain.rhs.push_back(r);
    margin = std::min(margin, r - chain.lhs[k]);
  }
  chain.empirical_constant = cmax;
  chain.margin = margin;
  chain.pass = std::isfinite(cmax) && cmax < kEmpiricalCeiling;
  chain.extra["constant_per_time"] = per_time;
  chain.truncation = "alpha in " + grid_label(cfg.alpha_grid) + "; " + q_label(tr);
  out.push_back(std::move(chain));

  auto growth = map_rows(tr, [&](std::size_t k) { return std::max(0.0, tr.at(k, "omega_linf") - w0); });
  auto core = map_rows(tr, [&](std::size_t k) { return tr.at(k, "Theta") / kappa; });
  out.push_back(empirical_report("gronwall_vorticity", tr.times(), std::move(growth), std::move(core)));
  out.back().truncation = out.front().truncation;
  return out;
}

std::vector<EstimateReport> check_vishik_propagation(const RunConfig&, const Trajectory& tr) {
  tr.require({"omega_b0", "int_grad_u_linf", "int_d1theta_b0", "grad_u_linf", "u_l2", "q_max"});
  require_rows(tr);
  const double w0 = tr.at(0, "omega_b0");
  std::vector<EstimateReport> out;
  out.push_back(empirical_report(
      "vishik_propagation", tr.times(), tr.channel("omega_b0"), map_rows(tr, [&](std::size_t k) {
        return (1.0 + tr.at(k, "int_grad_u_linf")) * (w0 + tr.at(k, "int_d1theta_b0"));
      })));
  out.push_back(empirical_report(
      "lipschitz_from_besov", tr.times(), tr.channel("grad_u_linf"),
      map_rows(tr, [&](std::size_t k) { return tr.at(k, "u_l2") + tr.at(k, "omega_b0"); })));
  for (auto& r : out) r.truncation = q_label(tr);
  return out;
}

EstimateReport check_yudovich(const RunConfig& cfg, const Trajectory& tr) {
  tr.require({"grad_u_yudovich", "grad_u_yudovich_p", "omega_linf"});
  require_rows(tr);
  auto r = empirical_report("yudovich_norm", tr.times(), tr.channel("grad_u_yudovich"),
                            tr.channel("omega_linf"));
  double pmax_hit = 0.0;
  for (double p : tr.channel("grad_u_yudovich_p")) pmax_hit = std::max(pmax_hit, p);
  std::ostringstream os;
  os << "p in {" << exponent_label(cfg.yudovich_r) << ", 2r, ... <= "
     << exponent_label(cfg.yudovich_p_max) << "}";
  r.truncation = os.str();
  r.extra["largest_maximiser"] = pmax_hit;
  r.extra["maximiser_interior"] = pmax_hit < cfg.yudovich_p_max;
  return r;
}

std::vector<EstimateReport> check_benard_energy(const RunConfig& cfg, const Trajectory& tr) {
  tr.require({"time", "theta_l2", "grad_theta_l2", "u_l2", "theta_u2_inner", "dissipation"});
  require_rows(tr);
  const auto t = tr.times();
  const auto th = tr.channel("theta_l2");
  const auto u = tr.channel("u_l2");
  const auto inner = tr.channel("theta_u2_inner");
  std::vector<double> half_th2, half_u2;
  for (std::size_t k = 0; k < t.size(); ++k) {
    half_th2.push_back(0.5 * th[k] * th[k]);
    half_u2.push_back(0.5 * u[k] * u[k]);
  }
  const auto dth = time_derivative(t, half_th2);
  const auto du = time_derivative(t, half_u2);
  std::vector<double> lhs_t;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double g = tr.at(k, "grad_theta_l2");
    lhs_t.push_back(dth[k] + cfg.kappa * g * g);
  }
  std::vector<EstimateReport> out;
  // Relative to the size of the exchanged power and the dissipation.
  auto scaled = [&](std::string name, std::vector<double> lhs) {
    double scale = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
      scale = std::max({scale, std::abs(inner[k]), std::abs(lhs[k])});
    auto r = identity_report(std::move(name), t, std::move(lhs), inner, kDerivativeTolerance);
    double worst = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
      worst = std::max(worst, std::abs(r.lhs[k] - r.rhs[k]));
    r.max_relative_defect = scale > 0.0 ? worst / scale : worst;
    r.pass = r.max_relative_defect < kDerivativeTolerance;
    r.extra["scale"] = scale;
    r.extra["derivative"] = "three-point finite differences on the output cadence";
    return r;
  };
  out.push_back(scaled("benard_temperature_balance", std::move(lhs_t)));
  out.push_back(scaled("benard_velocity_balance", du));
  std::vector<double> lhs, rhs;
  const double e0 = th[0] * th[0] + u[0] * u[0];
  for (std::size_t k = 0; k < t.size(); ++k) {
    lhs.push_back(th[k] * th[k] + u[k] * u[k] + tr.at(k, "dissipation"));
    rhs.push_back(e0 * std::exp(2.0 * t[k]));
  }
  out.push_back(constant_free_report("benard_growth", t, std::move(lhs), std::move(rhs)));
  return out;
}

std::vector<EstimateReport> trajectory_reports(const RunConfig& cfg, const Trajectory& tr) {
  std::vector<EstimateReport> out;
  auto add = [&](std::vector<EstimateReport> v) {
    for (auto& r : v) out.push_back(std::move(r));
  };
  const bool benard = cfg.system == System::Benard;
  if (!benard) {
    out.push_back(check_energy_identity(cfg, tr));
    out.push_back(check_velocity_l2(cfg, tr));
    add(check_vorticity_transport(cfg, tr));
  } else {
    add(check_benard_energy(cfg, tr));
  }
  add(check_biot_savart_constant(cfg, tr));
  add(check_interpolations(cfg, tr));
  out.push_back(check_velocity_besov(cfg, tr));
  out.push_back(check_yudovich(cfg, tr));
  if (!benard) {
    add(check_advection_besov(cfg, tr));
    add(check_vishik_propagation(cfg, tr));
    if (cfg.kappa > 0.0) {
      add(check_smoothing(cfg, tr));
      add(check_gronwall_chain(cfg, tr));
    }
  }
  const std::string hash = dynamics::config_hash(cfg.to_json());
  for (auto& r : out) r.config_hash = hash;
  return out;
}

}  // namespace bsq::estimates
