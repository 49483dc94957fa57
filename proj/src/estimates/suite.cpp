#include "bsq/estimates/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "bsq/estimates/sample_checks.hpp"
#include "bsq/estimates/trajectory_checks.hpp"
#include "bsq/spectral/grid.hpp"

namespace bsq::estimates {

std::vector<EstimateReport> full_suite(const dynamics::RunConfig& cfg,
                                       const dynamics::Trajectory& traj,
                                       const SuiteOptions& options) {
  std::vector<EstimateReport> out = trajectory_reports(cfg, traj);
  auto add = [&](std::vector<EstimateReport> v) {
    for (auto& r : v) out.push_back(std::move(r));
  };
  const auto grid = spectral::Grid::create(cfg.n);
  if (options.sample_count > 0) {
    const auto samples = random_samples(grid, options.sample_count, options.sample_seed);
    add(check_biot_savart_samples(samples, cfg.p_grid));
    add(check_interpolation_samples(samples));
    out.push_back(check_velocity_besov_samples(samples));
  }
  if (options.operator_checks) {
    add(exactness_reports(grid, options.sample_seed + 7));
    add(check_heat_block_appendix(grid, options.sample_seed + 11));
    add(sigma_reports());
  }
  const std::string hash = dynamics::config_hash(cfg.to_json());
  for (auto& r : out) r.config_hash = hash;
  return out;
}

double relative_variation(const std::vector<double>& c) {
  if (c.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
  return scale > 0.0 ? (*hi - *lo) / scale : 0.0;
}

std::vector<StabilityRow> stability_table(const std::vector<std::vector<EstimateReport>>& runs,
                                          double limit) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_name;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    for (const auto& r : runs[k]) {
      if (r.cls != EstimateClass::Empirical || r.name.rfind("samples_", 0) == 0) continue;
      auto& v = by_name[r.name];
      if (v.empty()) {
        order.push_back(r.name);
        v.assign(runs.size(), std::numeric_limits<double>::quiet_NaN());
      }
      v[k] = r.empirical_constant;
    }
  }
  std::vector<StabilityRow> rows;
  for (const auto& name : order) {
    StabilityRow row{name, by_name[name], 0.0, false};
    row.variation = relative_variation(row.constants);
    row.pass = std::all_of(row.constants.begin(), row.constants.end(),
                           [](double c) { return std::isfinite(c) && c < kEmpiricalCeiling; }) &&
               row.variation < limit;
    rows.push_back(std::move(row));
  }
  return rows;
}

json stability_to_json(const std::vector<StabilityRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json cs = json::array();
    for (double c : r.constants) cs.push_back(std::isfinite(c) ? json(c) : json(nullptr));
    out.push_back({{"name", r.name},
                   {"constants", cs},
                   {"variation", std::isfinite(r.variation) ? json(r.variation) : json(nullptr)},
                   {"pass", r.pass}});
  }
  return out;
}

std::string stability_summary(const std::vector<StabilityRow>& rows) {
  std::string out;
  char line[256];
  for (const auto& r : rows) {
    std::string cs;
    for (double c : r.constants) {
      std::snprintf(line, sizeof line, "%s%.4g", cs.empty() ? "" : " ", c);
      cs += line;
    }
    std::snprintf(line, sizeof line, "%-34s %-4s var=%.3f  [%s]\n", r.name.c_str(),
                  r.pass ? "ok" : "FAIL", r.variation, cs.c_str());
    out += line;
  }
  return out;
}

}  // namespace bsq::estimates
