#include "bsq/estimates/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bsq::estimates {
namespace {

void check_lengths(const std::string& name, std::size_t a, std::size_t b, std::size_t c) {
  if (a != b || a != c) throw std::invalid_argument(name + ": series lengths differ");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double min_gap(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lhs.size(); ++i) m = std::min(m, rhs[i] - lhs[i]);
  return lhs.empty() ? 0.0 : m;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const char* class_name(EstimateClass c) noexcept {
  switch (c) {
    case EstimateClass::Identity: return "identity";
    case EstimateClass::ConstantFree: return "constant_free";
    case EstimateClass::Empirical: return "empirical";
  }
  return "?";
}

EstimateReport identity_report(std::string name, std::vector<double> times,
                               std::vector<double> lhs, std::vector<double> rhs,
                               double tolerance) {
  check_lengths(name, times.size(), lhs.size(), rhs.size());
  EstimateReport r;
  r.name = std::move(name);
  r.cls = EstimateClass::Identity;
  const double scale = max_abs(rhs);
  double worst = 0.0, worst_rel = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double d = std::abs(lhs[i] - rhs[i]);
    worst = std::max(worst, d);
    worst_rel = std::max(worst_rel, scale > 0.0 ? d / scale : d);
  }
  r.margin = -worst;
  r.max_relative_defect = worst_rel;
  r.pass = std::isfinite(worst_rel) && worst_rel < tolerance;
  r.extra["tolerance"] = tolerance;
  r.times = std::move(times);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

EstimateReport constant_free_report(std::string name, std::vector<double> times,
                                    std::vector<double> lhs, std::vector<double> rhs) {
  check_lengths(name, times.size(), lhs.size(), rhs.size());
  EstimateReport r;
  r.name = std::move(name);
  r.cls = EstimateClass::ConstantFree;
  r.margin = min_gap(lhs, rhs);
  const double scale = max_abs(rhs);
  r.pass = std::isfinite(r.margin) && r.margin >= -kConstantFreeSlack * scale;
  r.extra["slack"] = kConstantFreeSlack * scale;
  r.times = std::move(times);
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

EstimateReport empirical_report(std::string name, std::vector<double> times,
                                std::vector<double> lhs, std::vector<double> core) {
  check_lengths(name, times.size(), lhs.size(), core.size());
  EstimateReport r;
  r.name = std::move(name);
  r.cls = EstimateClass::Empirical;
  double c = 0.0;
  std::size_t used = 0;
  bool finite = true;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!std::isfinite(lhs[i]) || !std::isfinite(core[i])) finite = false;
    if (std::abs(core[i]) <= kZeroGuard) continue;
    c = std::max(c, lhs[i] / core[i]);
    ++used;
  }
  r.empirical_constant = finite ? c : std::numeric_limits<double>::infinity();
  r.margin = min_gap(lhs, core);
  r.pass = finite && r.empirical_constant < kEmpiricalCeiling;
  r.extra["samples_used"] = used;
  r.times = std::move(times);
  r.lhs = std::move(lhs);
  r.rhs = std::move(core);
  return r;
}

json EstimateReport::to_json(bool with_series) const {
  json j{{"name", name},
         {"class", class_name(cls)},
         {"pass", pass},
         {"margin", finite_or_null(margin)},
         {"empirical_constant", cls == EstimateClass::Empirical ? finite_or_null(empirical_constant)
                                                                 : json(nullptr)},
         {"truncation", truncation},
         {"config_hash", config_hash}};
  if (cls == EstimateClass::Identity) j["max_relative_defect"] = finite_or_null(max_relative_defect);
  if (!extra.empty()) j["details"] = extra;
  if (with_series) {
    json t = json::array(), l = json::array(), r = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
      t.push_back(finite_or_null(times[i]));
      l.push_back(finite_or_null(lhs[i]));
      r.push_back(finite_or_null(rhs[i]));
    }
    j["times"] = t;
    j["lhs"] = l;
    j["rhs"] = r;
  }
  return j;
}

json reports_to_json(const std::vector<EstimateReport>& reports, bool with_series) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(r.to_json(with_series));
  return out;
}

std::string summary_table(const std::vector<EstimateReport>& reports) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-13s %-4s %14s %12s\n", "estimate", "class", "pass",
                "margin", "constant");
  out += line;
  for (const auto& r : reports) {
    char constant[32] = "-";
    if (r.cls == EstimateClass::Empirical)
      std::snprintf(constant, sizeof constant, "%.4g", r.empirical_constant);
    else if (r.cls == EstimateClass::Identity)
      std::snprintf(constant, sizeof constant, "d=%.2e", r.max_relative_defect);
    std::snprintf(line, sizeof line, "%-34s %-13s %-4s %14.6g %12s\n", r.name.c_str(),
                  class_name(r.cls), r.pass ? "ok" : "FAIL", r.margin, constant);
    out += line;
  }
  return out;
}

bool all_hard_pass(const std::vector<EstimateReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const EstimateReport& r) { return !r.hard() || r.pass; });
}

}  // namespace bsq::estimates
