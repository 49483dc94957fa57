#pragma once
// Both sides of an estimate along sampled times, with its verdict.
//
//   identity       pass iff max |lhs - rhs| / scale < tolerance
//   constant_free  pass iff min(rhs - lhs) >= -1e-8 * max |rhs|
//   empirical      rhs holds the constant-free core; the constant is
//                  max lhs/core over samples with a nonzero core, and the
//                  report passes iff it is finite and below 10.

#include <string>
#include <vector>

#include <json.hpp>

namespace bsq::estimates {

using json = nlohmann::json;

enum class EstimateClass { Identity, ConstantFree, Empirical };
const char* class_name(EstimateClass c) noexcept;

inline constexpr double kConstantFreeSlack = 1e-8;
inline constexpr double kEmpiricalCeiling = 10.0;
inline constexpr double kZeroGuard = 1e-300;

struct EstimateReport {
  std::string name;
  EstimateClass cls = EstimateClass::ConstantFree;
  std::vector<double> times, lhs, rhs;
  double margin = 0.0;
  double empirical_constant = 0.0;
  double max_relative_defect = 0.0;  // identity class only
  bool pass = false;
  std::string truncation;
  std::string config_hash;
  json extra = json::object();

  // True for the classes that decide the verify exit status.
  bool hard() const noexcept { return cls != EstimateClass::Empirical; }
  json to_json(bool with_series = true) const;
};

EstimateReport identity_report(std::string name, std::vector<double> times,
                               std::vector<double> lhs, std::vector<double> rhs,
                               double tolerance);
EstimateReport constant_free_report(std::string name, std::vector<double> times,
                                    std::vector<double> lhs, std::vector<double> rhs);
EstimateReport empirical_report(std::string name, std::vector<double> times,
                                std::vector<double> lhs, std::vector<double> core);

json reports_to_json(const std::vector<EstimateReport>& reports, bool with_series = true);
std::string summary_table(const std::vector<EstimateReport>& reports);
bool all_hard_pass(const std::vector<EstimateReport>& reports);

}  // namespace bsq::estimates
