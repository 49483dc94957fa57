#pragma once
// Diagnostic channels evaluated along a run. Instantaneous norms come from
// the state; time integrals use the trapezoid rule on the output cadence,
// except the dissipation, which the stepper carries.
//
// The channel list and its meaning are documented in docs/channels.md.

#include <string>
#include <vector>

#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/stepper.hpp"
#include "bsq/dynamics/trajectory.hpp"

namespace bsq::dynamics {

struct YudovichValue {
  double value = 0.0;  // max over the p grid of ||grad u||_{L^p} / p
  double argmax = 0.0;
  std::vector<double> p_grid;  // r, 2r, 4r, ... <= p_max
};

YudovichValue yudovich_norm(const VelocityField& u, double r, double p_max);
std::vector<double> yudovich_grid(double r, double p_max);

// Column names in output order for a configuration.
std::vector<std::string> channel_names(const RunConfig& cfg);

struct BesovRow {
  double time;
  std::string field;
  double s, p, r, value;
  int q_max;
};

class DiagnosticsRecorder {
 public:
  explicit DiagnosticsRecorder(const RunConfig& cfg);

  // Appends one row for the state; dt is the step that produced it.
  void record(const SolverState& s, double dt);

  const Trajectory& trajectory() const noexcept { return traj_; }
  const std::vector<BesovRow>& besov_rows() const noexcept { return besov_; }
  std::string besov_csv() const;

 private:
  RunConfig cfg_;
  Trajectory traj_;
  std::vector<BesovRow> besov_;
  std::vector<double> yud_grid_;
  // Previous row's integrands, keyed by position in integrands_.
  std::vector<std::string> integrands_;
  std::vector<double> prev_integrand_;
  std::vector<double> integral_;
  std::vector<double> smooth_sup_;
  double prev_time_ = 0.0;
  double theta_initial_ = 0.0;  // Theta(0)
  bool first_ = true;
};

}  // namespace bsq::dynamics
