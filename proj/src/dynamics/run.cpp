#include "bsq/dynamics/run.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bsq/init/generators.hpp"
#include "bsq/spectral/snapshot.hpp"

namespace bsq::dynamics {
namespace fs = std::filesystem;

SolverState initial_state(const RunConfig& cfg) {
  const auto grid = spectral::Grid::create(cfg.n);
  ScalarField theta = init::from_descriptor(cfg.theta0, grid, init::Role::Temperature, cfg.seed);
  ScalarField omega = init::from_descriptor(cfg.omega0, grid, init::Role::Vorticity, cfg.seed + 1);
  if (cfg.mollify >= 0) {
    theta = mollify(theta, cfg.mollify);
    omega = mollify(omega, cfg.mollify);
  }
  return SolverState(std::move(theta), std::move(omega));
}

std::size_t fixed_step_count(double dt, double t_end) {
  if (t_end <= 0.0) return 0;
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(ratio));
}

void write_config(const fs::path& dir, const RunConfig& cfg) {
  std::ofstream os(dir / "config.json");
  if (!os) throw std::runtime_error("cannot write " + (dir / "config.json").string());
  os << cfg.to_json().dump(2) << '\n';
}

RunConfig read_config(const fs::path& dir) {
  std::ifstream is(dir / "config.json");
  if (!is) throw std::runtime_error("cannot read " + (dir / "config.json").string());
  json doc;
  try {
    is >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config.json is not valid JSON: ") + e.what());
  }
  return RunConfig::from_json(doc);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

void write_outputs(const fs::path& dir, const DiagnosticsRecorder& rec) {
  rec.trajectory().write_csv(dir / "diagnostics.csv");
  write_text(dir / "besov.csv", rec.besov_csv());
}

void write_state(const fs::path& dir, const std::string& tag, const SolverState& s) {
  spectral::write_snapshot(dir / ("theta_" + tag + ".bin"), s.theta, s.t, "theta");
  spectral::write_snapshot(dir / ("omega_" + tag + ".bin"), s.omega, s.t, "omega");
}

}  // namespace

RunResult run(const RunConfig& cfg, const std::optional<fs::path>& out_dir) {
  if (out_dir) {
    fs::create_directories(*out_dir);
    write_config(*out_dir, cfg);
    if (cfg.snapshot_every > 0) fs::create_directories(*out_dir / "snapshots");
  }
  SolverState s = initial_state(cfg);
  Stepper stepper(s.theta.grid_ptr(), cfg.kappa, cfg.system, cfg.cfl);
  DiagnosticsRecorder rec(cfg);
  rec.record(s, cfg.dt);
  if (out_dir && cfg.snapshot_every > 0) write_state(*out_dir / "snapshots", "0", s);

  const std::size_t fixed_steps = cfg.adaptive ? 0 : fixed_step_count(cfg.dt, cfg.t_end);
  std::size_t k = 0;
  try {
    while (cfg.adaptive ? s.t < cfg.t_end * (1.0 - 1e-14) : k < fixed_steps) {
      ++k;
      double target;
      if (cfg.adaptive) {
        const double dt = std::min(cfg.dt, stepper.stable_dt(s));
        target = std::min(s.t + dt, cfg.t_end);
      } else {
        target = std::min(static_cast<double>(k) * cfg.dt, cfg.t_end);
      }
      const double dt = target - s.t;
      stepper.step(s, dt);
      s.t = target;
      const bool last = cfg.adaptive ? s.t >= cfg.t_end * (1.0 - 1e-14) : k == fixed_steps;
      if (k % static_cast<std::size_t>(cfg.diag_every) == 0 || last) rec.record(s, dt);
      if (out_dir && cfg.snapshot_every > 0 && k % static_cast<std::size_t>(cfg.snapshot_every) == 0)
        write_state(*out_dir / "snapshots", std::to_string(k), s);
    }
  } catch (...) {
    if (out_dir) write_outputs(*out_dir, rec);
    throw;
  }
  if (out_dir) {
    write_outputs(*out_dir, rec);
    write_state(*out_dir, "final", s);
  }
  return RunResult{rec.trajectory(), rec.besov_csv(), std::move(s), k};
}

}  // namespace bsq::dynamics
