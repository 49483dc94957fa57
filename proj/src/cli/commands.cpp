#include "bsq/cli/commands.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bsq/dynamics/run.hpp"
#include "bsq/estimates/suite.hpp"
#include "bsq/estimates/trajectory_checks.hpp"
#include "bsq/estimates/twin.hpp"

namespace bsq::cli {
namespace fs = std::filesystem;
using dynamics::ConfigError;
using dynamics::json;
using dynamics::RunConfig;

namespace {

// Failure with a chosen exit code; caught once in run_cli.
struct Failure {
  int code;
  std::string message;
};

json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Failure{kIoError, "cannot read " + path.string()};
  try {
    return json::parse(is);
  } catch (const json::parse_error& e) {
    throw Failure{kConfigError, path.string() + ": invalid JSON: " + e.what()};
  }
}

json load_document(const std::string& config_path, const std::vector<std::string>& sets) {
  json doc = config_path.empty() ? dynamics::default_config_json() : read_json_file(config_path);
  for (const auto& s : sets) dynamics::apply_override(doc, s);
  return doc;
}

RunConfig load_config(const std::string& config_path, const std::vector<std::string>& sets) {
  return RunConfig::from_json(load_document(config_path, sets));
}

fs::path output_root() {
  if (const char* env = std::getenv(kOutputRootEnv); env && *env) return env;
  return "runs";
}

fs::path resolve_out(const std::string& flag, const RunConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return output_root() / (cfg.name + "-" + dynamics::config_hash(cfg.to_json()).substr(0, 8));
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw Failure{kIoError, "cannot write " + path.string()};
  os << j.dump(2) << '\n';
}

struct Loaded {
  RunConfig cfg;
  dynamics::Trajectory traj;
};

Loaded load_run_dir(const fs::path& dir) {
  if (!fs::exists(dir / "config.json")) throw Failure{kIoError, "no config.json in " + dir.string()};
  if (!fs::exists(dir / "diagnostics.csv"))
    throw Failure{kIoError, "no diagnostics.csv in " + dir.string()};
  RunConfig cfg = dynamics::read_config(dir);
  try {
    return {std::move(cfg), dynamics::Trajectory::read_csv(dir / "diagnostics.csv")};
  } catch (const std::runtime_error& e) {
    throw Failure{kVerificationFailed, "diagnostics.csv: " + std::string(e.what())};
  }
}

int verify_and_report(const RunConfig& cfg, const dynamics::Trajectory& traj,
                      const estimates::SuiteOptions& opts, const fs::path& report_path) {
  std::vector<estimates::EstimateReport> reports;
  try {
    reports = estimates::full_suite(cfg, traj, opts);
  } catch (const dynamics::MissingChannels& e) {
    throw Failure{kVerificationFailed, e.what()};
  }
  write_json(report_path, estimates::reports_to_json(reports));
  std::cout << estimates::summary_table(reports);
  const bool ok = estimates::all_hard_pass(reports);
  std::cout << (ok ? "verification passed" : "verification FAILED") << " (" << report_path.string()
            << ")\n";
  return ok ? kOk : kVerificationFailed;
}

dynamics::RunResult run_or_fail(const RunConfig& cfg, const fs::path& out) {
  try {
    return dynamics::run(cfg, out);
  } catch (const dynamics::CflViolation& e) {
    throw Failure{kNumericalAbort, e.what()};
  } catch (const dynamics::NumericalAbort& e) {
    throw Failure{kNumericalAbort, e.what()};
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(s);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  return out;
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
    throw Failure{kConfigError, "sweep axis must look like key=v1,v2: '" + spec + "'"};
  SweepAxis a{spec.substr(0, eq), split_list(spec.substr(eq + 1))};
  if (a.values.empty()) throw Failure{kConfigError, "sweep axis '" + a.key + "' has no values"};
  return a;
}

// Override lists for every sweep point, product or zipped.
std::vector<std::vector<std::string>> sweep_points(const std::vector<SweepAxis>& axes, bool zip) {
  std::vector<std::vector<std::string>> out;
  if (axes.empty()) throw Failure{kConfigError, "sweep needs at least one --grid axis"};
  if (zip) {
    const std::size_t len = axes.front().values.size();
    for (const auto& a : axes)
      if (a.values.size() != len)
        throw Failure{kConfigError, "--zip needs axes of equal length"};
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<std::string> p;
      for (const auto& a : axes) p.push_back(a.key + "=" + a.values[i]);
      out.push_back(std::move(p));
    }
    return out;
  }
  out.emplace_back();
  for (const auto& a : axes) {
    std::vector<std::vector<std::string>> next;
    for (const auto& base : out)
      for (const auto& v : a.values) {
        auto p = base;
        p.push_back(a.key + "=" + v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  return out;
}

std::string point_label(const std::vector<std::string>& sets) {
  std::string s;
  for (const auto& a : sets) {
    for (char c : a) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    s += '_';
  }
  if (!s.empty()) s.pop_back();
  return s;
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args_in) {
  CLI::App app{"bsqlab: Boussinesq solver and estimate verification", "bsqlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bsqlab 1.0");

  std::string config, out, run_dir, report_path, partner_config;
  std::vector<std::string> sets, partner_sets, grids, channels;
  std::size_t samples = 100, jobs = 1;
  bool zip = false, no_operator_checks = false;
  std::string file = "diagnostics.csv";

  auto* run = app.add_subcommand("run", "integrate a configuration and write its run directory");
  run->add_option("-c,--config", config, "configuration JSON")->check(CLI::ExistingFile);
  run->add_option("-s,--set", sets, "override, key.sub=value (repeatable)");
  run->add_option("-o,--out", out, "run directory");

  auto* verify = app.add_subcommand("verify", "run the estimate suite on a configuration or run directory");
  auto* vg = verify->add_option_group("source");
  vg->add_option("-c,--config", config, "configuration JSON (runs it first)")->check(CLI::ExistingFile);
  vg->add_option("-r,--run-dir", run_dir, "existing run directory");
  vg->require_option(0, 1);
  verify->add_option("-s,--set", sets, "override applied to --config");
  verify->add_option("-o,--out", out, "run directory when running --config");
  verify->add_option("--report", report_path, "report path (default <run dir>/verification.json)");
  verify->add_option("--samples", samples, "random band-limited samples (0 disables)");
  verify->add_flag("--no-operator-checks", no_operator_checks,
                   "skip exactness, heat-block and sigma checks");

  auto* twin = app.add_subcommand("twin", "paired runs and the stability estimates for their difference");
  twin->add_option("-c,--config", config, "configuration JSON")->check(CLI::ExistingFile);
  twin->add_option("-s,--set", sets, "override for both runs");
  twin->add_option("--partner-set", partner_sets, "extra override for the second run only");
  twin->add_option("-o,--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a grid of configurations and compare constants");
  sweep->add_option("-c,--config", config, "base configuration JSON")->check(CLI::ExistingFile);
  sweep->add_option("-s,--set", sets, "override for every point");
  sweep->add_option("-g,--grid", grids, "axis key=v1,v2,... (repeatable)")->required();
  sweep->add_flag("--zip", zip, "pair axis values instead of the cross product");
  sweep->add_option("-j,--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", out, "sweep root directory");

  auto* report = app.add_subcommand("report", "print the verification summary of a run directory");
  report->add_option("-r,--run-dir", run_dir, "run directory")->required();

  auto* plot = app.add_subcommand("plot-data", "export channels as two-column CSV files");
  plot->add_option("-r,--run-dir", run_dir, "run directory")->required();
  plot->add_option("--channels", channels, "channel names (comma separated or repeated)")
      ->required()
      ->delimiter(',');
  plot->add_option("--file", file, "source table inside the run directory");
  plot->add_option("-o,--out", out, "output directory (default <run dir>/plot)");

  std::vector<std::string> args(args_in.begin() + (args_in.empty() ? 0 : 1), args_in.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }

  try {
    estimates::SuiteOptions opts;
    opts.sample_count = samples;
    opts.operator_checks = !no_operator_checks;

    if (*run) {
      const RunConfig cfg = load_config(config, sets);
      const fs::path dir = resolve_out(out, cfg);
      const auto res = run_or_fail(cfg, dir);
      std::cout << "wrote " << dir.string() << ": " << res.trajectory.size() << " rows, "
                << res.steps << " steps, t=" << res.final_state.t << "\n";
      return kOk;
    }
    if (*verify) {
      if (!run_dir.empty()) {
        const auto loaded = load_run_dir(run_dir);
        const fs::path rp = report_path.empty() ? fs::path(run_dir) / "verification.json" : fs::path(report_path);
        return verify_and_report(loaded.cfg, loaded.traj, opts, rp);
      }
      const RunConfig cfg = load_config(config, sets);
      const fs::path dir = resolve_out(out, cfg);
      const auto res = run_or_fail(cfg, dir);
      const fs::path rp = report_path.empty() ? dir / "verification.json" : fs::path(report_path);
      return verify_and_report(cfg, res.trajectory, opts, rp);
    }
    if (*twin) {
      const json doc = load_document(config, sets);
      const RunConfig cfg = RunConfig::from_json(doc);
      json pdoc = doc;
      for (const auto& s : partner_sets) dynamics::apply_override(pdoc, s);
      const RunConfig partner = RunConfig::from_json(pdoc);
      const fs::path dir = out.empty() ? resolve_out("", cfg) / "twin" : fs::path(out);
      estimates::TwinResult res;
      try {
        res = estimates::run_twin(cfg, partner, dir);
      } catch (const dynamics::CflViolation& e) {
        throw Failure{kNumericalAbort, e.what()};
      } catch (const dynamics::NumericalAbort& e) {
        throw Failure{kNumericalAbort, e.what()};
      }
      write_json(dir / "twin_report.json", estimates::reports_to_json(res.reports));
      std::cout << estimates::summary_table(res.reports);
      const bool ok = estimates::all_hard_pass(res.reports);
      std::cout << (ok ? "twin checks passed" : "twin checks FAILED") << " (" << dir.string() << ")\n";
      return ok ? kOk : kVerificationFailed;
    }
    if (*sweep) {
      std::vector<SweepAxis> axes;
      for (const auto& g : grids) axes.push_back(parse_axis(g));
      const auto points = sweep_points(axes, zip);
      const json base = load_document(config, sets);
      std::vector<RunConfig> cfgs;
      for (const auto& p : points) {
        json doc = base;
        for (const auto& s : p) dynamics::apply_override(doc, s);
        RunConfig c = RunConfig::from_json(doc);
        c.name += "-" + point_label(p);
        cfgs.push_back(std::move(c));
      }
      const fs::path root = out.empty() ? output_root() / ("sweep-" + cfgs.front().name) : fs::path(out);
      fs::create_directories(root);
      std::vector<std::vector<estimates::EstimateReport>> reports(cfgs.size());
      std::vector<std::string> errors(cfgs.size());
      std::vector<int> codes(cfgs.size(), kOk);
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i; (i = next++) < cfgs.size();) {
          try {
            const auto res = dynamics::run(cfgs[i], root / cfgs[i].name);
            reports[i] = estimates::trajectory_reports(cfgs[i], res.trajectory);
            std::ofstream os(root / cfgs[i].name / "verification.json");
            os << estimates::reports_to_json(reports[i]).dump(2) << '\n';
          } catch (const dynamics::CflViolation& e) {
            codes[i] = kNumericalAbort;
            errors[i] = e.what();
          } catch (const dynamics::NumericalAbort& e) {
            codes[i] = kNumericalAbort;
            errors[i] = e.what();
          } catch (const std::exception& e) {
            codes[i] = kIoError;
            errors[i] = e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      for (std::size_t j = 0; j < std::min(jobs, cfgs.size()); ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      int code = kOk;
      for (std::size_t i = 0; i < cfgs.size(); ++i) {
        std::cout << cfgs[i].name << ": ";
        if (codes[i] != kOk) {
          std::cout << "aborted: " << errors[i] << "\n";
          code = std::max(code, codes[i]);
          continue;
        }
        const bool ok = estimates::all_hard_pass(reports[i]);
        std::cout << (ok ? "hard checks passed" : "hard checks FAILED") << "\n";
        if (!ok) code = std::max(code, static_cast<int>(kVerificationFailed));
      }
      if (code == kOk || code == kVerificationFailed) {
        const auto rows = estimates::stability_table(reports);
        json st{{"runs", json::array()}, {"rows", estimates::stability_to_json(rows)},
                {"limit", estimates::kStabilityLimit}};
        for (const auto& c : cfgs) st["runs"].push_back(c.name);
        write_json(root / "stability.json", st);
        std::cout << estimates::stability_summary(rows);
        for (const auto& r : rows)
          if (!r.pass) code = kVerificationFailed;
      }
      return code;
    }
    if (*report) {
      const fs::path dir = run_dir;
      const fs::path vpath = dir / "verification.json";
      if (fs::exists(vpath)) {
        const json arr = read_json_file(vpath);
        std::vector<estimates::EstimateReport> reps;
        for (const auto& j : arr) {
          estimates::EstimateReport r;
          r.name = j.value("name", "");
          const std::string c = j.value("class", "");
          r.cls = c == "identity"   ? estimates::EstimateClass::Identity
                  : c == "empirical" ? estimates::EstimateClass::Empirical
                                     : estimates::EstimateClass::ConstantFree;
          r.pass = j.value("pass", false);
          r.margin = j["margin"].is_number() ? j["margin"].get<double>() : NAN;
          if (j.contains("empirical_constant") && j["empirical_constant"].is_number())
            r.empirical_constant = j["empirical_constant"];
          if (j.contains("max_relative_defect") && j["max_relative_defect"].is_number())
            r.max_relative_defect = j["max_relative_defect"];
          reps.push_back(std::move(r));
        }
        std::cout << estimates::summary_table(reps);
        return estimates::all_hard_pass(reps) ? kOk : kVerificationFailed;
      }
      const auto loaded = load_run_dir(dir);
      std::vector<estimates::EstimateReport> reps;
      try {
        reps = estimates::trajectory_reports(loaded.cfg, loaded.traj);
      } catch (const dynamics::MissingChannels& e) {
        throw Failure{kVerificationFailed, e.what()};
      }
      std::cout << estimates::summary_table(reps);
      return estimates::all_hard_pass(reps) ? kOk : kVerificationFailed;
    }
    if (*plot) {
      const fs::path dir = run_dir;
      if (!fs::exists(dir / file)) throw Failure{kIoError, "no " + file + " in " + dir.string()};
      dynamics::Trajectory tr;
      try {
        tr = dynamics::Trajectory::read_csv(dir / file);
      } catch (const std::runtime_error& e) {
        throw Failure{kIoError, file + ": " + e.what()};
      }
      std::vector<std::string> missing;
      for (const auto& c : channels)
        if (!tr.has(c)) missing.push_back(c);
      if (!missing.empty()) {
        std::string avail;
        for (const auto& c : tr.columns()) avail += (avail.empty() ? "" : ", ") + c;
        std::string names;
        for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
        throw Failure{kConfigError, "unknown channel(s): " + names + "\navailable: " + avail};
      }
      const fs::path od = out.empty() ? dir / "plot" : fs::path(out);
      fs::create_directories(od);
      const auto t = tr.times();
      for (const auto& c : channels) {
        const auto v = tr.channel(c);
        std::ofstream os(od / (c + ".csv"));
        if (!os) throw Failure{kIoError, "cannot write " + (od / (c + ".csv")).string()};
        os << "time," << c << "\n";
        for (std::size_t i = 0; i < t.size(); ++i)
          os << dynamics::format_double(t[i]) << "," << dynamics::format_double(v[i]) << "\n";
      }
      std::cout << "wrote " << channels.size() << " channel file(s) to " << od.string() << "\n";
      return kOk;
    }
  } catch (const Failure& f) {
    std::cerr << "bsqlab: " << f.message << "\n";
    return f.code;
  } catch (const ConfigError& e) {
    std::cerr << "bsqlab: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bsqlab: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "bsqlab: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "bsqlab: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace bsq::cli
