#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsq/cli/commands.hpp"
#include "bsq/dynamics/config.hpp"
#include "bsq/dynamics/trajectory.hpp"

namespace fs = std::filesystem;
using bsq::cli::run_cli;

namespace {

struct Workspace {
  fs::path root;
  fs::path config;

  Workspace() {
    root = fs::temp_directory_path() / ("bsqlab_cli_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
    auto doc = bsq::dynamics::default_config_json();
    doc["name"] = "small";
    doc["n"] = 16;
    doc["dt"] = 0.002;
    doc["t_end"] = 0.02;
    doc["diag_every"] = 2;
    doc["theta0"] = {{"kind", "gaussian"}, {"center", {1.5, 3.0}}, {"width", 0.8}};
    doc["omega0"] = {{"kind", "patch"}, {"center", {3.0, 3.0}}, {"radius", 1.0},
                     {"transition", 0.6}, {"target_linf", 1.0}};
    config = root / "small.json";
    std::ofstream(config) << doc.dump(2);
  }
  ~Workspace() { fs::remove_all(root); }

  int cli(std::vector<std::string> args) const {
    args.insert(args.begin(), "bsqlab");
    return run_cli(args);
  }
  std::string path(const std::string& name) const { return (root / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
  Workspace w;
  CHECK(w.cli({}) == bsq::cli::kIoError);
  CHECK(w.cli({"run", "-c", w.path("missing.json")}) == bsq::cli::kIoError);
  CHECK(w.cli({"report", "-r", w.path("nowhere")}) == bsq::cli::kIoError);
}

TEST_CASE("configuration errors exit 2") {
  Workspace w;
  CHECK(w.cli({"run", "-c", w.config.string(), "-s", "n=100", "-o", w.path("bad")}) ==
        bsq::cli::kConfigError);
  CHECK(w.cli({"run", "-c", w.config.string(), "-s", "no_such_key=1", "-o", w.path("bad")}) ==
        bsq::cli::kConfigError);
  CHECK(w.cli({"twin", "-c", w.config.string(), "--partner-set", "n=32", "-o", w.path("tw")}) ==
        bsq::cli::kConfigError);
}

TEST_CASE("run, verify, report and plot-data on one run directory") {
  Workspace w;
  const auto dir = w.path("r");
  REQUIRE(w.cli({"run", "-c", w.config.string(), "-o", dir}) == bsq::cli::kOk);
  for (const char* f : {"config.json", "diagnostics.csv", "besov.csv", "theta_final.bin",
                        "omega_final.bin"})
    CHECK(fs::exists(fs::path(dir) / f));
  const auto tr = bsq::dynamics::Trajectory::read_csv(fs::path(dir) / "diagnostics.csv");
  CHECK(tr.size() == 6);

  CHECK(w.cli({"verify", "-r", dir, "--samples", "2"}) == bsq::cli::kOk);
  const auto report = nlohmann::json::parse(std::ifstream(fs::path(dir) / "verification.json"));
  REQUIRE(report.is_array());
  CHECK(report.size() > 20);
  for (const auto& r : report)
    for (const char* key : {"name", "class", "pass", "margin", "empirical_constant",
                            "truncation", "config_hash"})
      CHECK(r.contains(key));
  CHECK(w.cli({"report", "-r", dir}) == bsq::cli::kOk);

  CHECK(w.cli({"plot-data", "-r", dir, "--channels", "theta_l2,u_l2"}) == bsq::cli::kOk);
  CHECK(fs::exists(fs::path(dir) / "plot" / "theta_l2.csv"));
  CHECK(w.cli({"plot-data", "-r", dir, "--channels", "bogus"}) == bsq::cli::kConfigError);
}

TEST_CASE("verify flags a corrupted or incomplete diagnostics table") {
  Workspace w;
  const fs::path dir = w.path("r");
  REQUIRE(w.cli({"run", "-c", w.config.string(), "-o", dir.string()}) == bsq::cli::kOk);
  auto tr = bsq::dynamics::Trajectory::read_csv(dir / "diagnostics.csv");

  bsq::dynamics::Trajectory bad(tr.columns());
  const auto col = tr.index("theta_l2");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    auto row = tr.row(i);
    if (i + 1 == tr.size()) row[col] *= 1.01;
    bad.append(row);
  }
  bad.write_csv(dir / "diagnostics.csv");
  CHECK(w.cli({"verify", "-r", dir.string(), "--samples", "0", "--no-operator-checks"}) ==
        bsq::cli::kVerificationFailed);

  std::vector<std::string> cols;
  for (const auto& c : tr.columns())
    if (c != "u_l2") cols.push_back(c);
  bsq::dynamics::Trajectory missing(cols);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> row;
    for (const auto& c : cols) row.push_back(tr.at(i, c));
    missing.append(row);
  }
  missing.write_csv(dir / "diagnostics.csv");
  CHECK(w.cli({"verify", "-r", dir.string(), "--samples", "0", "--no-operator-checks"}) ==
        bsq::cli::kVerificationFailed);
}

TEST_CASE("twin and sweep write their tables") {
  Workspace w;
  CHECK(w.cli({"twin", "-c", w.config.string(), "-o", w.path("tw")}) == bsq::cli::kOk);
  CHECK(fs::exists(fs::path(w.path("tw")) / "twin.csv"));
  CHECK(fs::exists(fs::path(w.path("tw")) / "twin_report.json"));

  // Constants converge under dt refinement but move with kappa.
  CHECK(w.cli({"sweep", "-c", w.config.string(), "-g", "dt=0.002,0.001", "-o", w.path("sw")}) ==
        bsq::cli::kOk);
  CHECK(w.cli({"sweep", "-c", w.config.string(), "-g", "kappa=0.1,0.2", "-o", w.path("sk")}) ==
        bsq::cli::kVerificationFailed);
  const auto stab = nlohmann::json::parse(std::ifstream(fs::path(w.path("sw")) / "stability.json"));
  CHECK_FALSE(stab.empty());
}

TEST_CASE("smoke run with t_end = 0 records one row") {
  Workspace w;
  const fs::path dir = w.path("smoke");
  REQUIRE(w.cli({"run", "-c", w.config.string(), "-s", "t_end=0", "-o", dir.string()}) ==
          bsq::cli::kOk);
  CHECK(bsq::dynamics::Trajectory::read_csv(dir / "diagnostics.csv").size() == 1);
}

TEST_CASE("zero data passes every check") {
  Workspace w;
  const fs::path dir = w.path("zero");
  CHECK(w.cli({"verify", "-c", w.config.string(), "-s", "theta0={\"kind\":\"zero\"}", "-s",
               "omega0={\"kind\":\"zero\"}", "-o", dir.string(), "--samples", "0"}) ==
        bsq::cli::kOk);
}

TEST_CASE("zero twin perturbation gives zero differences") {
  Workspace w;
  const fs::path dir = w.path("tw0");
  REQUIRE(w.cli({"twin", "-c", w.config.string(), "-s", "twin.perturbation.amplitude=0", "-o",
                 dir.string()}) == bsq::cli::kOk);
  const auto tr = bsq::dynamics::Trajectory::read_csv(dir / "twin.csv");
  for (const char* c : {"du_l2", "du_linf", "dtheta_l2", "X"})
    for (double v : tr.channel(c)) CHECK(v == 0.0);
}

TEST_CASE("plot-data keeps rows aligned with the diagnostics table") {
  Workspace w;
  const fs::path dir = w.path("p");
  REQUIRE(w.cli({"run", "-c", w.config.string(), "-o", dir.string()}) == bsq::cli::kOk);
  REQUIRE(w.cli({"plot-data", "-r", dir.string(), "--channels", "Theta,u_l2"}) == bsq::cli::kOk);
  const auto tr = bsq::dynamics::Trajectory::read_csv(dir / "diagnostics.csv");
  const auto theta = bsq::dynamics::Trajectory::read_csv(dir / "plot" / "Theta.csv");
  const auto ul2 = bsq::dynamics::Trajectory::read_csv(dir / "plot" / "u_l2.csv");
  REQUIRE(theta.size() == tr.size());
  REQUIRE(ul2.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(theta.row(i)[0] == tr.at(i, "time"));
    CHECK(theta.row(i)[1] == tr.at(i, "Theta"));
    CHECK(ul2.row(i)[0] == tr.at(i, "time"));
  }
}

TEST_CASE("sweep grids") {
  Workspace w;
  CHECK(w.cli({"sweep", "-c", w.config.string(), "-g", "kappa=0.1", "-o", w.path("one")}) ==
        bsq::cli::kOk);
  CHECK(fs::exists(fs::path(w.path("one")) / "stability.json"));
  CHECK(w.cli({"sweep", "-c", w.config.string(), "-g", "kappa=", "-o", w.path("e")}) ==
        bsq::cli::kConfigError);
  CHECK(w.cli({"sweep", "-c", w.config.string(), "-g", "kappa", "-o", w.path("e")}) ==
        bsq::cli::kConfigError);
}
