#pragma once
// Run configuration: one JSON document, validated field by field. Errors
// carry the dotted path of the offending key.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace bsq::dynamics {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class System { Boussinesq, Benard, Euler };
const char* system_name(System s) noexcept;

struct TwinSettings {
  // Descriptor of the vorticity perturbation added to the second run; its
  // amplitude is the L^inf norm of the velocity perturbation.
  json perturbation = {{"kind", "random_band"}, {"band", {1, 3}}, {"amplitude", 1e-4},
                       {"seed", 7}};
  std::vector<double> p_list{2, 4, 8};
};

struct RunConfig {
  std::string name = "run";
  int n = 128;
  double kappa = 0.1;
  double dt = 1e-3;
  // Upper bound on dt * max|u| / h; with `adaptive` the step is shrunk to
  // meet it, otherwise a violation aborts the run.
  double cfl = 0.5;
  bool adaptive = false;
  double t_end = 1.0;
  System system = System::Boussinesq;
  json theta0 = {{"kind", "zero"}};
  json omega0 = {{"kind", "zero"}};
  // Spectral cutoff S_level applied to the initial data; negative disables.
  int mollify = -1;
  int diag_every = 10;
  int snapshot_every = 0;  // steps between snapshots; 0 writes none
  std::vector<double> p_grid{2, 4, 8, std::numeric_limits<double>::infinity()};
  std::vector<double> alpha_grid{1, 2, 4, std::numeric_limits<double>::infinity()};
  double yudovich_r = 2.0;
  double yudovich_p_max = 64.0;
  std::uint64_t seed = 1;
  std::string output_dir;  // empty: chosen by the caller
  TwinSettings twin;

  json to_json() const;
  static RunConfig from_json(const json& doc);
};

// Default document with every key present; used to type-check overrides.
json default_config_json();

// Sets doc[dotted] = value. The value is parsed as JSON when possible and
// otherwise taken as a string; its type must match the existing entry.
void apply_override(json& doc, const std::string& assignment);

// FNV-1a 64-bit hash of the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const json& doc);

// Exponent lists: numbers >= 1 or the string "inf".
double parse_exponent(const json& v, const std::string& path);
json exponent_to_json(double p);
std::string exponent_label(double p);  // "2", "inf", "1.5"

}  // namespace bsq::dynamics
