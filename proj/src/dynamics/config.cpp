#include "bsq/dynamics/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "bsq/spectral/grid.hpp"

namespace bsq::dynamics {
namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(key, "missing required key");
  return doc.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number, got " + v.dump());
  return v.get<double>();
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer, got " + v.dump());
  return v.get<int>();
}

std::vector<double> exponent_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(parse_exponent(v[i], path + "." + std::to_string(i)));
  return out;
}

void check_descriptor(const json& d, const std::string& path) {
  if (!d.is_object() || !d.contains("kind") || !d["kind"].is_string())
    throw ConfigError(path + ".kind", "initial-data descriptor needs a string 'kind'");
  static const char* kinds[] = {"zero", "gaussian", "patch", "random_band", "mode"};
  const std::string k = d["kind"];
  for (const char* ok : kinds)
    if (k == ok) return;
  throw ConfigError(path + ".kind",
                    "unknown kind '" + k + "' (zero, gaussian, patch, random_band, mode)");
}

}  // namespace

const char* system_name(System s) noexcept {
  switch (s) {
    case System::Boussinesq: return "boussinesq";
    case System::Benard: return "benard";
    case System::Euler: return "euler";
  }
  return "?";
}

double parse_exponent(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError(path, "expected a number >= 1 or \"inf\"");
  }
  const double p = number(v, path);
  if (!(p >= 1.0)) throw ConfigError(path, "exponent must be >= 1");
  return p;
}

json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  if (p == std::floor(p) && p < 1e15) return static_cast<long long>(p);
  return p;
}

std::string exponent_label(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

json RunConfig::to_json() const {
  json ps = json::array(), as = json::array(), tp = json::array();
  for (double p : p_grid) ps.push_back(exponent_to_json(p));
  for (double a : alpha_grid) as.push_back(exponent_to_json(a));
  for (double p : twin.p_list) tp.push_back(exponent_to_json(p));
  return json{{"name", name},
              {"n", n},
              {"kappa", kappa},
              {"dt", dt},
              {"cfl", cfl},
              {"adaptive", adaptive},
              {"t_end", t_end},
              {"system", system_name(system)},
              {"theta0", theta0},
              {"omega0", omega0},
              {"mollify", mollify},
              {"diag_every", diag_every},
              {"snapshot_every", snapshot_every},
              {"p_grid", ps},
              {"alpha_grid", as},
              {"yudovich", {{"r", yudovich_r}, {"p_max", yudovich_p_max}}},
              {"seed", seed},
              {"output_dir", output_dir},
              {"twin", {{"perturbation", twin.perturbation}, {"p_list", tp}}}};
}

RunConfig RunConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
  const json defaults = default_config_json();
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!defaults.contains(it.key())) throw ConfigError(it.key(), "unknown key");

  RunConfig c;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("name", "expected a string");
    c.name = doc["name"];
  }
  c.n = integer(require(doc, "n"), "n");
  if (!spectral::is_power_of_two(c.n) || c.n < 16)
    throw ConfigError("n", "must be a power of two >= 16, got " + std::to_string(c.n));
  c.kappa = number(require(doc, "kappa"), "kappa");
  if (!(c.kappa >= 0.0)) throw ConfigError("kappa", "must be >= 0");
  c.dt = number(require(doc, "dt"), "dt");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (doc.contains("cfl")) c.cfl = number(doc["cfl"], "cfl");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("cfl", "must lie in (0, 1]");
  if (doc.contains("adaptive")) {
    if (!doc["adaptive"].is_boolean()) throw ConfigError("adaptive", "expected true/false");
    c.adaptive = doc["adaptive"];
  }
  c.t_end = number(require(doc, "t_end"), "t_end");
  if (!(c.t_end >= 0.0)) throw ConfigError("t_end", "must be >= 0");
  if (doc.contains("system")) {
    const json& s = doc["system"];
    if (!s.is_string()) throw ConfigError("system", "expected a string");
    const std::string v = s;
    if (v == "boussinesq") c.system = System::Boussinesq;
    else if (v == "benard") c.system = System::Benard;
    else if (v == "euler") c.system = System::Euler;
    else throw ConfigError("system", "unknown system '" + v + "' (boussinesq, benard, euler)");
  }
  if (doc.contains("theta0")) c.theta0 = doc["theta0"];
  if (doc.contains("omega0")) c.omega0 = doc["omega0"];
  check_descriptor(c.theta0, "theta0");
  check_descriptor(c.omega0, "omega0");
  if (c.system == System::Euler && c.theta0["kind"] != "zero")
    throw ConfigError("theta0", "the euler system requires theta0.kind = zero");
  if (doc.contains("mollify")) c.mollify = integer(doc["mollify"], "mollify");
  if (doc.contains("diag_every")) c.diag_every = integer(doc["diag_every"], "diag_every");
  if (c.diag_every < 1) throw ConfigError("diag_every", "must be >= 1");
  if (doc.contains("snapshot_every"))
    c.snapshot_every = integer(doc["snapshot_every"], "snapshot_every");
  if (c.snapshot_every < 0) throw ConfigError("snapshot_every", "must be >= 0");
  if (doc.contains("p_grid")) c.p_grid = exponent_list(doc["p_grid"], "p_grid");
  if (doc.contains("alpha_grid")) c.alpha_grid = exponent_list(doc["alpha_grid"], "alpha_grid");
  if (doc.contains("yudovich")) {
    const json& y = doc["yudovich"];
    if (!y.is_object()) throw ConfigError("yudovich", "expected an object");
    for (auto it = y.begin(); it != y.end(); ++it)
      if (it.key() != "r" && it.key() != "p_max")
        throw ConfigError("yudovich." + it.key(), "unknown key");
    if (y.contains("r")) c.yudovich_r = number(y["r"], "yudovich.r");
    if (y.contains("p_max")) c.yudovich_p_max = number(y["p_max"], "yudovich.p_max");
  }
  if (!(c.yudovich_r >= 1.0)) throw ConfigError("yudovich.r", "must be >= 1");
  if (!(c.yudovich_p_max >= c.yudovich_r) || std::isinf(c.yudovich_p_max))
    throw ConfigError("yudovich.p_max", "must be finite and >= yudovich.r");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw ConfigError("seed", "expected a non-negative integer");
    if (doc["seed"].is_number_integer() && doc["seed"].get<long long>() < 0)
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ConfigError("output_dir", "expected a string");
    c.output_dir = doc["output_dir"];
  }
  if (doc.contains("twin")) {
    const json& t = doc["twin"];
    if (!t.is_object()) throw ConfigError("twin", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it)
      if (it.key() != "perturbation" && it.key() != "p_list")
        throw ConfigError("twin." + it.key(), "unknown key");
    if (t.contains("perturbation")) {
      c.twin.perturbation = t["perturbation"];
      check_descriptor(c.twin.perturbation, "twin.perturbation");
    }
    if (t.contains("p_list")) {
      c.twin.p_list = exponent_list(t["p_list"], "twin.p_list");
      for (std::size_t i = 0; i < c.twin.p_list.size(); ++i)
        if (std::isinf(c.twin.p_list[i]) || c.twin.p_list[i] < 2.0)
          throw ConfigError("twin.p_list." + std::to_string(i), "must be finite and >= 2");
    }
  }
  return c;
}

json default_config_json() { return RunConfig{}.to_json(); }

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(assignment, "override must look like key.path=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }

  // Walk the dotted path in both the document and the defaults; the type of
  // whichever entry exists decides what the value must look like.
  const json defaults = default_config_json();
  json* node = &doc;
  const json* ref = &defaults;
  std::string seen;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    seen += (seen.empty() ? "" : ".") + part;
    if (!node->is_object() && !node->is_array())
      throw ConfigError(seen, "cannot descend into a scalar");
    json* next = nullptr;
    const json* next_ref = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(part);
      } catch (...) {
        throw ConfigError(seen, "expected an array index");
      }
      if (idx >= node->size()) throw ConfigError(seen, "array index out of range");
      next = &(*node)[idx];
      if (ref && ref->is_array() && idx < ref->size()) next_ref = &(*ref)[idx];
    } else {
      const bool known = node->contains(part) || (ref && ref->is_object() && ref->contains(part));
      if (!known) throw ConfigError(seen, "unknown key");
      if (ref && ref->is_object() && ref->contains(part)) next_ref = &(*ref)[part];
      if (!node->contains(part)) (*node)[part] = next_ref ? *next_ref : json();
      next = &(*node)[part];
    }
    if (dot == std::string::npos) {
      const json& current = next->is_null() && next_ref ? *next_ref : *next;
      const bool exponent_slot = seen.find("p_grid") == 0 || seen.find("alpha_grid") == 0 ||
                                 seen.find("twin.p_list") == 0;
      bool ok = false;
      if (current.is_number_integer() || current.is_number_unsigned())
        ok = value.is_number_integer() || value.is_number_unsigned();
      else if (current.is_number())
        ok = value.is_number();
      else if (current.is_boolean())
        ok = value.is_boolean();
      else if (current.is_string())
        ok = value.is_string() || (exponent_slot && value.is_number());
      else if (current.is_array() || current.is_object())
        ok = value.type() == current.type();
      else
        ok = true;
      if (exponent_slot && current.is_number() && value.is_string()) ok = value == "inf";
      if (!ok)
        throw ConfigError(seen, "type mismatch: cannot assign " + value.dump() + " to a " +
                                    current.type_name() + " entry");
      *next = value;
      return;
    }
    node = next;
    ref = next_ref;
    start = dot + 1;
  }
}

std::string config_hash(const json& doc) {
  const std::string s = doc.dump();  // nlohmann objects are key-sorted
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bsq::dynamics
