#include "fockstar/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fockstar {

using nlohmann::json;

std::vector<std::string> AlphaSpec::families() const {
  if (family == "all") return {"zero", "one", "ksq"};
  return {family};
}

std::vector<std::string> RunConfig::default_suites() {
  return {"algebra", "chaos", "gaussian", "poisson", "moyal"};
}

const std::vector<std::string>& RunConfig::known_suites() {
  static const std::vector<std::string> names = {"algebra", "chaos",  "gaussian",
                                                 "poisson", "moyal", "equivalence"};
  return names;
}

void RunConfig::validate() const {
  if (d < 1) throw ConfigError("d", "must be >= 1");
  if (K < 1) throw ConfigError("K", "must be >= 1");
  if (N < 2) throw ConfigError("N", "must be >= 2");
  if (R < 1) throw ConfigError("R", "must be >= 1");
  if (sgn(weight_c) < 0) throw ConfigError("weight_c", "must be non-negative");
  if (mc.n_samples < 100) throw ConfigError("mc.n_samples", "must be >= 100");
  if (mc.K_mc < 1) throw ConfigError("mc.K_mc", "must be >= 1");
  if (mc.M < 8) throw ConfigError("mc.M", "must be >= 8");
  if (mc.n_grid < 64) throw ConfigError("mc.n_grid", "must be >= 64");
  const auto& known = known_suites();
  for (std::size_t i = 0; i < suites.size(); ++i) {
    if (std::find(known.begin(), known.end(), suites[i]) == known.end()) {
      throw ConfigError("suites[" + std::to_string(i) + "]", "unknown suite '" + suites[i] + "'");
    }
  }
  const bool equivalence = std::find(suites.begin(), suites.end(), "equivalence") != suites.end();
  if (equivalence && N - 2 * R < 0) {
    throw ConfigError("R", "equivalence needs N - 2R >= 0 (got N=" + std::to_string(N) +
                               ", R=" + std::to_string(R) + ")");
  }
  if (alpha.is_table() && alpha.table.empty()) throw ConfigError("alpha", "table is empty");
  if (!(alpha.mu > 0.0)) throw ConfigError("alpha.mu", "must be positive");
}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown key");
  }
}

template <class T>
T get_int(const json& obj, const char* key, T fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  if constexpr (std::is_unsigned_v<T>) {
    if (v.is_number_unsigned()) return v.get<T>();
    const auto x = v.get<std::int64_t>();
    if (x < 0) throw ConfigError(path, "expected a non-negative integer");
    return static_cast<T>(x);
  } else {
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) {
      throw ConfigError(path, "integer out of range");
    }
    return static_cast<T>(x);
  }
}

Rational get_rational(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a rational string \"p/q\"");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

AlphaSpec parse_alpha(const json& v) {
  AlphaSpec spec;
  if (v.is_string()) {
    spec.family = v.get<std::string>();
    static const std::set<std::string> names = {"zero", "one", "ksq", "all"};
    if (!names.count(spec.family)) throw ConfigError("alpha", "unknown family '" + spec.family + "'");
    return spec;
  }
  if (!v.is_object()) throw ConfigError("alpha", "expected a family name or an object");
  reject_unknown(v, {"table", "mu"}, "alpha.");
  if (!v.contains("table") || !v.at("table").is_object()) {
    throw ConfigError("alpha.table", "expected an object {k: \"p/q\"}");
  }
  spec.family = "table";
  for (const auto& [key, value] : v.at("table").items()) {
    const std::string path = "alpha.table." + key;
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || key.empty()) throw ConfigError(path, "frequency key must be an integer");
    spec.table[k] = get_rational(value, path);
  }
  if (v.contains("mu")) {
    if (!v.at("mu").is_number()) throw ConfigError("alpha.mu", "expected a number");
    spec.mu = v.at("mu").get<double>();
  }
  return spec;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown(root,
                 {"d", "K", "N", "R", "weight_c", "alpha", "mc", "suites", "output_path",
                  "report_wall_time"},
                 "");
  RunConfig cfg;
  cfg.d = get_int(root, "d", cfg.d, "d");
  cfg.K = get_int(root, "K", cfg.K, "K");
  cfg.N = get_int(root, "N", cfg.N, "N");
  cfg.R = get_int(root, "R", cfg.R, "R");
  if (root.contains("weight_c")) cfg.weight_c = get_rational(root.at("weight_c"), "weight_c");
  if (root.contains("alpha")) cfg.alpha = parse_alpha(root.at("alpha"));
  if (root.contains("mc")) {
    const json& mc = root.at("mc");
    if (!mc.is_object()) throw ConfigError("mc", "expected an object");
    reject_unknown(mc, {"n_samples", "seed", "K_mc", "M", "n_grid"}, "mc.");
    cfg.mc.n_samples = get_int(mc, "n_samples", cfg.mc.n_samples, "mc.n_samples");
    cfg.mc.seed = get_int(mc, "seed", cfg.mc.seed, "mc.seed");
    cfg.mc.K_mc = get_int(mc, "K_mc", cfg.mc.K_mc, "mc.K_mc");
    cfg.mc.M = get_int(mc, "M", cfg.mc.M, "mc.M");
    cfg.mc.n_grid = get_int(mc, "n_grid", cfg.mc.n_grid, "mc.n_grid");
  }
  if (root.contains("suites")) {
    const json& s = root.at("suites");
    if (!s.is_array()) throw ConfigError("suites", "expected an array of names");
    cfg.suites.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) throw ConfigError("suites[" + std::to_string(i) + "]", "expected a string");
      cfg.suites.push_back(s[i].get<std::string>());
    }
  }
  if (root.contains("output_path")) {
    if (!root.at("output_path").is_string()) throw ConfigError("output_path", "expected a string");
    cfg.output_path = root.at("output_path").get<std::string>();
  }
  if (root.contains("report_wall_time")) {
    if (!root.at("report_wall_time").is_boolean()) {
      throw ConfigError("report_wall_time", "expected a boolean");
    }
    cfg.report_wall_time = root.at("report_wall_time").get<bool>();
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace fockstar
