#pragma once

#include "fockstar/scalar.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fockstar {

/// Invalid configuration. `field` is a JSON-pointer-like path ("mc.n_samples").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Either a named family ("zero", "one", "ksq", or "all" for the three of them)
/// or an explicit table k -> alpha_k.
struct AlphaSpec {
  std::string family = "all";
  std::map<int, Rational> table;
  double mu = 2.0;

  bool is_table() const { return family == "table"; }
  /// Family names this spec expands to ("table" for an explicit table).
  std::vector<std::string> families() const;
};

struct McConfig {
  int n_samples = 20000;
  std::uint64_t seed = 42;
  int K_mc = 64;
  int M = 512;
  int n_grid = 4096;
};

struct RunConfig {
  int d = 2;
  int K = 3;
  int N = 6;
  int R = 4;
  Rational weight_c = 1;
  AlphaSpec alpha;
  McConfig mc;
  std::vector<std::string> suites = default_suites();
  std::string output_path = "report.json";
  bool report_wall_time = false;

  static std::vector<std::string> default_suites();
  static const std::vector<std::string>& known_suites();

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Parses JSON text; missing keys take defaults, unknown keys are errors.
RunConfig parse_config(std::string_view json_text);
/// Reads and parses a file. Throws ConfigError (field "") if it cannot be read.
RunConfig load_config(const std::string& path);

}  // namespace fockstar
