#include "fockstar/config.hpp"
#include "fockstar/report.hpp"
#include "fockstar/suites.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fockstar;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fockstar_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

int run_verify(const std::string& args) {
  const std::string cmd = std::string(FOCKSTAR_VERIFY_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config(const std::string& name) { return std::string(FOCKSTAR_CONFIG_DIR) + "/" + name; }

std::string field_of(std::string_view text) {
  try {
    parse_config(text).validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("config defaults and parsing") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.d == 2);
  CHECK(cfg.K == 3);
  CHECK(cfg.N == 6);
  CHECK(cfg.R == 4);
  CHECK(cfg.weight_c == 1);
  CHECK(cfg.mc.n_samples == 20000);
  CHECK(cfg.mc.seed == 42);
  CHECK(cfg.output_path == "report.json");
  CHECK_NOTHROW(cfg.validate());

  CHECK(parse_config(R"({"weight_c": "4/1"})").weight_c == 4);
  CHECK(parse_config(R"({"weight_c": "6/4"})").weight_c == Rational(3, 2));
  const auto t = parse_config(R"({"alpha": {"table": {"0": "1", "2": "-3/2"}, "mu": 1}})");
  CHECK(t.alpha.is_table());
  CHECK(t.alpha.table.at(2) == Rational(-3, 2));
  CHECK(t.alpha.mu == 1.0);
  CHECK(parse_config(R"({"alpha": "one"})").alpha.families() == std::vector<std::string>{"one"});
  CHECK(parse_config("{}").alpha.families().size() == 3);
}

TEST_CASE("config errors name the field") {
  CHECK(field_of(R"({"N": 6, "R": 4, "suites": ["equivalence"]})") == "R");
  CHECK(field_of(R"({"hbar": 1})") == "hbar");
  CHECK(field_of(R"({"mc": {"n_samples": 0}})") == "mc.n_samples");
  CHECK(field_of(R"({"mc": {"nsamples": 10}})") == "mc.nsamples");
  CHECK(field_of(R"({"weight_c": "-1"})") == "weight_c");
  CHECK(field_of(R"({"suites": ["nope"]})").rfind("suites", 0) == 0);
  CHECK(field_of(R"({"alpha": "quartic"})") == "alpha");
  CHECK(field_of(R"({"d": "two"})") == "d");
  CHECK(field_of(R"({"N": 10, "R": 2, "suites": ["equivalence"]})") == "<none>");
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("report JSON round trip") {
  VerificationReport rep;
  rep.config_echo = config_to_json(parse_config("{}"));
  rep.records.push_back(make_record("algebra", "x", "wick-commutative-algebra", 0.0, 0.0, 3, 42, "exact"));
  rep.records.push_back(make_record("chaos", "y", "anchor", 1.0 / 3.0, 1e-6, 1, 7));
  auto nan_rec = make_record("gaussian", "z", "anchor", std::nan(""), 1.0, 1, 7);
  nan_rec.wall_time = 0.25;
  rep.records.push_back(nan_rec);
  CHECK_FALSE(nan_rec.pass);
  CHECK(rep.n_failed() == 2);

  const auto text = report_to_json(rep);
  const auto back = report_from_json(text);
  CHECK(back.config_echo == rep.config_echo);
  REQUIRE(back.records.size() == 3);
  CHECK(back.records[0] == rep.records[0]);
  CHECK(back.records[1] == rep.records[1]);
  CHECK(std::isnan(back.records[2].residual));
  CHECK(back.records[2].wall_time == 0.25);
  CHECK(report_to_json(back) == text);
  CHECK(text.find("\"residual\": null") != std::string::npos);
  CHECK(text.find("0.33333333333333331") != std::string::npos);
  CHECK(text.find("output_path") == std::string::npos);

  CHECK_THROWS_AS(report_from_json("[]"), std::runtime_error);
  CHECK_THROWS_AS(report_from_json("{\"records\": [{\"suite\": 1}]}"), std::runtime_error);
}

TEST_CASE("empty suite list gives an empty valid report") {
  auto cfg = parse_config(R"({"suites": []})");
  const auto rep = run_suites(cfg);
  CHECK(rep.records.empty());
  CHECK(rep.all_pass());
  const auto back = report_from_json(report_to_json(rep));
  CHECK(back.records.empty());
  CHECK(report_summary(rep) == "0 checks, 0 failed\n");
}

TEST_CASE("reports are deterministic and anchored") {
  auto cfg = parse_config(R"({"suites": ["algebra", "poisson"], "K": 2})");
  const auto a = report_to_json(run_suites(cfg));
  const auto b = report_to_json(run_suites(cfg));
  CHECK(a == b);
  for (const auto& r : report_from_json(a).records) {
    CHECK_FALSE(r.anchor.empty());
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(run_suite("nope", cfg), std::invalid_argument);
}

TEST_CASE("emit writes JSON and summary") {
  const auto path = scratch("emit.json");
  VerificationReport rep;
  rep.records.push_back(make_record("algebra", "x", "a", 0.0, 0.0, 1, 1));
  emit_report(rep, path.string());
  CHECK(read_file(path) == report_to_json(rep));
  CHECK(read_file(path.string() + ".txt") == report_summary(rep));
  CHECK_THROWS_AS(emit_report(rep, "/nonexistent/dir/r.json"), std::runtime_error);
}

TEST_CASE("verify exit codes") {
  const auto out = scratch("exit.json").string();
  CHECK(run_verify("--config " + config("pass.json") + " --out " + out) == 0);
  CHECK(run_verify("--config " + config("algebra.json") + " --out " + out) == 0);
  CHECK(run_verify("--config " + config("fail.json") + " --out " + out) == 1);
  CHECK(report_from_json(read_file(out)).n_failed() > 0);
  CHECK(run_verify("--config " + config("bad.json") + " --out " + out) == 2);
  CHECK(run_verify("--config " + config("unknown_key.json") + " --out " + out) == 2);
  CHECK(run_verify("--config /nonexistent.json --out " + out) == 2);
  CHECK(run_verify("--out " + out) == 2);
  CHECK(run_verify("--config " + config("pass.json") + " --suite bogus --out " + out) == 2);
  CHECK(run_verify("--config " + config("pass.json") + " --out /nonexistent/dir/r.json") == 2);
}

TEST_CASE("command-line overrides") {
  const auto out = scratch("override.json").string();
  REQUIRE(run_verify("--config " + config("pass.json") + " --suite algebra --seed 9 --out " + out) == 0);
  const auto rep = report_from_json(read_file(out));
  CHECK_FALSE(rep.records.empty());
  int seeded = 0;
  for (const auto& r : rep.records) {
    CHECK(r.suite == "algebra");
    // deterministic checks (no random instances) record seed 0
    CHECK((r.seed == 9 || r.seed == 0));
    seeded += r.seed == 9 ? 1 : 0;
  }
  CHECK(seeded > 0);
  CHECK(rep.config_echo.find("\"seed\":9") != std::string::npos);
}

TEST_CASE("golden report and reference files") {
  const fs::path golden = FOCKSTAR_GOLDEN_DIR;
  const auto out = scratch("default.json");
  const auto dump = scratch("dump");
  REQUIRE(run_verify("--config " + config("default.json") + " --out " + out.string() +
                     " --dump-dir " + dump.string()) == 0);
  CHECK(read_file(out) == read_file(golden / "default_report.json"));
  CHECK(read_file(out.string() + ".txt") == read_file(golden / "default_report.json.txt"));
  for (const char* name : {"wick_product.fock", "poisson_bracket.fock", "moyal_star_r0.fock",
                           "moyal_star_r1.fock", "moyal_star_r2.fock", "moyal_star_r3.fock",
                           "wick_exponential.fock", "loop_sample.csv"}) {
    INFO(name);
    CHECK(read_file(dump / name) == read_file(golden / name));
  }
}
