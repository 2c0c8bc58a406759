// verify: run the verification suites and write a deterministic report.
//
//   verify --config <path> [--suite <name>]... [--out <path>] [--seed <u64>]
//          [--dump-dir <dir>]
//
// Exit status: 0 all checks pass, 1 some check failed, 2 configuration or I/O error.

#include "fockstar/config.hpp"
#include "fockstar/equivalence.hpp"
#include "fockstar/gaussian_loop.hpp"
#include "fockstar/report.hpp"
#include "fockstar/serialize.hpp"
#include "fockstar/suites.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

using namespace fockstar;

/// Reference computations written in the Fock text format, for golden comparisons.
void dump_golden(const std::string& dir, const RunConfig& cfg) {
  std::filesystem::create_directories(dir);
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1), primal(1, 1), dual(1, -1)}, Rational(3, 2)) +
                 FockVector::monomial(MultiIndex{dual(1, 1), primal(1, -1)}, Rational(-2)) +
                 FockVector::vacuum(Rational(1, 3));
  const auto y = FockVector::monomial(MultiIndex{dual(1, 1), dual(1, 1)}, Rational(5)) +
                 FockVector::monomial(MultiIndex{primal(1, -1), dual(1, -1)}, Rational(1, 7));
  const auto form = SymplecticForm::canonical(1, cfg.weight_c);
  write_text_file(dir + "/wick_product.fock", serialize_fock(wick_product(x, y)));
  write_text_file(dir + "/poisson_bracket.fock", serialize_fock(poisson_bracket(x, y, form)));
  const auto star = moyal_star(x, y, form, 3);
  for (int r = 0; r <= 3; ++r) {
    write_text_file(dir + "/moyal_star_r" + std::to_string(r) + ".fock", serialize_fock(star[r]));
  }
  const ModeMap<Rational> g{{primal(1, 1), Rational(1, 2)}, {primal(1, -1), Rational(2)}};
  const ModeMap<Rational> gs{{dual(1, 1), Rational(-1)}};
  write_text_file(dir + "/wick_exponential.fock", serialize_fock(wick_exponential(g, gs, 4)));
  const auto sample = sample_loop(cfg.mc.seed, LoopSpec{cfg.d, 8, 64}, 0);
  write_text_file(dir + "/loop_sample.csv", export_loop_csv(sample));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for the truncated Fock algebra and its star-products"};
  std::string config_path;
  std::vector<std::string> suites;
  std::string out_path;
  std::uint64_t seed = 0;
  std::string dump_dir;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  auto* suite_opt = app.add_option("--suite", suites, "suite to run (repeatable)");
  auto* out_opt = app.add_option("--out", out_path, "report path (JSON; summary at <path>.txt)");
  auto* seed_opt = app.add_option("--seed", seed, "override mc.seed");
  app.add_option("--dump-dir", dump_dir, "also write golden reference files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
    if (*suite_opt) cfg.suites = suites;
    if (*out_opt) cfg.output_path = out_path;
    if (*seed_opt) cfg.mc.seed = seed;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto report = run_suites(cfg);
    emit_report(report, cfg.output_path);
    if (!dump_dir.empty()) dump_golden(dump_dir, cfg);
    std::cout << report_summary(report);
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
