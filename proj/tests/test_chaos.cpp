#include "fockstar/chaos.hpp"
#include "fockstar/random_fock.hpp"
#include "fockstar/suites.hpp"

#include <doctest.h>

#include <cmath>

using namespace fockstar;

namespace {

// Forward-mode dual number: value and derivative along one direction.
struct Dual {
  double v = 0, d = 0;
  Dual() = default;
  Dual(double x) : v(x) {}
  Dual(double x, double dx) : v(x), d(dx) {}
};
Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }

ModeMap<double> random_xi(RandomFock& rf, const std::vector<ModeIndex>& modes) {
  ModeMap<double> xi;
  for (const auto& m : modes) xi[m] = rf.normal();
  return xi;
}

}  // namespace

TEST_CASE("config validation") {
  ChaosEvalConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_grid = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.fd_epsilon = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("pairing recovers the spectral coefficient") {
  const LoopSpec spec{2, 16, 256};
  const auto s = sample_loop(4, spec, 0);
  ChaosEvalConfig cfg;
  cfg.n_grid = 256;
  for (int k = -16; k <= 16; ++k) {
    CHECK(stratonovich_pairing(primal(2, k), s, cfg) == doctest::Approx(s.xi_at(2, k)).epsilon(1e-10));
  }
  // k = 0: the mean of the loop over the circle
  double mean = 0;
  for (int m = 0; m < spec.M; ++m) mean += s.value(m, 1);
  CHECK(stratonovich_pairing(primal(1, 0), s, cfg) == doctest::Approx(mean / spec.M));
}

TEST_CASE("spectral chaos is a polynomial in xi") {
  const auto f = FockVector::monomial(MultiIndex{primal(1, 1), primal(1, 1), primal(2, 0)}, Rational(3, 2)) +
                 FockVector::vacuum(Rational(-1));
  const ModeMap<double> xi{{primal(1, 1), 2.0}, {primal(2, 0), -0.5}};
  CHECK(chaos_eval_spectral(f, xi) == doctest::Approx(1.5 * 4 * -0.5 - 1));
  CHECK(chaos_eval_spectral(f, ModeMap<double>{}) == doctest::Approx(-1.0));
}

TEST_CASE("chaos factorizes over the Wick product") {
  RandomFock rf(21);
  const auto modes = Truncation{2, 2}.primal_modes();
  for (int t = 0; t < 30; ++t) {
    const auto f = rf.vector(modes, 3, 4);
    const auto g = rf.vector(modes, 3, 4);
    const auto xi = random_xi(rf, modes);
    const double lhs = chaos_eval_spectral(wick_product(f, g), xi);
    const double rhs = chaos_eval_spectral(f, xi) * chaos_eval_spectral(g, xi);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("quadrature agrees with spectral evaluation") {
  const LoopSpec spec{2, 8, 512};
  const auto s = sample_loop(6, spec, 1);
  ChaosEvalConfig cfg;
  cfg.n_grid = 512;
  cfg.method = ChaosMethod::quadrature;
  RandomFock rf(8);
  const auto modes = Truncation{2, 3}.primal_modes();
  for (int t = 0; t < 10; ++t) {
    const auto f = rf.vector(modes, 3, 4);
    const double q = chaos_eval_quadrature(f, s, cfg);
    const double sp = chaos_eval_spectral(f, s.xi_map());
    CHECK(std::abs(q - sp) <= 1e-9 * (1 + std::abs(sp)));
  }
  CHECK(chaos_eval_quadrature(FockVector::vacuum(Rational(2)), s, cfg) == 2.0);
}

TEST_CASE("gateaux derivative equals annihilation along h") {
  RandomFock rf(13);
  const auto modes = Truncation{1, 2}.primal_modes();
  for (int t = 0; t < 20; ++t) {
    const auto f = rf.vector(modes, 4, 5);
    const auto xi = random_xi(rf, modes);
    ModeMap<Rational> h;
    ModeMap<double> hd;
    for (const auto& m : modes) {
      h[m] = rf.coefficient();
      hd[m] = h[m].get_d();
    }
    // dual-number derivative as the reference
    std::map<ModeIndex, Dual> xd;
    for (const auto& [m, v] : xi) xd[m] = Dual(v, hd[m]);
    const double ref = chaos_eval_spectral(f, xd).d;
    CHECK(chaos_eval_spectral(annihilate_general(h, f), xi) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(gateaux_derivative_fd(f, xi, hd, 1e-4) == doctest::Approx(ref).epsilon(1e-5));
  }
}

TEST_CASE("identity probe") {
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1)});
  CHECK(chaos_vanishes(FockVector(), 1));
  CHECK_FALSE(chaos_vanishes(x, 1));
  CHECK(chaos_vanishes(wick_product(x, x) - wick_product(x, x), 1));
}

TEST_CASE("chaos checks pass") {
  CHECK(checks::pairing_recovers_xi(LoopSpec{2, 32, 1024}, 1024, 2, 1).pass);
  CHECK(checks::spectral_factorization(2, 3, 40, 1).pass);
  for (const auto& r : checks::quadrature_evaluation(2, 2, LoopSpec{2, 16, 1024}, 1024, 20, 1)) {
    INFO(r.check_id << " " << r.residual);
    CHECK(r.pass);
  }
  CHECK(checks::gateaux_slope(2, 2, 20, 1).pass);
  CHECK(checks::injectivity_probe(2, 2, 20, 1).pass);
  CHECK(checks::normal_convergence(LoopSpec{2, 32, 256}, 1).pass);
}
