#include "fockstar/basis.hpp"
#include "fockstar/fock_vector.hpp"
#include "fockstar/hbar_series.hpp"
#include "fockstar/philox.hpp"
#include "fockstar/random_fock.hpp"
#include "fockstar/serialize.hpp"
#include "fockstar/suites.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fockstar;

namespace {

const double kPi = std::numbers::pi;

std::vector<ModeIndex> pool(int d, int K) {
  Truncation t{d, K};
  return t.doubled_modes();
}

// Polynomial value of F at a point, used as an independent homomorphism oracle.
Rational evaluate(const FockVector& f, const ModeMap<Rational>& x) {
  Rational total = 0;
  for (const auto& [mu, c] : f.terms()) {
    Rational term = c;
    for (const auto& e : mu.entries()) {
      auto it = x.find(e.mode);
      const Rational v = it == x.end() ? Rational(0) : it->second;
      for (int r = 0; r < e.mult; ++r) term *= v;
    }
    total += term;
  }
  return total;
}

void require_pass(const std::vector<CheckRecord>& recs) {
  for (const auto& r : recs) {
    INFO(r.check_id << " residual=" << r.residual << " note=" << r.note);
    CHECK(r.pass);
  }
}

}  // namespace

TEST_CASE("multi-index is a sorted multiset") {
  const auto a = MultiIndex{primal(1, 2), primal(1, 2), dual(2, -1)};
  CHECK(a.degree() == 3);
  CHECK(a.multiplicity(primal(1, 2)) == 2);
  CHECK(a.multiplicity(dual(1, 2)) == 0);
  CHECK(a.has_dual());
  CHECK(a == MultiIndex{dual(2, -1), primal(1, 2), primal(1, 2)});
  CHECK(a.without_one(primal(1, 2)) == MultiIndex{primal(1, 2), dual(2, -1)});
  CHECK(MultiIndex{primal(1, 0)} + MultiIndex{primal(1, 0)} == MultiIndex::of(primal(1, 0), 2));
  CHECK_THROWS_AS(MultiIndex::from_entries({{primal(1, 1), 0}}), std::invalid_argument);
  CHECK(MultiIndex{} < MultiIndex{primal(1, 1)});
}

TEST_CASE("wick product on small elements") {
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1)});
  const auto xsq = wick_product(x, x);
  CHECK(xsq.coefficient(MultiIndex::of(primal(1, 1), 2)) == 1);
  CHECK(xsq.size() == 1);
  CHECK(wick_product(FockVector::vacuum(), x) == x);
  CHECK(wick_product(FockVector(3), x).is_zero());

  // (1 + x)(1 - x) = 1 - x^2
  const auto one = FockVector::vacuum();
  auto lhs = wick_product(one + x, one - x);
  CHECK(lhs == one - xsq);
}

TEST_CASE("wick product is evaluation-multiplicative") {
  RandomFock rf(7);
  const auto modes = pool(2, 2);
  for (int t = 0; t < 40; ++t) {
    const auto f = rf.vector(modes, 3, 5);
    const auto g = rf.vector(modes, 3, 5);
    ModeMap<Rational> x;
    for (const auto& m : modes) x[m] = rf.coefficient();
    CHECK(evaluate(wick_product(f, g), x) == evaluate(f, x) * evaluate(g, x));
  }
}

TEST_CASE("annihilation acts as a partial derivative") {
  const auto m = primal(2, -1);
  const auto f = FockVector::monomial(MultiIndex::of(m, 3), Rational(2, 3)) +
                 FockVector::monomial(MultiIndex{primal(1, 0)}, Rational(5));
  const auto af = annihilate(m, f);
  CHECK(af.coefficient(MultiIndex::of(m, 2)) == 2);
  CHECK(af.size() == 1);
  CHECK(annihilate(m, FockVector::vacuum()).is_zero());

  // a_h F = sum_m h(m) dF/dx_m against a finite-difference-free exact oracle:
  // the directional derivative of the polynomial along h.
  RandomFock rf(11);
  const auto modes = pool(1, 2);
  for (int t = 0; t < 30; ++t) {
    const auto g = rf.vector(modes, 4, 6);
    const auto h = rf.mode_map(modes, 3);
    ModeMap<Rational> x;
    for (const auto& mm : modes) x[mm] = rf.coefficient();
    // d/dt F(x + t h) at t = 0 via the exact identity F(x + t h) polynomial in t:
    // evaluate at t = +-1, +-2 and use the five-point stencil, exact for degree <= 4.
    auto shifted = [&](int s) {
      ModeMap<Rational> y = x;
      for (const auto& [mm, v] : h) y[mm] += Rational(s) * v;
      return evaluate(g, y);
    };
    const Rational deriv = (shifted(-2) - 8 * shifted(-1) + 8 * shifted(1) - shifted(2)) / 12;
    CHECK(evaluate(annihilate_general(h, g), x) == deriv);
  }
}

TEST_CASE("wick exponential coefficients are 1 / n!") {
  const ModeMap<Rational> g{{primal(1, 1), Rational(1, 2)}};
  const ModeMap<Rational> gs{{dual(1, 1), Rational(-1)}};
  const auto phi = wick_exponential(g, gs, 4);
  CHECK(phi.coefficient(MultiIndex{}) == 1);
  // coefficient of x^a y^b is g^a gs^b / (a! b!)
  CHECK(phi.coefficient(MultiIndex::of(primal(1, 1), 3)) == Rational(1, 48));
  CHECK(phi.coefficient(MultiIndex{primal(1, 1), primal(1, 1), dual(1, 1), dual(1, 1)}) ==
        Rational(1, 4) / 4);
  CHECK(phi.coefficient(MultiIndex{primal(1, 1), dual(1, 1)}) == Rational(-1, 2));
  CHECK(phi.degree() == 4);
  CHECK_THROWS_AS(wick_exponential(gs, g, 3), std::invalid_argument);
}

TEST_CASE("hbar series ring operations") {
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1)});
  HbarSeries a(2), b(2);
  a[0] = FockVector::vacuum();
  a[1] = x;
  b[0] = x;
  b[2] = FockVector::vacuum(Rational(3));
  const auto p = series_wick_product(a, b);
  CHECK(p[0] == x);
  CHECK(p[1] == wick_product(x, x));
  CHECK(p[2] == FockVector::vacuum(Rational(3)));
  CHECK_THROWS_AS(a + HbarSeries(3), std::invalid_argument);
  CHECK_THROWS_AS(HbarSeries(-1), std::invalid_argument);
}

TEST_CASE("degree cap is enforced") {
  FockVector f(1);
  CHECK_THROWS_AS(f.add_term(MultiIndex{primal(1, 1), primal(1, 1)}, Rational(1)),
                  std::invalid_argument);
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1)});
  CHECK(wick_product(x, x, 1).is_zero());
}

TEST_CASE("serialization") {
  RandomFock rf(3);
  const auto modes = pool(2, 3);
  for (int t = 0; t < 30; ++t) {
    const auto f = rf.vector(modes, 5, 8);
    CHECK(deserialize_fock(serialize_fock(f)) == f);
  }
  CHECK(serialize_fock(FockVector()).empty());
  CHECK(deserialize_fock("").is_zero());
  CHECK(deserialize_fock("# only a comment\n\n").is_zero());

  const auto parsed = deserialize_fock("2; (1,1,0)^1 (1,-1,1)^1; 3/4\n0; ; -1/1\n2; (1,-1,1)^1 (1,1,0)^1; 1/4\n");
  CHECK(parsed.coefficient(MultiIndex{primal(1, 1), dual(1, -1)}) == 1);
  CHECK(parsed.coefficient(MultiIndex{}) == -1);
  CHECK(serialize_fock(parsed) == "0; ; -1/1\n2; (1,-1,1)^1 (1,1,0)^1; 1/1\n");
}

TEST_CASE("serialization parse errors carry positions") {
  auto position = [](std::string_view text) {
    try {
      deserialize_fock(text);
    } catch (const ParseError& e) {
      return std::pair{e.line(), e.column()};
    }
    return std::pair{0, 0};
  };
  CHECK(position("1; (1,1,0)^1; 1/1\n1; (1,1,0^1; 1/1\n").first == 2);
  CHECK(position("1; (1,1,0)^1; one\n").first == 1);
  CHECK(position("2; (1,1,0)^1; 1/1\n").first == 1);  // declared degree disagrees
  CHECK(position("1; (1,1,0)^1; 1/0\n").first == 1);
  CHECK(position("1; (1,1,0)^1; 1/1\n").first == 0);
}

TEST_CASE("basis is H-orthonormal") {
  // Independent closed forms for e_k and e_k'.
  auto e = [](int k, double s) {
    if (k == 0) return 1.0;
    const double w = 2 * kPi * std::abs(k);
    const double n = std::sqrt(2.0 / (1.0 + w * w));
    return k > 0 ? n * std::cos(w * s) : n * std::sin(w * s);
  };
  auto de = [](int k, double s) {
    if (k == 0) return 0.0;
    const double w = 2 * kPi * std::abs(k);
    const double n = std::sqrt(2.0 / (1.0 + w * w));
    return k > 0 ? -n * w * std::sin(w * s) : n * w * std::cos(w * s);
  };
  const int n = 512;
  for (int a = -3; a <= 3; ++a) {
    for (int b = -3; b <= 3; ++b) {
      double sum = 0;
      for (int j = 0; j < n; ++j) {
        const double s = static_cast<double>(j) / n;
        sum += e(a, s) * e(b, s) + de(a, s) * de(b, s);
      }
      sum /= n;
      CHECK(sum == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(h_inner_product(primal(1, a), primal(1, b), n) ==
            doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
    CHECK(BasisFunction(primal(1, a)).value(0.3) == doctest::Approx(e(a, 0.3)));
    CHECK(BasisFunction(primal(1, a)).derivative(1, 0.3) == doctest::Approx(de(a, 0.3)));
  }
  CHECK(BasisFunction(primal(1, 2)).stiffness() == doctest::Approx(1 + 16 * kPi * kPi));
  CHECK(mode_eval(dual(2, 1), 0.0, 2) == std::vector<double>{0.0, e(1, 0.0)});
}

TEST_CASE("connes norm bound") {
  CHECK(connes_norm_upper(FockVector::vacuum(), 3, 5.0) == doctest::Approx(1.0));
  CHECK(connes_norm_upper(FockVector(), 3, 5.0) == 0.0);

  // one slot: sum_{m<=k} sup|e^(m)| times C
  const int k = 2;
  const double w = 2 * kPi;
  const double nrm = std::sqrt(2.0 / (1.0 + w * w));
  const auto x = FockVector::monomial(MultiIndex{primal(1, 1)});
  CHECK(connes_norm_upper(x, k, 3.0) == doctest::Approx(3.0 * nrm * (1 + w + w * w)));

  // two slots: the joint block plus both orders of the split partition
  const auto xy = FockVector::monomial(MultiIndex{primal(1, 1), primal(1, 0)});
  const double joint = nrm * 1.0;  // k = 0 slot has no derivatives past m = 0
  const double split = 2 * (nrm * (1 + w + w * w)) * 1.0;
  CHECK(monomial_norm_bound(MultiIndex{primal(1, 1), primal(1, 0)}, k) ==
        doctest::Approx(joint + split));
  CHECK(connes_norm_upper(xy, k, 2.0) == doctest::Approx(4.0 * (joint + split)));

  RandomFock rf(5);
  const auto modes = pool(2, 2);
  for (int t = 0; t < 20; ++t) {
    const auto f = rf.vector(modes, 3, 4);
    const auto g = rf.vector(modes, 3, 4);
    const double nf = connes_norm_upper(f, 2, 1.5);
    CHECK(connes_norm_upper(f + g, 2, 1.5) <= nf + connes_norm_upper(g, 2, 1.5) + 1e-9);
    CHECK(connes_norm_upper(f * Rational(-2), 2, 1.5) == doctest::Approx(2 * nf));
    CHECK(connes_norm_upper(f, 3, 1.5) >= nf - 1e-12);
    CHECK(connes_norm_upper(f, 2, 2.0) >= nf - 1e-12);
  }
}

TEST_CASE("philox known-answer vectors") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate(C{0, 0, 0, 0}, {0, 0}) ==
        C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             {0xffffffffu, 0xffffffffu}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("algebra checks pass") {
  require_pass(checks::wick_axioms(2, 3, 5, 60, 1));
  require_pass(checks::derivation_law(2, 3, 4, 60, 1));
  CHECK(checks::annihilation_commute(2, 3, 4, 60, 1).pass);
  require_pass(checks::serialization(2, 3, 20, 1));
  require_pass(checks::series_ring(2, 2, 3, 10, 1));
  CHECK(checks::connes_product_bound(2, 2, 20, 1).pass);
  CHECK(checks::wick_exponential_taylor(2, 2, 5, 20, 1).pass);
  CHECK(checks::basis_gram(3, 1024).pass);
}
