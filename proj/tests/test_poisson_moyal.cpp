#include "fockstar/poisson_moyal.hpp"
#include "fockstar/random_fock.hpp"
#include "fockstar/suites.hpp"

#include <doctest.h>

using namespace fockstar;

namespace {

FockVector mono(std::initializer_list<ModeIndex> modes, Rational c = 1) {
  return FockVector::monomial(MultiIndex(modes), c);
}

void require_pass(const std::vector<CheckRecord>& recs) {
  for (const auto& r : recs) {
    INFO(r.check_id << " residual=" << r.residual << " note=" << r.note);
    CHECK(r.pass);
  }
}

}  // namespace

TEST_CASE("form inversion") {
  const auto form = SymplecticForm::canonical(2, Rational(1));
  const auto& up = form.omega_upper();
  // omega_lower = [[0, I], [-I, 0]] inverts to [[0, -I], [I, 0]]
  CHECK(up[0][2] == -1);
  CHECK(up[2][0] == 1);
  CHECK(up[1][3] == -1);
  CHECK(up[0][1] == 0);
  CHECK(form.pairing_sign() == Rational(-1));
  CHECK(SymplecticForm::unit_pairing(2).pairing_sign() == Rational(1));
  CHECK(form.weight(3) == 10);

  const SymplecticForm::Matrix m{{2, 1}, {1, 1}};
  const auto inv = invert_rational(m);
  CHECK(inv == SymplecticForm::Matrix{{1, -1}, {-1, 2}});
  CHECK_THROWS_AS(invert_rational({{1, 2}, {2, 4}}), std::domain_error);

  CHECK_THROWS(SymplecticForm(1, {{0, 1}, {1, 0}}, Rational(1)));   // not antisymmetric
  CHECK_THROWS(SymplecticForm(1, {{0, 0}, {0, 0}}, Rational(1)));   // degenerate
  CHECK_THROWS(SymplecticForm::canonical(1, Rational(-1)));          // negative weight

  // a non-canonical but valid form has no twin pairing
  const SymplecticForm mixed(2, {{0, 1, 1, 0}, {-1, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}, Rational(0));
  CHECK_FALSE(mixed.pairing_sign().has_value());
}

TEST_CASE("bracket of degree-one elements") {
  const auto form = SymplecticForm::canonical(1, Rational(2));
  for (int k = -2; k <= 2; ++k) {
    const auto x = mono({primal(1, k)});
    const auto y = mono({dual(1, k)});
    CHECK(poisson_bracket(x, y, form) == FockVector::vacuum(Rational(-(2 * k * k + 1))));
    CHECK(poisson_bracket(y, x, form) == FockVector::vacuum(Rational(2 * k * k + 1)));
    CHECK(poisson_bracket(x, x, form).is_zero());
    CHECK(poisson_bracket(x, mono({dual(1, k + 1)}), form).is_zero());
  }
}

TEST_CASE("contraction powers against a hand computation") {
  // F = 3/2 x1^2 y_{-1} - 2 y1 x_{-1} + 1/3,  G = 5 y1^2 + 1/7 x_{-1} y_{-1}
  // with x = primal, y = dual, c = 1 so Pi^{x,y} = -2 and Pi^{y,x} = 2 at |k| = 1.
  const auto form = SymplecticForm::canonical(1, Rational(1));
  const auto f = mono({primal(1, 1), primal(1, 1), dual(1, -1)}, Rational(3, 2)) +
                 mono({dual(1, 1), primal(1, -1)}, Rational(-2)) + FockVector::vacuum(Rational(1, 3));
  const auto g = mono({dual(1, 1), dual(1, 1)}, Rational(5)) +
                 mono({primal(1, -1), dual(1, -1)}, Rational(1, 7));
  CHECK(poisson_power(2, f, g, form) == mono({dual(1, -1)}, Rational(120)));
  CHECK(poisson_power(3, f, g, form).is_zero());
  const auto p1 = poisson_power(1, f, g, form);
  CHECK(p1.coefficient(MultiIndex{primal(1, 1), dual(1, 1), dual(1, -1)}) == -60);
  // y_{-1} in F against x_{-1} in G: Pi^{y,x} = 2, times 3/2 * 1/7
  CHECK(p1.coefficient(MultiIndex{primal(1, 1), primal(1, 1), dual(1, -1)}) == Rational(3, 7));
  // x_{-1} in F against y_{-1} in G: -2 * -2 * 1/7
  CHECK(p1.coefficient(MultiIndex{dual(1, 1), primal(1, -1)}) == Rational(4, 7));
  CHECK(p1.size() == 3);

  const auto star = moyal_star(f, g, form, 3);
  CHECK(star[0] == wick_product(f, g));
  CHECK(star[1] == p1);
  CHECK(star[2] == mono({dual(1, -1)}, Rational(60)));
  CHECK(star[3].is_zero());
}

TEST_CASE("bracket axioms on random elements") {
  const auto form = SymplecticForm::canonical(2, Rational(1));
  RandomFock rf(17);
  const auto modes = Truncation{2, 1}.doubled_modes();
  for (int t = 0; t < 15; ++t) {
    const auto f = rf.vector(modes, 3, 3);
    const auto g = rf.vector(modes, 3, 3);
    const auto h = rf.vector(modes, 3, 3);
    CHECK((poisson_bracket(f, g, form) + poisson_bracket(g, f, form)).is_zero());
    CHECK(poisson_bracket(f, wick_product(g, h), form) ==
          wick_product(poisson_bracket(f, g, form), h) + wick_product(g, poisson_bracket(f, h, form)));
    const auto jac = poisson_bracket(f, poisson_bracket(g, h, form), form) +
                     poisson_bracket(g, poisson_bracket(h, f, form), form) +
                     poisson_bracket(h, poisson_bracket(f, g, form), form);
    CHECK(jac.is_zero());
    CHECK(poisson_bracket(f, FockVector::vacuum(Rational(4)), form).is_zero());
  }
}

TEST_CASE("star product unit and series mismatch") {
  const auto form = SymplecticForm::canonical(1, Rational(1));
  const auto f = mono({primal(1, 0), dual(1, 0)}, Rational(2));
  const auto s = moyal_star(FockVector::vacuum(), f, form, 2);
  CHECK(s[0] == f);
  CHECK(s[1].is_zero());
  CHECK_THROWS_AS(star_series(HbarSeries(1), HbarSeries(2), form), std::invalid_argument);
  CHECK_THROWS_AS(poisson_power(-1, f, f, form), std::invalid_argument);
}

TEST_CASE("poisson and moyal checks pass") {
  const auto form = SymplecticForm::canonical(2, Rational(1));
  require_pass(checks::poisson_axioms(form, 2, 30, 1));
  CHECK(checks::bracket_degree_one(form, 3).pass);
  CHECK(checks::bracket_chaos_compatibility(form, 2, 20, 1).pass);
  CHECK(checks::bracket_boundedness(form, 2, 20, 1).pass);
  require_pass(checks::star_axioms(form, 2, 3, 15, 1));
  require_pass(checks::star_series_checks(form, 2, 2, 8, 1));
}
