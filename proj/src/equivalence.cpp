#include "fockstar/equivalence.hpp"

#include <cmath>
#include <stdexcept>

namespace fockstar {

namespace {

double growth_scale(int k, double exponent) {
  return std::pow(std::max(1.0, std::abs(static_cast<double>(k))), exponent);
}

Rational sigma_for(const SymplecticForm& form, int k) {
  const auto sign = form.pairing_sign();
  if (!sign) throw std::invalid_argument("form does not pair coordinates with their duals");
  return *sign * form.weight(k);
}

std::set<ModeIndex> series_modes(const HbarSeries& s) {
  std::set<ModeIndex> out;
  for (const auto& c : s.coefficients()) {
    auto m = c.modes();
    out.insert(m.begin(), m.end());
  }
  return out;
}

}  // namespace

DiagonalOperatorA::DiagonalOperatorA(std::map<int, Rational> alpha, double bound, double exponent,
                                     std::string name)
    : alpha_(std::move(alpha)), bound_(bound), exponent_(exponent), name_(std::move(name)) {
  if (!(exponent_ > 0.0)) throw std::invalid_argument("growth exponent must be positive");
  if (!(bound_ >= 0.0)) throw std::invalid_argument("growth bound must be non-negative");
  for (const auto& [k, a] : alpha_) {
    const double lhs = std::abs(a.get_d());
    if (lhs > bound_ * growth_scale(k, exponent_) * (1.0 + 1e-12)) {
      throw std::invalid_argument("alpha_" + std::to_string(k) + " violates the growth bound");
    }
  }
}

DiagonalOperatorA DiagonalOperatorA::from_table(std::map<int, Rational> alpha, double exponent) {
  double bound = 0.0;
  for (const auto& [k, a] : alpha) {
    bound = std::max(bound, std::abs(a.get_d()) / growth_scale(k, exponent));
  }
  return DiagonalOperatorA(std::move(alpha), bound, exponent, "table");
}

DiagonalOperatorA DiagonalOperatorA::named(std::string_view family, int K) {
  if (K < 0) throw std::invalid_argument("K must be non-negative");
  std::map<int, Rational> alpha;
  double bound = 1.0;
  double exponent = 2.0;
  for (int k = -K; k <= K; ++k) {
    if (family == "zero") {
      alpha[k] = 0;
      bound = 0.0;
    } else if (family == "one") {
      alpha[k] = 1;
      exponent = 1.0;
    } else if (family == "ksq") {
      alpha[k] = k * k;
    } else {
      throw std::invalid_argument("unknown alpha family '" + std::string(family) + "'");
    }
  }
  return DiagonalOperatorA(std::move(alpha), bound, exponent, std::string(family));
}

const Rational& DiagonalOperatorA::alpha(int k) const {
  auto it = alpha_.find(k);
  if (it == alpha_.end()) {
    throw std::out_of_range("alpha has no entry for frequency " + std::to_string(k));
  }
  return it->second;
}

DiagonalOperatorA DiagonalOperatorA::negated() const {
  std::map<int, Rational> alpha;
  for (const auto& [k, a] : alpha_) alpha[k] = -a;
  return DiagonalOperatorA(std::move(alpha), bound_, exponent_, "-" + name_);
}

FockVector apply_EA(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a) {
  Bivector<Rational> pi;
  for (const auto& m : union_modes(f, g)) {
    if (m.dual) continue;
    pi.add(m, m.twin(), a.alpha(m.freq));
    pi.add(m.twin(), m, a.alpha(m.freq));
  }
  return contraction_powers(f, g, pi, 1)[1];
}

Bivector<Rational> equivalence_bivector(const DiagonalOperatorA& a, const SymplecticForm& form,
                                        const std::set<ModeIndex>& modes) {
  Bivector<Rational> pi;
  std::set<ModeIndex> primal;
  for (const auto& m : modes) {
    if (m.coord < 1 || m.coord > form.d()) continue;
    primal.insert(m.dual ? m.twin() : m);
  }
  for (const auto& m : primal) {
    const Rational& al = a.alpha(m.freq);
    const Rational sigma = sigma_for(form, m.freq);
    pi.add(m, m.twin(), al + sigma);
    pi.add(m.twin(), m, al - sigma);
  }
  return pi;
}

FockVector cA1(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
               const SymplecticForm& form) {
  return poisson_bracket(f, g, form) + apply_EA(f, g, a);
}

FockVector cAr(int r, const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
               const SymplecticForm& form) {
  if (r < 0) throw std::invalid_argument("cAr: r must be non-negative");
  return contraction_powers(f, g, equivalence_bivector(a, form, union_modes(f, g)), r)
      [static_cast<std::size_t>(r)];
}

HbarSeries star_A(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
                  const SymplecticForm& form, int R, std::optional<int> cap) {
  if (R < 0) throw std::invalid_argument("star_A: R must be non-negative");
  return exponential_product(f, g, equivalence_bivector(a, form, union_modes(f, g)), R, cap);
}

HbarSeries star_A_series(const HbarSeries& fs, const HbarSeries& gs, const DiagonalOperatorA& a,
                         const SymplecticForm& form, std::optional<int> cap) {
  fs.require_same_order(gs);
  auto modes = series_modes(fs);
  auto more = series_modes(gs);
  modes.insert(more.begin(), more.end());
  return exponential_product(fs, gs, equivalence_bivector(a, form, modes), cap);
}

FockVector apply_T1(const FockVector& f, const DiagonalOperatorA& a) {
  FockVector out(std::max(f.max_degree() - 2, 0));
  for (const auto& [mu, c] : f.terms()) {
    for (const auto& e : mu.entries()) {
      if (e.mode.dual) continue;
      const int md = mu.multiplicity(e.mode.twin());
      if (md == 0) continue;
      const Rational& al = a.alpha(e.mode.freq);
      if (sgn(al) == 0) continue;
      out.add_term(mu.without_one(e.mode).without_one(e.mode.twin()),
                   -c * al * Rational(e.mult * md));
    }
  }
  return out;
}

HbarSeries apply_T(const HbarSeries& fs, const DiagonalOperatorA& a) {
  const int R = fs.order();
  HbarSeries out(R);
  for (int i = 0; i <= R; ++i) {
    FockVector power = fs[i];
    Rational factorial(1);
    for (int b = 0; i + b <= R; ++b) {
      if (b > 0) {
        if (power.is_zero()) break;
        power = apply_T1(power, a);
        factorial *= b;
      }
      out[i + b] += power * Rational(1 / factorial);
    }
  }
  return out;
}

Rational canonical_pairing(const ModeMap<Rational>& gamma, const ModeMap<Rational>& gamma_star,
                           const DiagonalOperatorA& a, const SymplecticForm& form, int side) {
  Rational total(0);
  for (const auto& [m, c] : gamma) {
    if (m.dual) throw std::invalid_argument("canonical_pairing: gamma must be primal");
    auto it = gamma_star.find(m.twin());
    if (it == gamma_star.end()) continue;
    total += (a.alpha(m.freq) + side * sigma_for(form, m.freq)) * c * it->second;
  }
  return total;
}

HbarSeries exp_product_formula_rhs(const ModeMap<Rational>& gamma1,
                                   const ModeMap<Rational>& gamma1_star,
                                   const ModeMap<Rational>& gamma2,
                                   const ModeMap<Rational>& gamma2_star,
                                   const DiagonalOperatorA& a, const SymplecticForm& form, int R,
                                   int N) {
  if (R < 0) throw std::invalid_argument("exp_product_formula_rhs: R must be non-negative");
  const Rational c = canonical_pairing(gamma1, gamma2_star, a, form, +1) +
                     canonical_pairing(gamma2, gamma1_star, a, form, -1);
  ModeMap<Rational> gamma = gamma1, gamma_star = gamma1_star;
  for (const auto& [m, v] : gamma2) gamma[m] += v;
  for (const auto& [m, v] : gamma2_star) gamma_star[m] += v;
  const FockVector phi = wick_exponential(gamma, gamma_star, N);
  HbarSeries out(R);
  Rational term(1);
  for (int r = 0; r <= R; ++r) {
    if (r > 0) term = term * c / r;
    out[r] = phi * term;
  }
  return out;
}

}  // namespace fockstar
