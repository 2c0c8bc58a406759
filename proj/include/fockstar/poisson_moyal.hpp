#pragma once

#include "fockstar/fock_vector.hpp"
#include "fockstar/hbar_series.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace fockstar {

/// Constant symplectic structure on R^d + R^d (primal/dual blocks), extended
/// to the loop modes with the frequency weight (c k^2 + 1).
///
/// Doubled indices are 0..d-1 for primal coordinates and d..2d-1 for dual ones.
/// omega_upper is computed from omega_lower by exact inversion.
class SymplecticForm {
 public:
  using Matrix = std::vector<std::vector<Rational>>;

  /// Validates antisymmetry and nondegeneracy. weight_c must be >= 0.
  SymplecticForm(int d, Matrix omega_lower, Rational weight_c);

  /// omega_{i i*} = 1, omega_{i* i} = -1, all other entries zero.
  static SymplecticForm canonical(int d, const Rational& weight_c = Rational(1));
  /// Opposite orientation (omega_{i i*} = -1) with unit frequency weights, so
  /// omega^{i i*} = +1 and the bracket is sum_{i,k} (dF/dx_ik dG/dx*_ik - dG/dx_ik dF/dx*_ik).
  static SymplecticForm unit_pairing(int d);

  int d() const { return d_; }
  const Matrix& omega_lower() const { return lower_; }
  const Matrix& omega_upper() const { return upper_; }
  const Rational& weight_c() const { return weight_c_; }
  Rational weight(int k) const { return weight_c_ * k * k + 1; }

  /// Doubled index of a mode's coordinate.
  int doubled_index(const ModeIndex& m) const { return m.coord - 1 + (m.dual ? d_ : 0); }
  ModeIndex mode_of(int doubled, int freq) const {
    return {doubled % d_ + 1, freq, doubled >= d_};
  }

  /// sigma if omega^{i i*} = sigma and omega^{i* i} = -sigma for every i with no
  /// other nonzero entries; nullopt for any other structure.
  std::optional<Rational> pairing_sign() const;

 private:
  int d_;
  Matrix lower_;
  Matrix upper_;
  Rational weight_c_;
};

/// Exact inverse of a square rational matrix. Throws std::domain_error if singular.
SymplecticForm::Matrix invert_rational(SymplecticForm::Matrix m);

/// Constant bivector Pi^{ab} over a finite set of modes, stored by rows.
template <class S>
struct Bivector {
  std::map<ModeIndex, std::vector<std::pair<ModeIndex, S>>> rows;

  void add(const ModeIndex& a, const ModeIndex& b, const S& c) {
    if (!ScalarTraits<S>::is_zero(c)) rows[a].emplace_back(b, c);
  }
};

/// Pi^{ab} = (c k^2 + 1) omega^{ij} for modes a = (i, k), b = (j, k) of the doubled space,
/// restricted to rows in `modes`.
template <class S = Rational>
Bivector<S> moyal_bivector(const SymplecticForm& form, const std::set<ModeIndex>& modes,
                           std::optional<S> weight_c = std::nullopt) {
  Bivector<S> pi;
  const int n = 2 * form.d();
  for (const auto& a : modes) {
    if (a.coord < 1 || a.coord > form.d()) continue;
    const int x = form.doubled_index(a);
    S w;
    if constexpr (std::is_same_v<S, double>) {
      const double c = weight_c ? *weight_c : form.weight_c().get_d();
      w = c * a.freq * a.freq + 1.0;
    } else {
      w = weight_c ? S(*weight_c * a.freq * a.freq + 1) : S(form.weight(a.freq));
    }
    for (int y = 0; y < n; ++y) {
      const Rational& o = form.omega_upper()[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (sgn(o) == 0) continue;
      S coeff;
      if constexpr (std::is_same_v<S, double>) {
        coeff = w * o.get_d();
      } else {
        coeff = w * S(o);
      }
      pi.add(a, form.mode_of(y, a.freq), coeff);
    }
  }
  return pi;
}

template <class S>
std::set<ModeIndex> union_modes(const BasicFockVector<S>& f, const BasicFockVector<S>& g) {
  auto m = f.modes();
  auto n = g.modes();
  m.insert(n.begin(), n.end());
  return m;
}

/// [m o Pi^r (F (x) G)] for r = 0..max_order, where Pi acts on F (x) G as
/// sum_{a,b} Pi^{ab} d_a (x) d_b and m is the Wick product. With `cap`, only output
/// degrees <= cap are produced.
template <class S>
std::vector<BasicFockVector<S>> contraction_powers(const BasicFockVector<S>& f,
                                                   const BasicFockVector<S>& g,
                                                   const Bivector<S>& pi, int max_order,
                                                   std::optional<int> cap = std::nullopt) {
  const int full_cap = f.max_degree() + g.max_degree();
  std::vector<BasicFockVector<S>> out;
  for (int r = 0; r <= max_order; ++r) {
    const int c = std::max(full_cap - 2 * r, 0);
    out.emplace_back(cap ? std::min(*cap, c) : c);
  }
  using Pair = std::pair<MultiIndex, MultiIndex>;
  std::map<Pair, S> level, next;
  for (const auto& [mu, a] : f.terms()) {
    for (const auto& [nu, b] : g.terms()) {
      const int deg = mu.degree() + nu.degree();
      if (cap && deg - 2 * std::min({max_order, mu.degree(), nu.degree()}) > *cap) continue;
      level.clear();
      level.emplace(Pair{mu, nu}, S(1));
      const S coeff = a * b;
      for (int r = 0; r <= max_order && !level.empty(); ++r) {
        if (!cap || deg - 2 * r <= *cap) {
          for (const auto& [pq, w] : level) out[static_cast<std::size_t>(r)].add_term(pq.first + pq.second, coeff * w);
        }
        if (r == max_order) break;
        next.clear();
        for (const auto& [pq, w] : level) {
          const auto& [p, q] = pq;
          for (const auto& e : p.entries()) {
            auto row = pi.rows.find(e.mode);
            if (row == pi.rows.end()) continue;
            MultiIndex p_minus;
            bool have_p_minus = false;
            for (const auto& [bmode, pcoef] : row->second) {
              const int mq = q.multiplicity(bmode);
              if (mq == 0) continue;
              if (!have_p_minus) {
                p_minus = p.without_one(e.mode);
                have_p_minus = true;
              }
              S v = w * pcoef;
              v *= S(e.mult * mq);
              auto [it, inserted] = next.try_emplace(Pair{p_minus, q.without_one(bmode)}, v);
              if (!inserted) {
                it->second += v;
              }
            }
          }
        }
        level.swap(next);
        for (auto it = level.begin(); it != level.end();) {
          it = ScalarTraits<S>::is_zero(it->second) ? level.erase(it) : std::next(it);
        }
      }
    }
  }
  return out;
}

/// {F, G} = sum (c k^2 + 1) omega^{ij} :a_{(i,k)} F . a_{(j,k)} G:.
template <class S>
BasicFockVector<S> poisson_bracket(const BasicFockVector<S>& f, const BasicFockVector<S>& g,
                                   const SymplecticForm& form) {
  return contraction_powers(f, g, moyal_bivector<S>(form, union_modes(f, g)), 1)[1];
}

/// P^r(F, G): r-fold weighted symplectic contraction; P^0 is the Wick product.
template <class S>
BasicFockVector<S> poisson_power(int r, const BasicFockVector<S>& f, const BasicFockVector<S>& g,
                                 const SymplecticForm& form) {
  if (r < 0) throw std::invalid_argument("poisson_power: r must be non-negative");
  return contraction_powers(f, g, moyal_bivector<S>(form, union_modes(f, g)), r)
      [static_cast<std::size_t>(r)];
}

/// Coefficients of exp(hbar Pi) applied to F (x) G: C_r = [Pi^r](F, G) / r!.
template <class S>
BasicHbarSeries<S> exponential_product(const BasicFockVector<S>& f, const BasicFockVector<S>& g,
                                       const Bivector<S>& pi, int R,
                                       std::optional<int> cap = std::nullopt) {
  auto powers = contraction_powers(f, g, pi, R, cap);
  S factorial(1);
  for (int r = 1; r <= R; ++r) {
    factorial *= S(r);
    powers[static_cast<std::size_t>(r)] *= S(1) / factorial;
  }
  return BasicHbarSeries<S>(std::move(powers));
}

/// Series-level product (FS * GS)_r = sum_{a+b+c=r} [Pi^c](FS_a, GS_b) / c!.
template <class S>
BasicHbarSeries<S> exponential_product(const BasicHbarSeries<S>& fs, const BasicHbarSeries<S>& gs,
                                       const Bivector<S>& pi, std::optional<int> cap = std::nullopt) {
  fs.require_same_order(gs);
  const int R = fs.order();
  BasicHbarSeries<S> out(R);
  for (int a = 0; a <= R; ++a) {
    if (fs[a].is_zero()) continue;
    for (int b = 0; a + b <= R; ++b) {
      if (gs[b].is_zero()) continue;
      auto part = exponential_product(fs[a], gs[b], pi, R - a - b, cap);
      for (int c = 0; a + b + c <= R; ++c) out[a + b + c] += part[c];
    }
  }
  return out;
}

/// Moyal star-product F * G = :F.G: + sum_{r=1}^{R} hbar^r / r! P^r(F, G).
BasicHbarSeries<Rational> moyal_star(const FockVector& f, const FockVector& g,
                                     const SymplecticForm& form, int R,
                                     std::optional<int> cap = std::nullopt);

/// hbar-bilinear extension of moyal_star to series of equal order.
BasicHbarSeries<Rational> star_series(const HbarSeries& fs, const HbarSeries& gs,
                                      const SymplecticForm& form,
                                      std::optional<int> cap = std::nullopt);

}  // namespace fockstar
