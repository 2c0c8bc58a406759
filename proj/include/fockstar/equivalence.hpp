#pragma once

#include "fockstar/poisson_moyal.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace fockstar {

/// Diagonal operator A e_{i,k} = alpha_k e_{i,k} (same alpha_k for every coordinate),
/// defined on the retained frequencies, with a polynomial growth witness
/// |alpha_k| <= bound * max(1, |k|)^exponent.
class DiagonalOperatorA {
 public:
  /// Throws std::invalid_argument if the witness fails or exponent <= 0.
  DiagonalOperatorA(std::map<int, Rational> alpha, double bound, double exponent,
                    std::string name = "table");

  /// Tightest bound for the given exponent.
  static DiagonalOperatorA from_table(std::map<int, Rational> alpha, double exponent = 2.0);
  /// "zero" (alpha = 0), "one" (alpha = 1) or "ksq" (alpha = k^2) on |k| <= K.
  static DiagonalOperatorA named(std::string_view family, int K);

  const Rational& alpha(int k) const;
  const std::map<int, Rational>& table() const { return alpha_; }
  double growth_bound() const { return bound_; }
  double growth_exponent() const { return exponent_; }
  const std::string& name() const { return name_; }

  DiagonalOperatorA negated() const;

 private:
  std::map<int, Rational> alpha_;
  double bound_;
  double exponent_;
  std::string name_;
};

/// E_A(F, G) = sum_{i,k} alpha_k [a_{(i,k)} F . a_{(i,k)*} G + a_{(i,k)} G . a_{(i,k)*} F].
FockVector apply_EA(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a);

/// Bivector of C^A_1 for a form whose inverse pairs each coordinate with its dual
/// twin (see SymplecticForm::pairing_sign): with sigma_k = sigma (c k^2 + 1),
///   Pi^{(i,k),(i,k)*} = alpha_k + sigma_k,   Pi^{(i,k)*,(i,k)} = alpha_k - sigma_k.
Bivector<Rational> equivalence_bivector(const DiagonalOperatorA& a, const SymplecticForm& form,
                                        const std::set<ModeIndex>& modes);

/// C^A_1 = {F, G} + E_A(F, G).
FockVector cA1(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
               const SymplecticForm& form);
/// C^A_r = (C^A_1)^r as a bidifferential operator; C^A_0 is the Wick product.
FockVector cAr(int r, const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
               const SymplecticForm& form);

/// F *^A G = :F.G: + sum_{r=1}^{R} hbar^r / r! C^A_r(F, G).
HbarSeries star_A(const FockVector& f, const FockVector& g, const DiagonalOperatorA& a,
                  const SymplecticForm& form, int R, std::optional<int> cap = std::nullopt);

/// hbar-bilinear extension of star_A.
HbarSeries star_A_series(const HbarSeries& fs, const HbarSeries& gs, const DiagonalOperatorA& a,
                         const SymplecticForm& form, std::optional<int> cap = std::nullopt);

/// T_1 F = -sum_{i,k} alpha_k a_{(i,k)} a_{(i,k)*} F; lowers degree by two.
FockVector apply_T1(const FockVector& f, const DiagonalOperatorA& a);

/// T = exp(hbar T_1) on a truncated series: (T FS)_r = sum_{a+b=r} T_1^b(FS_a) / b!.
HbarSeries apply_T(const HbarSeries& fs, const DiagonalOperatorA& a);

/// <(A + side S) g, g*>_c = sum_{(i,k)} (alpha_k + side sigma_k) g(i,k) g*((i,k)*),
/// side = +1 or -1.
Rational canonical_pairing(const ModeMap<Rational>& gamma, const ModeMap<Rational>& gamma_star,
                           const DiagonalOperatorA& a, const SymplecticForm& form, int side);

/// Right-hand side of the product formula for Wick exponentials:
///   exp[hbar (<(A + S) g1, g2*>_c + <(A - S) g2, g1*>_c)] Phi_{g1 + g2, g1* + g2*},
/// with S = diag(sigma_k) from the form (S = I for SymplecticForm::unit_pairing),
/// the scalar exponential truncated at order R and Phi at degree N.
HbarSeries exp_product_formula_rhs(const ModeMap<Rational>& gamma1,
                                   const ModeMap<Rational>& gamma1_star,
                                   const ModeMap<Rational>& gamma2,
                                   const ModeMap<Rational>& gamma2_star,
                                   const DiagonalOperatorA& a, const SymplecticForm& form, int R,
                                   int N);

}  // namespace fockstar
