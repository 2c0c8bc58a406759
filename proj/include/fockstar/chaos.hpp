#pragma once

#include "fockstar/fock_vector.hpp"
#include "fockstar/gaussian_loop.hpp"

#include <cstdint>
#include <map>

namespace fockstar {

enum class ChaosMethod { spectral, quadrature };

struct ChaosEvalConfig {
  int n_grid = 4096;
  ChaosMethod method = ChaosMethod::spectral;
  double fd_epsilon = 1e-3;

  void validate() const;
};

/// Pairing of one basis mode with the loop, (1 + 4 pi^2 k^2) int e(s) B_i(s) ds,
/// by the composite trapezoid rule on cfg.n_grid points.
double stratonovich_pairing(const ModeIndex& mode, const LoopSample& sample,
                            const ChaosEvalConfig& cfg);

/// Chaos of F as a polynomial in the spectral coefficients:
/// sum_mu c_mu prod_mode xi(mode)^{mu(mode)}. Modes absent from `xi` count as 0.
/// The value type is generic so the evaluator can run on dual numbers.
template <class T, class S>
T chaos_eval_spectral(const BasicFockVector<S>& f, const std::map<ModeIndex, T>& xi) {
  T total(0);
  for (const auto& [mu, c] : f.terms()) {
    T term(ScalarTraits<S>::to_double(c));
    for (const auto& e : mu.entries()) {
      auto it = xi.find(e.mode);
      if (it == xi.end()) {
        term = T(0);
        break;
      }
      for (int r = 0; r < e.mult; ++r) term = term * it->second;
    }
    total = total + term;
  }
  return total;
}

/// Chaos of F evaluated by quadrature: every tensor slot of a monomial contributes
/// int (e(s) - e''(s)) . B(s) ds on cfg.n_grid trapezoid points. F must be
/// supported on primal modes within the sample's coordinates.
template <class S>
double chaos_eval_quadrature(const BasicFockVector<S>& f, const LoopSample& sample,
                             const ChaosEvalConfig& cfg);

extern template double chaos_eval_quadrature(const FockVector&, const LoopSample&,
                                             const ChaosEvalConfig&);
extern template double chaos_eval_quadrature(const FockVectorF&, const LoopSample&,
                                             const ChaosEvalConfig&);

/// The slot integral int (e - e'') . B ds used by chaos_eval_quadrature.
double slot_integral(const ModeIndex& mode, const LoopSample& sample, int n_grid);

/// Central difference [I(xi + eps h) - I(xi - eps h)] / (2 eps) of the spectral chaos.
template <class S>
double gateaux_derivative_fd(const BasicFockVector<S>& f, const ModeMap<double>& xi,
                             const ModeMap<double>& h, double eps) {
  ModeMap<double> plus = xi, minus = xi;
  for (const auto& [m, v] : h) {
    plus[m] += eps * v;
    minus[m] -= eps * v;
  }
  return (chaos_eval_spectral(f, plus) - chaos_eval_spectral(f, minus)) / (2.0 * eps);
}

/// Random-point identity test: true iff the spectral chaos vanishes at
/// 5 * (number of monomials) independent Gaussian points (at least 5).
bool chaos_vanishes(const FockVector& f, std::uint64_t seed);

}  // namespace fockstar
