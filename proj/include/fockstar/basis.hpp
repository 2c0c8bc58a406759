#pragma once

#include "fockstar/fock_vector.hpp"
#include "fockstar/mode.hpp"

#include <numbers>
#include <vector>

namespace fockstar {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// H-orthonormal Fourier basis function of the loop space, with norm
/// ||g||^2 = int |g|^2 + int |g'|^2. Frequency k >= 0 uses cos(2 pi k s),
/// k < 0 uses sin(2 pi |k| s); both scaled to unit H-norm.
struct BasisFunction {
  ModeIndex mode;
  double normalization = 1.0;  // sqrt(2 / (1 + 4 pi^2 k^2)), or 1 for k = 0
  bool cosine = true;
  double angular = 0.0;  // 2 pi |k|

  explicit BasisFunction(const ModeIndex& m);

  double value(double s) const { return derivative(0, s); }
  /// m-th derivative in s.
  double derivative(int order, double s) const;
  /// sup_s |d^order/ds^order e(s)|.
  double sup_bound(int order) const;
  /// Eigenvalue factor of (1 - d^2/ds^2): 1 + 4 pi^2 k^2.
  double stiffness() const { return 1.0 + angular * angular; }
};

/// e_mode(s) as a d-vector (zero outside the mode's coordinate). Dual modes
/// evaluate like their primal twins.
std::vector<double> mode_eval(const ModeIndex& mode, double s, int d);

/// H inner product of two coordinate-1 basis functions by trapezoid quadrature
/// on n uniform points (exact up to rounding for |k| < n/2).
double h_inner_product(const ModeIndex& a, const ModeIndex& b, int n);

/// Upper bound of the weighted norm ||F||_{k,C} = sum_n C^n ||F^n||_k.
///
/// For each monomial the sum over partitions of its slots into blocks, each block
/// differentiated to a common order m <= k in every slot, is bounded factor-wise
/// by the closed-form sup-norms of the basis derivatives. Ordered partitions are
/// summed, which dominates the unordered reading as well.
double connes_norm_upper(const FockVectorF& f, int k, double C);
double connes_norm_upper(const FockVector& f, int k, double C);

/// Per-monomial bound ||e_mu||_k used above (1 for the vacuum).
double monomial_norm_bound(const MultiIndex& mu, int k);

}  // namespace fockstar
