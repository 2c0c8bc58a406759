#pragma once

#include "fockstar/fock_vector.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace fockstar {

/// Truncated formal series sum_{r=0}^{R} hbar^r F_r with Fock-vector coefficients.
template <class S>
class BasicHbarSeries {
 public:
  using Vector = BasicFockVector<S>;

  explicit BasicHbarSeries(int R = 0) : coeffs_(static_cast<std::size_t>(check_order(R)) + 1) {}
  explicit BasicHbarSeries(std::vector<Vector> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("hbar series needs at least one coefficient");
  }

  /// F concentrated at order 0.
  static BasicHbarSeries constant(const Vector& f, int R) {
    BasicHbarSeries out(R);
    out.coeffs_[0] = f;
    return out;
  }
  static BasicHbarSeries unit(int R) { return constant(Vector::vacuum(), R); }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Vector& operator[](int r) const { return coeffs_.at(static_cast<std::size_t>(r)); }
  Vector& operator[](int r) { return coeffs_.at(static_cast<std::size_t>(r)); }
  const std::vector<Vector>& coefficients() const { return coeffs_; }

  /// Every coefficient truncated to degree <= n.
  BasicHbarSeries truncated_degree(int n) const {
    BasicHbarSeries out = *this;
    for (auto& c : out.coeffs_) c = c.truncated(n);
    return out;
  }

  BasicHbarSeries& operator+=(const BasicHbarSeries& o) {
    require_same_order(o);
    for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += o.coeffs_[r];
    return *this;
  }
  BasicHbarSeries& operator-=(const BasicHbarSeries& o) {
    require_same_order(o);
    for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] -= o.coeffs_[r];
    return *this;
  }
  BasicHbarSeries& operator*=(const S& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend BasicHbarSeries operator+(BasicHbarSeries a, const BasicHbarSeries& b) { return a += b; }
  friend BasicHbarSeries operator-(BasicHbarSeries a, const BasicHbarSeries& b) { return a -= b; }
  friend BasicHbarSeries operator*(BasicHbarSeries a, const S& s) { return a *= s; }

  friend bool operator==(const BasicHbarSeries& a, const BasicHbarSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

  void require_same_order(const BasicHbarSeries& o) const {
    if (o.order() != order()) {
      throw std::invalid_argument("hbar series order mismatch: " + std::to_string(order()) +
                                  " vs " + std::to_string(o.order()));
    }
  }

 private:
  static int check_order(int R) {
    if (R < 0) throw std::invalid_argument("hbar order must be non-negative");
    return R;
  }
  std::vector<Vector> coeffs_;
};

using HbarSeries = BasicHbarSeries<Rational>;

/// Cauchy product with the Wick product on coefficients, truncated at order R.
template <class S>
BasicHbarSeries<S> series_wick_product(const BasicHbarSeries<S>& a, const BasicHbarSeries<S>& b,
                                       std::optional<int> cap = std::nullopt) {
  a.require_same_order(b);
  BasicHbarSeries<S> out(a.order());
  for (int i = 0; i <= a.order(); ++i) {
    for (int j = 0; i + j <= a.order(); ++j) out[i + j] += wick_product(a[i], b[j], cap);
  }
  return out;
}

}  // namespace fockstar
