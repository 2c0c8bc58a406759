#pragma once

#include "fockstar/mode.hpp"
#include "fockstar/scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace fockstar {

/// Coefficients of an element h of H (or of H + H*) in the orthonormal mode basis.
template <class S>
using ModeMap = std::map<ModeIndex, S>;

/// Sparse element sum_mu c_mu e_mu of the truncated symmetric Fock space.
///
/// Monomials are symmetrized tensors of basis modes, labelled by a MultiIndex;
/// no zero coefficient is ever stored. `max_degree` is a declared cap: inserting
/// a monomial of larger degree is an error. Equality ignores the cap.
template <class S>
class BasicFockVector {
 public:
  using Scalar = S;
  using TermMap = std::map<MultiIndex, S>;

  BasicFockVector() = default;
  explicit BasicFockVector(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("max_degree must be non-negative");
  }

  static BasicFockVector vacuum(const S& c = S(1)) {
    BasicFockVector out(0);
    out.add_term(MultiIndex{}, c);
    return out;
  }
  static BasicFockVector monomial(const MultiIndex& mu, const S& c = S(1)) {
    BasicFockVector out(mu.degree());
    out.add_term(mu, c);
    return out;
  }

  int max_degree() const { return max_degree_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Largest degree actually present (0 for the zero vector).
  int degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

  S coefficient(const MultiIndex& mu) const {
    auto it = terms_.find(mu);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(const MultiIndex& mu, const S& c) {
    if (ScalarTraits<S>::is_zero(c)) return;
    if (mu.degree() > max_degree_) {
      throw std::invalid_argument("monomial degree " + std::to_string(mu.degree()) +
                                  " exceeds max_degree " + std::to_string(max_degree_));
    }
    auto [it, inserted] = terms_.try_emplace(mu, c);
    if (!inserted) {
      it->second += c;
      if (ScalarTraits<S>::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Drops all terms of degree > n and sets the cap to n.
  BasicFockVector truncated(int n) const {
    BasicFockVector out(n);
    for (const auto& [mu, c] : terms_) {
      if (mu.degree() <= n) out.terms_.emplace_hint(out.terms_.end(), mu, c);
    }
    return out;
  }

  BasicFockVector homogeneous_part(int n) const {
    BasicFockVector out(std::max(n, 0));
    for (const auto& [mu, c] : terms_) {
      if (mu.degree() == n) out.terms_.emplace_hint(out.terms_.end(), mu, c);
    }
    return out;
  }

  /// Raises the cap; never drops terms.
  BasicFockVector with_cap(int n) const {
    BasicFockVector out = *this;
    out.max_degree_ = std::max(out.max_degree_, n);
    return out;
  }

  std::set<ModeIndex> modes() const {
    std::set<ModeIndex> out;
    for (const auto& [mu, c] : terms_) {
      for (const auto& e : mu.entries()) out.insert(e.mode);
    }
    return out;
  }

  template <class T>
  BasicFockVector<T> cast() const {
    BasicFockVector<T> out(max_degree_);
    for (const auto& [mu, c] : terms_) {
      if constexpr (std::is_same_v<T, double>) {
        out.add_term(mu, ScalarTraits<S>::to_double(c));
      } else {
        out.add_term(mu, T(c));
      }
    }
    return out;
  }

  BasicFockVector& operator+=(const BasicFockVector& o) {
    max_degree_ = std::max(max_degree_, o.max_degree_);
    for (const auto& [mu, c] : o.terms_) add_term(mu, c);
    return *this;
  }
  BasicFockVector& operator-=(const BasicFockVector& o) {
    max_degree_ = std::max(max_degree_, o.max_degree_);
    for (const auto& [mu, c] : o.terms_) add_term(mu, S(-c));
    return *this;
  }
  BasicFockVector& operator*=(const S& s) {
    if (ScalarTraits<S>::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [mu, c] : terms_) c *= s;
    return *this;
  }

  friend BasicFockVector operator+(BasicFockVector a, const BasicFockVector& b) { return a += b; }
  friend BasicFockVector operator-(BasicFockVector a, const BasicFockVector& b) { return a -= b; }
  friend BasicFockVector operator-(BasicFockVector a) { return a *= S(-1); }
  friend BasicFockVector operator*(BasicFockVector a, const S& s) { return a *= s; }
  friend BasicFockVector operator*(const S& s, BasicFockVector a) { return a *= s; }

  friend bool operator==(const BasicFockVector& a, const BasicFockVector& b) {
    return a.terms_ == b.terms_;
  }

 private:
  TermMap terms_;
  int max_degree_ = 0;
};

using FockVector = BasicFockVector<Rational>;
using FockVectorF = BasicFockVector<double>;

/// Wick product: bilinear extension of e_mu . e_nu = e_{mu + nu}.
/// With `cap`, terms of degree > cap are skipped and the result is capped there.
template <class S>
BasicFockVector<S> wick_product(const BasicFockVector<S>& f, const BasicFockVector<S>& g,
                                std::optional<int> cap = std::nullopt) {
  const int out_cap = cap ? *cap : f.max_degree() + g.max_degree();
  BasicFockVector<S> out(out_cap);
  for (const auto& [mu, a] : f.terms()) {
    for (const auto& [nu, b] : g.terms()) {
      if (mu.degree() + nu.degree() > out_cap) continue;
      out.add_term(mu + nu, a * b);
    }
  }
  return out;
}

/// a_{e_mode} e_mu = mu(mode) e_{mu - mode}; lowers degree by one.
template <class S>
BasicFockVector<S> annihilate(const ModeIndex& mode, const BasicFockVector<S>& f) {
  BasicFockVector<S> out(std::max(f.max_degree() - 1, 0));
  for (const auto& [mu, c] : f.terms()) {
    const int m = mu.multiplicity(mode);
    if (m == 0) continue;
    out.add_term(mu.without_one(mode), c * S(m));
  }
  return out;
}

/// a_h F = sum_mode h(mode) a_{e_mode} F.
template <class S>
BasicFockVector<S> annihilate_general(const ModeMap<S>& h, const BasicFockVector<S>& f) {
  BasicFockVector<S> out(std::max(f.max_degree() - 1, 0));
  for (const auto& [mu, c] : f.terms()) {
    for (const auto& e : mu.entries()) {
      auto it = h.find(e.mode);
      if (it == h.end() || ScalarTraits<S>::is_zero(it->second)) continue;
      out.add_term(mu.without_one(e.mode), c * it->second * S(e.mult));
    }
  }
  return out;
}

/// Truncated Wick exponential sum_{n<=N} (gamma + gamma*)^{:n:} / n!.
/// `gamma` must be supported on primal modes and `gamma_star` on dual modes.
template <class S>
BasicFockVector<S> wick_exponential(const ModeMap<S>& gamma, const ModeMap<S>& gamma_star, int N) {
  if (N < 0) throw std::invalid_argument("wick_exponential: N must be non-negative");
  BasicFockVector<S> linear(1);
  for (const auto& [m, c] : gamma) {
    if (m.dual) throw std::invalid_argument("wick_exponential: gamma must be primal");
    linear.add_term(MultiIndex::of(m), c);
  }
  for (const auto& [m, c] : gamma_star) {
    if (!m.dual) throw std::invalid_argument("wick_exponential: gamma_star must be dual");
    linear.add_term(MultiIndex::of(m), c);
  }
  BasicFockVector<S> out = BasicFockVector<S>::vacuum().with_cap(N);
  BasicFockVector<S> power = BasicFockVector<S>::vacuum();
  for (int n = 1; n <= N; ++n) {
    power = wick_product(power, linear);
    power *= S(1) / S(n);
    out += power;
  }
  return out;
}

}  // namespace fockstar
