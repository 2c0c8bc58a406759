#include "fockstar/basis.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fockstar {

BasisFunction::BasisFunction(const ModeIndex& m)
    : mode(m), cosine(m.freq >= 0), angular(kTwoPi * std::abs(m.freq)) {
  normalization = m.freq == 0 ? 1.0 : std::sqrt(2.0 / (1.0 + angular * angular));
}

double BasisFunction::derivative(int order, double s) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  if (mode.freq == 0) return order == 0 ? 1.0 : 0.0;
  // d/ds cos = -w sin, d/ds sin = w cos: the phase advances by a quarter turn per order.
  const double phase = angular * s + (cosine ? 0.0 : -0.5 * std::numbers::pi);
  const int q = order % 4;
  double v = 0.0;
  switch (q) {
    case 0: v = std::cos(phase); break;
    case 1: v = -std::sin(phase); break;
    case 2: v = -std::cos(phase); break;
    default: v = std::sin(phase); break;
  }
  return normalization * std::pow(angular, order) * v;
}

double BasisFunction::sup_bound(int order) const {
  if (mode.freq == 0) return order == 0 ? 1.0 : 0.0;
  return normalization * std::pow(angular, order);
}

std::vector<double> mode_eval(const ModeIndex& mode, double s, int d) {
  if (mode.coord < 1 || mode.coord > d) throw std::out_of_range("mode coordinate outside 1..d");
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  out[static_cast<std::size_t>(mode.coord - 1)] = BasisFunction(mode).value(s);
  return out;
}

double h_inner_product(const ModeIndex& a, const ModeIndex& b, int n) {
  if (a.coord != b.coord) return 0.0;
  BasisFunction fa(a), fb(b);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = static_cast<double>(j) / n;
    sum += fa.value(s) * fb.value(s) + fa.derivative(1, s) * fb.derivative(1, s);
  }
  return sum / n;
}

double monomial_norm_bound(const MultiIndex& mu, int k) {
  if (k < 0) throw std::invalid_argument("connes norm order must be non-negative");
  std::vector<BasisFunction> slots;
  for (const auto& e : mu.entries()) {
    for (int r = 0; r < e.mult; ++r) slots.emplace_back(e.mode);
  }
  const std::size_t n = slots.size();
  if (n == 0) return 1.0;
  if (n > 20) throw std::invalid_argument("monomial degree too large for the norm estimator");
  const std::uint32_t full = (1u << n) - 1;

  // Block weight: sum over the block's common derivative order m in 0..k.
  std::vector<double> weight(full + 1, 0.0);
  for (std::uint32_t block = 1; block <= full; ++block) {
    double w = 0.0;
    for (int m = 0; m <= k; ++m) {
      double p = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (block & (1u << j)) p *= slots[j].sup_bound(m);
      }
      w += p;
    }
    weight[block] = w;
  }
  // Ordered set partitions: f(S) = sum over non-empty T subset of S of w(T) f(S \ T).
  std::vector<double> f(full + 1, 0.0);
  f[0] = 1.0;
  for (std::uint32_t set = 1; set <= full; ++set) {
    double acc = 0.0;
    for (std::uint32_t t = set; t != 0; t = (t - 1) & set) acc += weight[t] * f[set & ~t];
    f[set] = acc;
  }
  return f[full];
}

namespace {
template <class S>
double connes_impl(const BasicFockVector<S>& f, int k, double C) {
  if (C <= 0) throw std::invalid_argument("connes norm weight C must be positive");
  double total = 0.0;
  for (const auto& [mu, c] : f.terms()) {
    total += std::abs(ScalarTraits<S>::to_double(c)) * std::pow(C, mu.degree()) *
             monomial_norm_bound(mu, k);
  }
  return total;
}
}  // namespace

double connes_norm_upper(const FockVectorF& f, int k, double C) { return connes_impl(f, k, C); }
double connes_norm_upper(const FockVector& f, int k, double C) { return connes_impl(f, k, C); }

}  // namespace fockstar
