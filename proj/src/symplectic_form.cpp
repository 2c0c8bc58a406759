#include "fockstar/poisson_moyal.hpp"

#include <stdexcept>

namespace fockstar {

SymplecticForm::Matrix invert_rational(SymplecticForm::Matrix m) {
  const std::size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("matrix is not square");
  }
  SymplecticForm::Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(m[pivot][col]) == 0) ++pivot;
    if (pivot == n) throw std::domain_error("matrix is singular");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational scale = 1 / m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] *= scale;
      inv[col][j] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(m[r][col]) == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

SymplecticForm::SymplecticForm(int d, Matrix omega_lower, Rational weight_c)
    : d_(d), lower_(std::move(omega_lower)), weight_c_(std::move(weight_c)) {
  if (d < 1) throw std::invalid_argument("symplectic form needs d >= 1");
  if (sgn(weight_c_) < 0) throw std::invalid_argument("weight_c must be non-negative");
  const std::size_t n = static_cast<std::size_t>(2 * d);
  if (lower_.size() != n) throw std::invalid_argument("omega must be 2d x 2d");
  for (std::size_t i = 0; i < n; ++i) {
    if (lower_[i].size() != n) throw std::invalid_argument("omega must be 2d x 2d");
    for (std::size_t j = 0; j < n; ++j) {
      if (lower_[i][j] != -lower_[j][i]) throw std::invalid_argument("omega is not antisymmetric");
    }
  }
  try {
    upper_ = invert_rational(lower_);
  } catch (const std::domain_error&) {
    throw std::invalid_argument("omega is degenerate");
  }
}

SymplecticForm SymplecticForm::canonical(int d, const Rational& weight_c) {
  const std::size_t n = static_cast<std::size_t>(2 * d);
  Matrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
    m[i][i + static_cast<std::size_t>(d)] = 1;
    m[i + static_cast<std::size_t>(d)][i] = -1;
  }
  return SymplecticForm(d, std::move(m), weight_c);
}

SymplecticForm SymplecticForm::unit_pairing(int d) {
  const std::size_t n = static_cast<std::size_t>(2 * d);
  Matrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) {
    m[i][i + static_cast<std::size_t>(d)] = -1;
    m[i + static_cast<std::size_t>(d)][i] = 1;
  }
  return SymplecticForm(d, std::move(m), Rational(0));
}

std::optional<Rational> SymplecticForm::pairing_sign() const {
  const std::size_t n = static_cast<std::size_t>(2 * d_);
  const std::size_t half = static_cast<std::size_t>(d_);
  const Rational sigma = upper_[0][half];
  if (sgn(sigma) == 0) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Rational expected = 0;
      if (i < half && j == i + half) expected = sigma;
      if (i >= half && j == i - half) expected = -sigma;
      if (upper_[i][j] != expected) return std::nullopt;
    }
  }
  return sigma;
}

BasicHbarSeries<Rational> moyal_star(const FockVector& f, const FockVector& g,
                                     const SymplecticForm& form, int R, std::optional<int> cap) {
  if (R < 0) throw std::invalid_argument("moyal_star: R must be non-negative");
  return exponential_product(f, g, moyal_bivector<Rational>(form, union_modes(f, g)), R, cap);
}

BasicHbarSeries<Rational> star_series(const HbarSeries& fs, const HbarSeries& gs,
                                      const SymplecticForm& form, std::optional<int> cap) {
  fs.require_same_order(gs);
  std::set<ModeIndex> modes;
  for (const auto& c : fs.coefficients()) {
    auto m = c.modes();
    modes.insert(m.begin(), m.end());
  }
  for (const auto& c : gs.coefficients()) {
    auto m = c.modes();
    modes.insert(m.begin(), m.end());
  }
  return exponential_product(fs, gs, moyal_bivector<Rational>(form, modes), cap);
}

}  // namespace fockstar
