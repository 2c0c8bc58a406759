#pragma once

#include "fockstar/fock_vector.hpp"

#include <random>
#include <vector>

namespace fockstar {

/// Random test elements with small rational coefficients. Deterministic for a
/// given engine state.
class RandomFock {
 public:
  explicit RandomFock(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// p/q with |p| <= 9, 1 <= q <= 5, never zero.
  Rational coefficient() {
    int p = 0;
    while (p == 0) p = uniform_int(-9, 9);
    Rational r(p, uniform_int(1, 5));
    r.canonicalize();
    return r;
  }

  MultiIndex multi_index(const std::vector<ModeIndex>& pool, int degree) {
    std::vector<MultiIndex::Entry> entries;
    for (int j = 0; j < degree; ++j) {
      entries.push_back({pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))], 1});
    }
    return MultiIndex::from_entries(std::move(entries));
  }

  /// Up to `n_terms` monomials of degree in [0, max_degree] over `pool`.
  FockVector vector(const std::vector<ModeIndex>& pool, int max_degree, int n_terms) {
    FockVector out(max_degree);
    for (int t = 0; t < n_terms; ++t) {
      out.add_term(multi_index(pool, uniform_int(0, max_degree)), coefficient());
    }
    return out;
  }

  /// Nonzero coefficients on a random subset of `pool` of size <= max_support.
  ModeMap<Rational> mode_map(const std::vector<ModeIndex>& pool, int max_support) {
    ModeMap<Rational> out;
    const int n = uniform_int(1, max_support);
    for (int j = 0; j < n; ++j) {
      out[pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))]] =
          coefficient();
    }
    return out;
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fockstar
