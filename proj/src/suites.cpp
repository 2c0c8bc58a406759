#include "fockstar/suites.hpp"

#include "fockstar/basis.hpp"
#include "fockstar/chaos.hpp"
#include "fockstar/random_fock.hpp"
#include "fockstar/serialize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>

namespace fockstar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  // splitmix64 over the seed and an FNV-1a hash of the tag
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : tag) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
  std::uint64_t z = seed + h + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

std::size_t diff_count(const FockVector& a, const FockVector& b) { return (a - b).size(); }

std::size_t diff_count(const HbarSeries& a, const HbarSeries& b) {
  if (a.order() != b.order()) return std::numeric_limits<std::size_t>::max();
  std::size_t n = 0;
  for (int r = 0; r <= a.order(); ++r) n += diff_count(a[r], b[r]);
  return n;
}

/// Random (coord, freq) cells of the truncation, each contributing its primal
/// mode and (optionally) its dual twin. Small pools keep contractions frequent.
std::vector<ModeIndex> cell_pool(RandomFock& rf, int d, int K, int n_cells, bool with_dual) {
  std::set<ModeIndex> cells;
  const int total = d * (2 * K + 1);
  n_cells = std::min(n_cells, total);
  while (static_cast<int>(cells.size()) < n_cells) {
    cells.insert(primal(rf.uniform_int(1, d), rf.uniform_int(-K, K)));
  }
  std::vector<ModeIndex> out;
  for (const auto& m : cells) {
    out.push_back(m);
    if (with_dual) out.push_back(m.twin());
  }
  return out;
}

std::vector<ModeIndex> only(const std::vector<ModeIndex>& pool, bool dual) {
  std::vector<ModeIndex> out;
  for (const auto& m : pool) {
    if (m.dual == dual) out.push_back(m);
  }
  return out;
}

ModeMap<double> random_xi(RandomFock& rf, const std::vector<ModeIndex>& modes) {
  ModeMap<double> xi;
  for (const auto& m : modes) xi[m] = rf.normal();
  return xi;
}

/// sum_mu |c_mu| prod |xi|^mu: the scale against which evaluation rounding is measured.
double abs_scale(const FockVector& f, const ModeMap<double>& xi) {
  FockVectorF g(f.max_degree());
  for (const auto& [mu, c] : f.terms()) g.add_term(mu, std::abs(c.get_d()));
  ModeMap<double> a;
  for (const auto& [m, v] : xi) a[m] = std::abs(v);
  return chaos_eval_spectral(g, a);
}

double rel_error(double x, double y, double scale) {
  const double diff = std::abs(x - y);
  return scale > 0.0 ? diff / scale : diff;
}

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

struct Dual {
  double v = 0.0;
  double dv = 0.0;
  Dual() = default;
  Dual(double value) : v(value) {}
  Dual(double value, double deriv) : v(value), dv(deriv) {}
  friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.dv + b.dv}; }
  friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.v * b.dv + a.dv * b.v}; }
};

/// Gradient of the spectral chaos in each coordinate of `modes`, by forward-mode AD.
ModeMap<double> chaos_gradient(const FockVector& f, const ModeMap<double>& xi) {
  ModeMap<double> grad;
  for (const auto& [m, v] : xi) {
    ModeMap<Dual> x;
    for (const auto& [n, w] : xi) x[n] = Dual(w, n == m ? 1.0 : 0.0);
    grad[m] = chaos_eval_spectral(f, x).dv;
  }
  return grad;
}

struct GridChoice {
  bool found = false;
  int k = 0;
  double C = 0.0;
  double ratio = kNaN;
};

/// First (k, C) in lexicographic grid order whose worst ratio is <= 1.
GridChoice search_grid(const std::vector<int>& ks, const std::vector<double>& Cs,
                       const std::function<double(int, double)>& worst_ratio) {
  GridChoice best;
  for (int k : ks) {
    for (double C : Cs) {
      const double r = worst_ratio(k, C);
      if (!best.found && r <= 1.0) return {true, k, C, r};
      if (!(best.ratio <= r)) best = {false, k, C, r};
    }
  }
  return best;
}

}  // namespace

namespace checks {

// =================================================================== algebra

std::vector<CheckRecord> wick_axioms(int d, int K, int max_degree, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "wick_axioms"));
  const auto pool = Truncation{d, K}.doubled_modes();
  std::size_t comm = 0, assoc = 0, unit = 0;
  for (int t = 0; t < n; ++t) {
    const auto f = rf.vector(pool, max_degree, 4);
    const auto g = rf.vector(pool, max_degree, 4);
    const auto h = rf.vector(pool, max_degree, 4);
    comm += diff_count(wick_product(f, g), wick_product(g, f));
    assoc += diff_count(wick_product(wick_product(f, g), h), wick_product(f, wick_product(g, h)));
    unit += diff_count(wick_product(FockVector::vacuum(), f), f);
  }
  return {make_record("algebra", "wick_commutativity", "wick-commutative-algebra",
                      static_cast<double>(comm), 0.0, n, seed),
          make_record("algebra", "wick_associativity", "wick-commutative-algebra",
                      static_cast<double>(assoc), 0.0, n, seed),
          make_record("algebra", "wick_unit", "wick-commutative-algebra",
                      static_cast<double>(unit), 0.0, n, seed)};
}

std::vector<CheckRecord> derivation_law(int d, int K, int max_degree, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "derivation_law"));
  std::size_t residual = 0, nontrivial = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, d, K, 3, true);
    const auto h = rf.mode_map(pool, 3);
    const auto f = rf.vector(pool, max_degree, 4);
    const auto g = rf.vector(pool, max_degree, 4);
    const auto lhs = annihilate_general(h, wick_product(f, g));
    const auto rhs = wick_product(annihilate_general(h, f), g) + wick_product(f, annihilate_general(h, g));
    residual += diff_count(lhs, rhs);
    nontrivial += lhs.is_zero() ? 0 : 1;
  }
  return {make_record("algebra", "derivation_law", "annihilation-is-wick-derivation",
                      static_cast<double>(residual), 0.0, n, seed,
                      "nonzero instances=" + std::to_string(nontrivial))};
}

CheckRecord annihilation_commute(int d, int K, int max_degree, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "annihilation_commute"));
  std::size_t residual = 0, degree_errors = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, d, K, 3, true);
    const auto f = rf.vector(pool, max_degree, 5);
    const auto& m1 = pool[static_cast<std::size_t>(rf.uniform_int(0, static_cast<int>(pool.size()) - 1))];
    const auto& m2 = pool[static_cast<std::size_t>(rf.uniform_int(0, static_cast<int>(pool.size()) - 1))];
    residual += diff_count(annihilate(m1, annihilate(m2, f)), annihilate(m2, annihilate(m1, f)));
    // every term of a_m F comes from a term of F one degree higher
    const auto reduced = annihilate(m1, f);
    for (const auto& [mu, c] : reduced.terms()) {
      bool ok = false;
      for (const auto& [nu, b] : f.terms()) ok = ok || (nu.degree() == mu.degree() + 1 && nu.multiplicity(m1) > 0);
      degree_errors += ok ? 0 : 1;
    }
  }
  return make_record("algebra", "annihilation_commute", "annihilation-operator",
                     static_cast<double>(residual + degree_errors), 0.0, n, seed);
}

std::vector<CheckRecord> serialization(int d, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "serialization"));
  const auto pool = Truncation{d, K}.doubled_modes();
  std::size_t round_trip = 0, canonical = 0;
  for (int t = 0; t < n; ++t) {
    const auto f = rf.vector(pool, 5, 6);
    const std::string text = serialize_fock(f);
    if (!(deserialize_fock(text) == f)) ++round_trip;
    // rebuild in a shuffled order, splitting every coefficient in two
    std::vector<std::pair<MultiIndex, Rational>> pieces;
    for (const auto& [mu, c] : f.terms()) {
      const Rational part = rf.coefficient();
      pieces.emplace_back(mu, part);
      pieces.emplace_back(mu, c - part);
    }
    std::shuffle(pieces.begin(), pieces.end(), rf.engine());
    FockVector g(f.max_degree());
    for (const auto& [mu, c] : pieces) g.add_term(mu, c);
    if (serialize_fock(g) != text) ++canonical;
  }
  if (!deserialize_fock("").is_zero()) ++round_trip;
  return {make_record("algebra", "serialization_round_trip", "fock-text-format",
                      static_cast<double>(round_trip), 0.0, n + 1, seed),
          make_record("algebra", "serialization_canonical", "fock-text-format",
                      static_cast<double>(canonical), 0.0, n, seed)};
}

std::vector<CheckRecord> series_ring(int d, int K, int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "series_ring"));
  std::size_t assoc = 0, distrib = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, d, K, 3, true);
    auto random_series = [&] {
      HbarSeries s(R);
      for (int r = 0; r <= R; ++r) s[r] = rf.vector(pool, 2, 2);
      return s;
    };
    const auto a = random_series(), b = random_series(), c = random_series();
    assoc += diff_count(series_wick_product(series_wick_product(a, b), c),
                        series_wick_product(a, series_wick_product(b, c)));
    distrib += diff_count(series_wick_product(a, b + c),
                          series_wick_product(a, b) + series_wick_product(a, c));
  }
  return {make_record("algebra", "series_associativity", "hbar-series-ring",
                      static_cast<double>(assoc), 0.0, n, seed),
          make_record("algebra", "series_distributivity", "hbar-series-ring",
                      static_cast<double>(distrib), 0.0, n, seed)};
}

CheckRecord connes_product_bound(int d, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "connes_product_bound"));
  const auto pool = Truncation{d, K}.doubled_modes();
  constexpr int k = 1;
  constexpr double C = 1.0;
  std::vector<FockVector> fs, gs;
  std::vector<double> lhs;
  for (int t = 0; t < n; ++t) {
    fs.push_back(rf.vector(pool, 4, 3));
    gs.push_back(rf.vector(pool, 4, 3));
    lhs.push_back(connes_norm_upper(wick_product(fs.back(), gs.back()), k, C));
  }
  const auto choice = search_grid({1, 2, 3}, {1.0, 2.0, 4.0, 8.0}, [&](int k0, double C0) {
    double worst = 0.0;
    for (int t = 0; t < n; ++t) {
      const double rhs = connes_norm_upper(fs[static_cast<std::size_t>(t)], k0, C0) *
                         connes_norm_upper(gs[static_cast<std::size_t>(t)], k0, C0);
      worst = std::max(worst, lhs[static_cast<std::size_t>(t)] / rhs);
    }
    return worst;
  });
  return make_record("algebra", "connes_product_continuity", "connes-space-topological-algebra",
                     choice.ratio, 1.0, n, seed,
                     "k=1 C=1 k0=" + std::to_string(choice.k) + fmt(" C0=%g", choice.C));
}

CheckRecord wick_exponential_taylor(int d, int K, int N, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "wick_exponential_taylor"));
  const auto pool = Truncation{d, K}.primal_modes();
  double worst = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto gamma = rf.mode_map(pool, 3);
    const auto phi = wick_exponential(gamma, ModeMap<Rational>{}, N);
    const auto xi = random_xi(rf, pool);
    double x = 0.0;
    for (const auto& [m, c] : gamma) x += c.get_d() * xi.at(m);
    double sum = 0.0, abs_sum = 0.0, term = 1.0;
    for (int j = 0; j <= N; ++j) {
      if (j > 0) term *= x / j;
      sum += term;
      abs_sum += std::abs(term);
    }
    worst = std::max(worst, rel_error(chaos_eval_spectral(phi, xi), sum, abs_sum));
  }
  return make_record("algebra", "wick_exponential_taylor", "wick-exponential", worst, 1e-12, n,
                     seed, "N=" + std::to_string(N));
}

CheckRecord basis_gram(int K, int n_points) {
  double worst = 0.0;
  for (int a = -K; a <= K; ++a) {
    for (int b = -K; b <= K; ++b) {
      const double g = h_inner_product(primal(1, a), primal(1, b), n_points);
      worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
    }
  }
  return make_record("algebra", "basis_gram_identity", "orthonormal-fourier-basis", worst, 1e-10,
                     (2 * K + 1) * (2 * K + 1), 0, "quadrature points=" + std::to_string(n_points));
}

// ===================================================================== chaos

CheckRecord pairing_recovers_xi(const LoopSpec& spec, int n_grid, int n_samples,
                                std::uint64_t seed) {
  LoopSpec fine = spec;
  if (fine.M % n_grid != 0) fine.M = n_grid;
  ChaosEvalConfig cfg;
  cfg.n_grid = n_grid;
  const int k_max = std::min(8, spec.K_mc);
  double worst = 0.0;
  int count = 0;
  for (int s = 0; s < n_samples; ++s) {
    const auto sample = sample_loop(derive_seed(seed, "pairing"), fine, static_cast<std::uint64_t>(s));
    for (int i = 1; i <= spec.d; ++i) {
      for (int k = -k_max; k <= k_max; ++k) {
        const double p = stratonovich_pairing(primal(i, k), sample, cfg);
        worst = std::max(worst, std::abs(p - sample.xi_at(i, k)));
        ++count;
      }
    }
  }
  return make_record("chaos", "pairing_recovers_coefficient", "stratonovich-degree-one", worst,
                     1e-8, count, seed, "n_grid=" + std::to_string(n_grid));
}

CheckRecord spectral_factorization(int d, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "spectral_factorization"));
  const auto pool = Truncation{d, K}.doubled_modes();
  double worst = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto f = rf.vector(pool, 4, 4);
    const auto g = rf.vector(pool, 4, 4);
    const auto xi = random_xi(rf, pool);
    const double lhs = chaos_eval_spectral(wick_product(f, g), xi);
    const double rhs = chaos_eval_spectral(f, xi) * chaos_eval_spectral(g, xi);
    worst = std::max(worst, rel_error(lhs, rhs, abs_scale(f, xi) * abs_scale(g, xi)));
  }
  return make_record("chaos", "spectral_factorization", "chaos-of-wick-product", worst, 1e-12, n,
                     seed);
}

std::vector<CheckRecord> quadrature_evaluation(int d, int K, const LoopSpec& spec, int n_grid,
                                               int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "quadrature_evaluation"));
  LoopSpec fine = spec;
  fine.d = d;
  if (fine.M % n_grid != 0) fine.M = n_grid;
  ChaosEvalConfig cfg;
  cfg.n_grid = n_grid;
  cfg.method = ChaosMethod::quadrature;
  const auto pool = Truncation{d, K}.primal_modes();
  constexpr int kSamples = 10;
  std::vector<LoopSample> samples;
  for (int s = 0; s < kSamples; ++s) {
    samples.push_back(sample_loop(derive_seed(seed, "quadrature_samples"), fine, static_cast<std::uint64_t>(s)));
  }
  double agree = 0.0, factor = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto& sample = samples[static_cast<std::size_t>(t % kSamples)];
    const auto f = rf.vector(pool, 4, 4);
    const auto g = rf.vector(pool, 4, 4);
    const auto xi = sample.xi_map();
    const double q = chaos_eval_quadrature(f, sample, cfg);
    agree = std::max(agree, rel_error(q, chaos_eval_spectral(f, xi), abs_scale(f, xi)));
    const double qfg = chaos_eval_quadrature(wick_product(f, g), sample, cfg);
    const double qg = chaos_eval_quadrature(g, sample, cfg);
    factor = std::max(factor, rel_error(qfg, q * qg, abs_scale(f, xi) * abs_scale(g, xi)));
  }
  const std::string note = "n_grid=" + std::to_string(n_grid);
  return {make_record("chaos", "quadrature_matches_spectral", "stratonovich-subset-formula", agree,
                      1e-6, n, seed, note),
          make_record("chaos", "quadrature_factorization", "chaos-of-wick-product", factor, 1e-6,
                      n, seed, note)};
}

CheckRecord quadrature_convergence(int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "quadrature_convergence"));
  // A smooth deterministic loop: xi_k = (1 + 4 pi^2 k^2)^{-3/4}. Its aliased tail
  // decays like n^{-5/2}, well above rounding at n = 2048.
  LoopSpec spec{1, 8192, 2048};
  ModeMap<double> xi;
  for (int k = -spec.K_mc; k <= spec.K_mc; ++k) {
    xi[primal(1, k)] = std::pow(1.0 + kTwoPi * kTwoPi * k * k, -0.75);
  }
  const auto sample = loop_from_coefficients(xi, spec);
  const auto pool = Truncation{1, 3}.primal_modes();
  std::vector<FockVector> fs;
  for (int t = 0; t < n; ++t) fs.push_back(rf.vector(pool, 3, 4));
  const std::vector<int> grids = {256, 512, 1024, 2048};
  std::vector<double> xs, errors;
  for (int g : grids) {
    ChaosEvalConfig cfg;
    cfg.n_grid = g;
    double worst = 0.0;
    for (const auto& f : fs) {
      worst = std::max(worst, rel_error(chaos_eval_quadrature(f, sample, cfg),
                                        chaos_eval_spectral(f, xi), abs_scale(f, xi)));
    }
    xs.push_back(g);
    errors.push_back(worst);
  }
  const double order = -loglog_slope(xs, errors);
  return make_record("chaos", "quadrature_convergence_order", "stratonovich-subset-formula",
                     2.0 - order, 0.0, n, seed,
                     fmt("order=%.4f err@2048=%.3e", order, errors.back()));
}

CheckRecord gateaux_slope(int d, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "gateaux_slope"));
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
  double worst = 0.0, min_slope = 1e9, max_slope = -1e9;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, d, K, 3, true);
    const auto h = rf.mode_map(pool, 2);
    auto f = rf.vector(pool, 4, 4);
    // a cubic term along h so the O(eps^2) error term is present
    f.add_term(MultiIndex::of(h.begin()->first, 3), rf.coefficient());
    const auto xi = random_xi(rf, pool);
    ModeMap<double> hd;
    for (const auto& [m, c] : h) hd[m] = c.get_d();
    const double exact = chaos_eval_spectral(annihilate_general(h, f), xi);
    std::vector<double> errors;
    for (double e : eps) errors.push_back(std::abs(gateaux_derivative_fd(f, xi, hd, e) - exact));
    const double slope = loglog_slope(eps, errors);
    min_slope = std::min(min_slope, slope);
    max_slope = std::max(max_slope, slope);
    worst = std::isnan(slope) ? kNaN : std::max(worst, std::abs(slope - 2.0));
    if (std::isnan(worst)) break;
  }
  return make_record("chaos", "gateaux_fd_slope", "gateaux-derivative-is-annihilation", worst, 0.1,
                     n, seed, fmt("slope range [%.4f, %.4f]", min_slope, max_slope));
}

CheckRecord injectivity_probe(int d, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "injectivity_probe"));
  const auto pool = Truncation{d, K}.doubled_modes();
  std::size_t wrong = 0;
  for (int t = 0; t < n; ++t) {
    const auto f = rf.vector(pool, 4, 5);
    if (f.is_zero()) continue;
    if (chaos_vanishes(f, derive_seed(seed, "probe") + static_cast<std::uint64_t>(t))) ++wrong;
    if (!chaos_vanishes(f - f, seed)) ++wrong;
  }
  return make_record("chaos", "injectivity_probe", "chaos-injectivity", static_cast<double>(wrong),
                     0.0, n, seed);
}

CheckRecord normal_convergence(const LoopSpec& spec, std::uint64_t seed) {
  const auto sample = sample_loop(derive_seed(seed, "normal_convergence"), spec, 0);
  double sup = 0.0;
  for (double v : sample.values) sup = std::max(sup, std::abs(v));
  // |xi_{i,0}| = |grid mean of B_i| <= sup, so degree-n contributions of
  // F = sum_n mu^n e_{(1,0)^a (d,0)^{n-a}} are bounded by (mu sup)^n.
  const double mu = 1.0 / (4.0 * sup);
  constexpr int kDegrees = 24;
  std::vector<double> contribution;
  const double x1 = sample.xi_at(1, 0), x2 = sample.xi_at(spec.d, 0);
  for (int deg = 0; deg <= kDegrees; ++deg) {
    const int a = deg / 2;
    contribution.push_back(std::pow(mu, deg) * std::pow(std::abs(x1), a) *
                           std::pow(std::abs(x2), deg - a));
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (int n0 = 0; n0 < kDegrees; ++n0) {
    double tail = 0.0, bound = 0.0;
    for (int deg = n0 + 1; deg <= kDegrees; ++deg) {
      tail += contribution[static_cast<std::size_t>(deg)];
      bound += std::pow(2.0 * mu * sup, deg);
    }
    worst = std::max(worst, tail - bound);
  }
  return make_record("chaos", "normal_convergence_tail", "chaos-normal-convergence", worst, 0.0,
                     kDegrees, seed, fmt("sup|B|=%.4f mu=%.4g", sup, mu));
}

// ================================================================== gaussian

CheckRecord green_coefficients() {
  const auto pos = GreenKernel::positive_branch();
  const auto neg = GreenKernel::negative_branch();
  const double e = std::exp(1.0);
  const double alpha_mag = 1.0 / (2.0 * (1.0 - 1.0 / e));
  const double beta_mag = 1.0 / (2.0 * (e - 1.0));
  double worst = 0.0;
  worst = std::max(worst, std::abs(pos.alpha - alpha_mag));
  worst = std::max(worst, std::abs(pos.beta - beta_mag));
  worst = std::max(worst, std::abs(std::abs(GreenKernel::negative_branch_alpha()) - alpha_mag));
  worst = std::max(worst, std::abs(std::abs(GreenKernel::negative_branch_beta()) - beta_mag));
  worst = std::max(worst, std::abs(neg.alpha - GreenKernel::negative_branch_alpha()));
  worst = std::max(worst, std::abs(neg.beta - GreenKernel::negative_branch_beta()));
  worst = std::max(worst, std::abs(pos.derivative_jump() - 1.0));
  const double diag = std::cosh(0.5) / (2.0 * std::sinh(0.5));
  for (double s : {0.0, 0.25, 0.5, 0.9}) {
    worst = std::max(worst, std::abs(green_kernel(s, s) - diag));
    worst = std::max(worst, std::abs(pos(s, 0.3) - green_kernel(s, 0.3)));
  }
  return make_record("gaussian", "green_kernel_coefficients", "green-kernel-coefficients", worst,
                     1e-14, 1, 0, fmt("alpha'=%.17g beta'=%.17g", pos.alpha, pos.beta));
}

CheckRecord green_spectral_sum(int K, int n_pairs, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "green_spectral_sum"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_gap = 0.0;
  for (int t = 0; t < n_pairs; ++t) {
    const double s = u(rf.engine()), tt = u(rf.engine());
    const double err = std::abs(truncated_covariance(s, tt, K) - green_kernel(s, tt));
    if (err > worst) {
      worst = err;
      worst_gap = circle_distance(s, tt);
    }
  }
  // the truncation error peaks on the diagonal
  const double sup = std::abs(truncated_covariance(0.0, 0.0, K) - green_kernel(0.0, 0.0));
  return make_record("gaussian", "green_spectral_sum", "green-kernel-spectral", worst, 1e-4,
                     n_pairs, seed,
                     "K=" + std::to_string(K) + fmt(" worst at distance %.4g", worst_gap) +
                         fmt(" (diagonal error %.3g)", sup));
}

std::vector<CheckRecord> covariance_mc(const LoopSpec& spec, int n_samples, std::uint64_t seed) {
  const std::uint64_t s = derive_seed(seed, "covariance_mc");
  std::vector<CovarianceQuery> same = {{0.0, 0.0, 1, 1},  {0.1, 0.35, 1, 1}, {0.2, 0.7, 1, 1},
                                       {0.5, 0.55, 1, 1}, {0.9, 0.15, 1, 1}};
  if (spec.d >= 2) same.push_back({0.3, 0.45, 2, 2});
  std::vector<CovarianceQuery> cross;
  if (spec.d >= 2) cross = {{0.3, 0.3, 1, 2}, {0.1, 0.6, 1, 2}, {0.8, 0.2, 2, 1}};
  const std::vector<CovarianceQuery> translated = {{0.5, 0.75, 1, 1}, {0.8, 0.05, 1, 1},
                                                   {0.65, 0.9, 1, 1}};
  auto worst_z = [&](const std::vector<CovarianceQuery>& qs, double* trunc) {
    double worst = 0.0;
    for (const auto& e : estimate_covariance(spec, s, n_samples, qs)) {
      worst = std::max(worst, std::abs(e.z()));
      if (trunc && e.query.i == e.query.j) {
        *trunc = std::max(*trunc, std::abs(e.expected / green_kernel(e.query.s, e.query.t) - 1.0));
      }
    }
    return worst;
  };
  double trunc = 0.0;
  const double same_z = worst_z(same, &trunc);
  std::vector<CheckRecord> out;
  out.push_back(make_record("gaussian", "covariance_mc", "loop-covariance", same_z, 3.0,
                            n_samples, seed,
                            fmt("max |z|; truncation factor within %.2e of 1", trunc)));
  if (!cross.empty()) {
    out.push_back(make_record("gaussian", "coordinate_independence", "loop-covariance",
                              worst_z(cross, nullptr), 3.0, n_samples, seed, "max |z|"));
  }
  out.push_back(make_record("gaussian", "stationarity", "loop-covariance",
                            worst_z(translated, nullptr), 3.0, n_samples, seed,
                            "translated pairs, max |z|"));
  return out;
}

CheckRecord mean_zero(const LoopSpec& spec, int n_samples, std::uint64_t seed) {
  std::vector<double> points;
  for (int j = 0; j < 16; ++j) points.push_back(j / 16.0);
  double worst = 0.0;
  for (const auto& m : estimate_mean(spec, derive_seed(seed, "mean_zero"), n_samples, points)) {
    worst = std::max(worst, std::abs(m.estimate));
  }
  return make_record("gaussian", "mean_zero", "loop-covariance", worst,
                     4.0 / std::sqrt(static_cast<double>(n_samples)), n_samples, seed,
                     "16 points per coordinate");
}

std::vector<CheckRecord> holder_moments(const LoopSpec& spec, int n_samples, std::uint64_t seed) {
  std::vector<std::pair<double, double>> p1_pairs;
  for (int j = 1; j <= 6; ++j) p1_pairs.emplace_back(0.1, 0.1 + std::ldexp(1.0, -j));
  double worst_z = 0.0;
  for (const auto& row : holder_moment_check(spec, derive_seed(seed, "holder_p1"), n_samples, 1, p1_pairs)) {
    worst_z = std::max(worst_z, std::abs(row.z()));
  }
  std::vector<std::pair<double, double>> dyadic;
  for (double gap = 0.5; gap >= 1.0 / spec.M; gap /= 2) dyadic.emplace_back(0.2, 0.2 + gap);
  constexpr int p = 2;
  // 2 (G(0) - G(x)) <= x, so the ratio never exceeds the chi^2_d moment 2^p Gamma(d/2+p)/Gamma(d/2)
  const double limit =
      std::pow(2.0, p) * std::exp(std::lgamma(0.5 * spec.d + p) - std::lgamma(0.5 * spec.d));
  double worst = -std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  for (const auto& row : holder_moment_check(spec, derive_seed(seed, "holder_p2"), n_samples, p, dyadic)) {
    worst = std::max(worst, row.ratio - 3.0 * row.std_error);
    max_ratio = std::max(max_ratio, row.ratio);
  }
  return {make_record("gaussian", "holder_p1_closed_form", "loop-holder-moments", worst_z, 3.0,
                      n_samples, seed, "max |z| over 6 dyadic separations"),
          make_record("gaussian", "holder_p2_bounded", "loop-holder-moments", worst, limit,
                      n_samples, seed,
                      fmt("max ratio %.4f down to separation 1/M; bound %.1f", max_ratio, limit))};
}

CheckRecord covariance_psd(int K, int M) {
  const double lambda = min_covariance_eigenvalue(K, M);
  return make_record("gaussian", "covariance_psd", "loop-covariance", -lambda, 1e-10, 1, 0,
                     fmt("min eigenvalue %.3e", lambda));
}

// =================================================================== poisson

std::vector<CheckRecord> poisson_axioms(const SymplecticForm& form, int K, int n,
                                        std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "poisson_axioms"));
  std::size_t anti = 0, leibniz = 0, jacobi = 0, nonzero = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    const auto h = rf.vector(pool, 3, 3);
    const auto fg = poisson_bracket(f, g, form);
    anti += (fg + poisson_bracket(g, f, form)).size() + poisson_bracket(f, f, form).size();
    leibniz += diff_count(poisson_bracket(f, wick_product(g, h), form),
                          wick_product(fg, h) + wick_product(g, poisson_bracket(f, h, form)));
    const auto jac = poisson_bracket(f, poisson_bracket(g, h, form), form) +
                     poisson_bracket(g, poisson_bracket(h, f, form), form) +
                     poisson_bracket(h, fg, form);
    jacobi += jac.size();
    nonzero += fg.is_zero() ? 0 : 1;
  }
  const std::string note = "nonzero brackets=" + std::to_string(nonzero);
  return {make_record("poisson", "bracket_antisymmetry", "poisson-structure",
                      static_cast<double>(anti), 0.0, n, seed, note),
          make_record("poisson", "bracket_leibniz", "poisson-structure",
                      static_cast<double>(leibniz), 0.0, n, seed, note),
          make_record("poisson", "bracket_jacobi", "poisson-structure",
                      static_cast<double>(jacobi), 0.0, n, seed, note)};
}

CheckRecord bracket_degree_one(const SymplecticForm& form, int K) {
  std::size_t wrong = 0;
  // omega^{-1} omega = I
  const auto& lo = form.omega_lower();
  const auto& up = form.omega_upper();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    for (std::size_t j = 0; j < lo.size(); ++j) {
      Rational acc = 0;
      for (std::size_t l = 0; l < lo.size(); ++l) acc += up[i][l] * lo[l][j];
      if (acc != (i == j ? 1 : 0)) ++wrong;
    }
  }
  int count = 0;
  for (int i = 1; i <= form.d(); ++i) {
    for (int k = -K; k <= K; ++k) {
      const auto b = poisson_bracket(FockVector::monomial(MultiIndex::of(primal(i, k))),
                                     FockVector::monomial(MultiIndex::of(dual(i, k))), form);
      if (!(b == FockVector::vacuum(-(form.weight_c() * k * k + 1)))) ++wrong;
      ++count;
    }
  }
  return make_record("poisson", "bracket_degree_one", "weighted-symplectic-bracket",
                     static_cast<double>(wrong), 0.0, count, 0,
                     "expects -(c k^2 + 1) for the canonical orientation");
}

CheckRecord bracket_chaos_compatibility(const SymplecticForm& form, int K, int n,
                                        std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "bracket_chaos_compatibility"));
  double worst = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    const auto xi = random_xi(rf, pool);
    const auto df = chaos_gradient(f, xi), dg = chaos_gradient(g, xi);
    const auto pi = moyal_bivector<double>(form, std::set<ModeIndex>(pool.begin(), pool.end()));
    double classical = 0.0, scale = 0.0;
    for (const auto& [a, row] : pi.rows) {
      for (const auto& [b, c] : row) {
        classical += c * df.at(a) * dg.at(b);
        scale += std::abs(c * df.at(a) * dg.at(b));
      }
    }
    const double algebraic = chaos_eval_spectral(poisson_bracket(f, g, form), xi);
    worst = std::max(worst, rel_error(algebraic, classical, scale));
  }
  return make_record("poisson", "bracket_chaos_compatibility", "bracket-chaos-dictionary", worst,
                     1e-10, n, seed, "gradients by forward-mode dual numbers");
}

CheckRecord bracket_boundedness(const SymplecticForm& form, int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "bracket_boundedness"));
  std::vector<FockVector> fs, gs;
  std::vector<double> lhs;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    fs.push_back(rf.vector(pool, 3, 3));
    gs.push_back(rf.vector(pool, 3, 3));
    lhs.push_back(connes_norm_upper(poisson_bracket(fs.back(), gs.back(), form), 1, 1.0));
  }
  const auto choice = search_grid({1, 2, 3, 4}, {1.0, 2.0, 4.0, 8.0}, [&](int k3, double C3) {
    double worst = 0.0;
    for (std::size_t t = 0; t < fs.size(); ++t) {
      worst = std::max(worst, lhs[t] / (connes_norm_upper(fs[t], k3, C3) * connes_norm_upper(gs[t], k3, C3)));
    }
    return worst;
  });
  return make_record("poisson", "bracket_boundedness", "bounded-poisson-structure", choice.ratio,
                     1.0, n, seed,
                     "k=1 C=1 k3=" + std::to_string(choice.k) + fmt(" C3=%g", choice.C));
}

// ===================================================================== moyal

std::vector<CheckRecord> star_axioms(const SymplecticForm& form, int K, int R, int n,
                                     std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "star_axioms"));
  std::size_t p0 = 0, p1 = 0, vanish = 0, assoc = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    const auto h = rf.vector(pool, 3, 3);
    p0 += diff_count(poisson_power(0, f, g, form), wick_product(f, g));
    const auto bracket2 = poisson_bracket(f, g, form) * Rational(2);
    p1 += diff_count(poisson_power(1, f, g, form) - poisson_power(1, g, f, form), bracket2);
    const auto fg = moyal_star(f, g, form, R);
    const auto gf = moyal_star(g, f, form, R);
    p1 += diff_count(fg[1] - gf[1], bracket2);
    for (int r = std::min(f.degree(), g.degree()) + 1; r <= R; ++r) {
      vanish += poisson_power(r, f, g, form).size();
    }
    const auto left = star_series(fg, HbarSeries::constant(h, R), form);
    const auto right = star_series(HbarSeries::constant(f, R), moyal_star(g, h, form, R), form);
    assoc += diff_count(left, right);
  }
  const std::string note = "R=" + std::to_string(R);
  return {make_record("moyal", "p0_is_wick", "star-product-leading-term",
                      static_cast<double>(p0), 0.0, n, seed),
          make_record("moyal", "p1_antisymmetrized", "star-product-first-order",
                      static_cast<double>(p1), 0.0, n, seed),
          make_record("moyal", "pr_vanishes_past_degree", "star-product-powers",
                      static_cast<double>(vanish), 0.0, n, seed),
          make_record("moyal", "star_associativity", "moyal-deformation-quantization",
                      static_cast<double>(assoc), 0.0, n, seed, note)};
}

std::vector<CheckRecord> star_series_checks(const SymplecticForm& form, int K, int R, int n,
                                            std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "star_series_checks"));
  std::size_t unit = 0, reduce = 0, assoc = 0;
  unit += diff_count(star_series(HbarSeries::unit(R), HbarSeries::unit(R), form), HbarSeries::unit(R));
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 2, true);
    auto random_series = [&] {
      HbarSeries s(R);
      for (int r = 0; r <= R; ++r) s[r] = rf.vector(pool, 2, 2);
      return s;
    };
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    reduce += diff_count(star_series(HbarSeries::constant(f, R), HbarSeries::constant(g, R), form),
                         moyal_star(f, g, form, R));
    const auto a = random_series(), b = random_series(), c = random_series();
    assoc += diff_count(star_series(star_series(a, b, form), c, form),
                        star_series(a, star_series(b, c, form), form));
  }
  return {make_record("moyal", "series_unit", "star-product-series", static_cast<double>(unit),
                      0.0, 1, seed),
          make_record("moyal", "series_reduces_to_star", "star-product-series",
                      static_cast<double>(reduce), 0.0, n, seed),
          make_record("moyal", "series_associativity", "moyal-deformation-quantization",
                      static_cast<double>(assoc), 0.0, n, seed, "R=" + std::to_string(R))};
}

// =============================================================== equivalence

namespace {

struct ExpArgs {
  ModeMap<Rational> g1, g1s, g2, g2s;
};

ExpArgs random_exp_args(RandomFock& rf, int d, int K) {
  const auto pool = cell_pool(rf, d, K, 2, true);
  const auto p = only(pool, false), q = only(pool, true);
  return {rf.mode_map(p, 2), rf.mode_map(q, 2), rf.mode_map(p, 2), rf.mode_map(q, 2)};
}

bool has_higher_orders(const HbarSeries& s) {
  for (int r = 1; r <= s.order(); ++r) {
    if (!s[r].is_zero()) return true;
  }
  return false;
}

/// Compares T(F *^A G) with T(F) * T(G) at degrees <= N - 2R. `nontrivial` counts
/// comparisons with some nonzero hbar^r coefficient, r >= 1, inside the window.
std::size_t intertwining_residual(const FockVector& f, const FockVector& g,
                                  const DiagonalOperatorA& a, const SymplecticForm& form, int N,
                                  int R, int& nontrivial) {
  const int window = N - 2 * R;
  const auto lhs = apply_T(star_A(f, g, a, form, R, N), a).truncated_degree(window);
  const auto rhs = star_series(apply_T(HbarSeries::constant(f, R), a),
                               apply_T(HbarSeries::constant(g, R), a), form, window)
                       .truncated_degree(window);
  nontrivial += has_higher_orders(lhs) ? 1 : 0;
  return diff_count(lhs, rhs);
}

std::string window_note(const DiagonalOperatorA& a, int N, int R) {
  return "alpha=" + a.name() + " N=" + std::to_string(N) + " R=" + std::to_string(R) +
         " degree window 0.." + std::to_string(N - 2 * R);
}

}  // namespace

CheckRecord intertwining_exponentials(const DiagonalOperatorA& a, const SymplecticForm& form,
                                      int K, int N, int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "intertwining_exponentials/" + a.name()));
  std::size_t residual = 0;
  int nontrivial = 0;
  for (int t = 0; t < n; ++t) {
    const auto args = random_exp_args(rf, form.d(), K);
    residual += intertwining_residual(wick_exponential(args.g1, args.g1s, N),
                                      wick_exponential(args.g2, args.g2s, N), a, form, N, R,
                                      nontrivial);
  }
  return make_record("equivalence", "intertwining_exponentials_" + a.name(),
                     "equivalence-transform", static_cast<double>(residual), 0.0, n, seed,
                     window_note(a, N, R) + " nontrivial=" + std::to_string(nontrivial));
}

CheckRecord intertwining_polynomials(const DiagonalOperatorA& a, const SymplecticForm& form,
                                     int K, int N, int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "intertwining_polynomials/" + a.name()));
  std::size_t residual = 0;
  int nontrivial = 0;
  const int window = N - 2 * R;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 2, true);
    residual += intertwining_residual(rf.vector(pool, window, 4), rf.vector(pool, window, 4), a,
                                      form, N, R, nontrivial);
  }
  return make_record("equivalence", "intertwining_polynomials_" + a.name(),
                     "equivalence-transform", static_cast<double>(residual), 0.0, n, seed,
                     window_note(a, N, R) + " nontrivial=" + std::to_string(nontrivial));
}

CheckRecord product_formula(const DiagonalOperatorA& a, const SymplecticForm& form, int K, int N,
                            int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "product_formula/" + a.name()));
  const int window = N - 2 * R;
  std::size_t residual = 0;
  int nontrivial = 0;
  for (int t = 0; t < n; ++t) {
    const auto args = random_exp_args(rf, form.d(), K);
    const auto lhs = star_A(wick_exponential(args.g1, args.g1s, N),
                            wick_exponential(args.g2, args.g2s, N), a, form, R, window)
                         .truncated_degree(window);
    const auto rhs =
        exp_product_formula_rhs(args.g1, args.g1s, args.g2, args.g2s, a, form, R, N)
            .truncated_degree(window);
    residual += diff_count(lhs, rhs);
    nontrivial += has_higher_orders(lhs) ? 1 : 0;
  }
  return make_record("equivalence", "exponential_product_formula_" + a.name(),
                     "wick-exponential-product-formula", static_cast<double>(residual), 0.0, n,
                     seed,
                     window_note(a, N, R) + " d=" + std::to_string(form.d()) +
                         " nontrivial=" + std::to_string(nontrivial));
}

std::vector<CheckRecord> ca1_expansion(const DiagonalOperatorA& a, const SymplecticForm& form,
                                       int K, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "ca1_expansion/" + a.name()));
  const Rational sigma = form.pairing_sign().value_or(Rational(0));
  std::size_t expansion = 0, symmetry = 0, vanish = 0, zero_case = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    // sum_{i,k} [(alpha_k + 1) :a_x F . a_x* G: + (alpha_k - 1) :a_x G . a_x* F:]
    FockVector expected(0);
    for (const auto& m : union_modes(f, g)) {
      if (m.dual) continue;
      const Rational w = sigma * form.weight(m.freq);
      const Rational& al = a.alpha(m.freq);
      expected += wick_product(annihilate(m, f), annihilate(m.twin(), g)) * Rational(al + w);
      expected += wick_product(annihilate(m, g), annihilate(m.twin(), f)) * Rational(al - w);
    }
    const auto c1 = cA1(f, g, a, form);
    expansion += diff_count(c1, expected) + diff_count(cAr(1, f, g, a, form), c1);
    symmetry += diff_count(apply_EA(f, g, a), apply_EA(g, f, a));
    for (int r = std::min(f.degree(), g.degree()) + 1; r <= 4; ++r) vanish += cAr(r, f, g, a, form).size();
    if (a.name() == "zero") zero_case += diff_count(c1, poisson_bracket(f, g, form));
  }
  return {make_record("equivalence", "ca1_two_displays_" + a.name(), "perturbed-bracket-ca1",
                      static_cast<double>(expansion + zero_case), 0.0, n, seed),
          make_record("equivalence", "ea_symmetry_" + a.name(), "perturbation-ea",
                      static_cast<double>(symmetry), 0.0, n, seed),
          make_record("equivalence", "car_vanishes_past_degree_" + a.name(), "perturbed-powers-car",
                      static_cast<double>(vanish), 0.0, n, seed)};
}

std::vector<CheckRecord> normal_product(const SymplecticForm& form, int K, int R, int n,
                                        std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "normal_product"));
  const auto one = DiagonalOperatorA::named("one", K);
  std::size_t one_sided = 0, ordered = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    FockVector expected(0);
    for (const auto& m : union_modes(f, g)) {
      if (!m.dual) expected += wick_product(annihilate(m, f), annihilate(m.twin(), g)) * Rational(2);
    }
    one_sided += diff_count(cA1(f, g, one, form), expected);
    // dual-only on the left, primal-only on the right: nothing to contract
    const auto fd = rf.vector(only(pool, true), 3, 3);
    const auto gp = rf.vector(only(pool, false), 3, 3);
    ordered += diff_count(star_A(fd, gp, one, form, R), HbarSeries::constant(wick_product(fd, gp), R));
  }
  return {make_record("equivalence", "normal_product_one_sided", "normal-star-product",
                      static_cast<double>(one_sided), 0.0, n, seed),
          make_record("equivalence", "normal_product_ordered", "normal-star-product",
                      static_cast<double>(ordered), 0.0, n, seed)};
}

CheckRecord star_A_associativity(const DiagonalOperatorA& a, const SymplecticForm& form, int K,
                                 int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "star_A_associativity/" + a.name()));
  std::size_t residual = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 3, true);
    const auto f = rf.vector(pool, 3, 3);
    const auto g = rf.vector(pool, 3, 3);
    const auto h = rf.vector(pool, 3, 3);
    const auto left = star_A_series(star_A(f, g, a, form, R), HbarSeries::constant(h, R), a, form);
    const auto right = star_A_series(HbarSeries::constant(f, R), star_A(g, h, a, form, R), a, form);
    residual += diff_count(left, right);
  }
  return make_record("equivalence", "star_A_associativity_" + a.name(),
                     "perturbed-deformation-quantization", static_cast<double>(residual), 0.0, n,
                     seed, "R=" + std::to_string(R));
}

CheckRecord transform_inverse(const DiagonalOperatorA& a, const SymplecticForm& form, int K,
                              int R, int n, std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "transform_inverse/" + a.name()));
  std::size_t residual = 0;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, form.d(), K, 2, true);
    HbarSeries s(R);
    for (int r = 0; r <= R; ++r) s[r] = rf.vector(pool, 2 * R + 2, 4);
    residual += diff_count(apply_T(apply_T(s, a), a.negated()), s);
    if (a.name() == "zero") residual += diff_count(apply_T(s, a), s);
    for (const auto& c : s.coefficients()) {
      if (c.degree() <= 1) residual += apply_T1(c, a).size();
    }
  }
  return make_record("equivalence", "transform_inverse_" + a.name(), "equivalence-transform",
                     static_cast<double>(residual), 0.0, n, seed, "R=" + std::to_string(R));
}

std::vector<CheckRecord> equivalence_bounds(const DiagonalOperatorA& a, int d, int K, int n,
                                            std::uint64_t seed) {
  RandomFock rf(derive_seed(seed, "equivalence_bounds/" + a.name()));
  std::vector<FockVector> fs, gs;
  std::vector<double> t1, ea;
  for (int t = 0; t < n; ++t) {
    const auto pool = cell_pool(rf, d, K, 3, true);
    fs.push_back(rf.vector(pool, 4, 3));
    gs.push_back(rf.vector(pool, 3, 3));
    t1.push_back(connes_norm_upper(apply_T1(fs.back(), a), 1, 1.0));
    ea.push_back(connes_norm_upper(apply_EA(fs.back(), gs.back(), a), 1, 1.0));
  }
  const std::vector<int> ks = {1, 2, 3, 4, 5};
  const std::vector<double> Cs = {1.0, 2.0, 4.0, 8.0};
  const auto c1 = search_grid(ks, Cs, [&](int k1, double C1) {
    double worst = 0.0;
    for (std::size_t t = 0; t < fs.size(); ++t) worst = std::max(worst, t1[t] / connes_norm_upper(fs[t], k1, C1));
    return worst;
  });
  const auto c2 = search_grid(ks, Cs, [&](int k1, double C1) {
    double worst = 0.0;
    for (std::size_t t = 0; t < fs.size(); ++t) {
      worst = std::max(worst, ea[t] / (connes_norm_upper(fs[t], k1, C1) * connes_norm_upper(gs[t], k1, C1)));
    }
    return worst;
  });
  return {make_record("equivalence", "t1_continuity_" + a.name(), "equivalence-transform",
                      c1.ratio, 1.0, n, seed,
                      "k=1 C=1 k1=" + std::to_string(c1.k) + fmt(" C1=%g", c1.C)),
          make_record("equivalence", "ea_continuity_" + a.name(), "perturbation-ea", c2.ratio,
                      1.0, n, seed, "k=1 C=1 k1=" + std::to_string(c2.k) + fmt(" C1=%g", c2.C))};
}

}  // namespace checks

// ================================================================ orchestration

namespace {

using Records = std::vector<CheckRecord>;

void run_timed(Records& out, bool with_time, const std::function<Records()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto recs = fn();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : recs) {
    if (with_time) r.wall_time = secs;
    out.push_back(std::move(r));
  }
}

template <class Fn>
std::function<Records()> one(Fn fn) {
  return [fn] { return Records{fn()}; };
}

std::vector<DiagonalOperatorA> alpha_operators(const RunConfig& cfg) {
  std::vector<DiagonalOperatorA> out;
  if (cfg.alpha.is_table()) {
    out.push_back(DiagonalOperatorA::from_table(cfg.alpha.table, cfg.alpha.mu));
  } else {
    for (const auto& fam : cfg.alpha.families()) out.push_back(DiagonalOperatorA::named(fam, cfg.K));
  }
  return out;
}

}  // namespace

std::vector<CheckRecord> run_suite(const std::string& name, const RunConfig& cfg) {
  using namespace checks;
  const std::uint64_t seed = cfg.mc.seed;
  const int d = cfg.d, K = cfg.K, N = cfg.N, R = cfg.R;
  const bool t = cfg.report_wall_time;
  const LoopSpec spec{d, cfg.mc.K_mc, cfg.mc.M};
  Records out;
  if (name == "algebra") {
    run_timed(out, t, [&] { return wick_axioms(d, K, 5, 200, seed); });
    run_timed(out, t, [&] { return derivation_law(d, K, 4, 200, seed); });
    run_timed(out, t, one([&] { return annihilation_commute(d, K, 4, 200, seed); }));
    run_timed(out, t, [&] { return serialization(d, K, 50, seed); });
    run_timed(out, t, [&] { return series_ring(d, K, R, 30, seed); });
    run_timed(out, t, one([&] { return connes_product_bound(d, K, 50, seed); }));
    run_timed(out, t, one([&] { return wick_exponential_taylor(d, K, N, 50, seed); }));
    run_timed(out, t, one([&] { return basis_gram(K, cfg.mc.n_grid); }));
  } else if (name == "chaos") {
    run_timed(out, t, one([&] { return pairing_recovers_xi(spec, cfg.mc.n_grid, 3, seed); }));
    run_timed(out, t, one([&] { return spectral_factorization(d, K, 100, seed); }));
    run_timed(out, t, [&] { return quadrature_evaluation(d, K, spec, cfg.mc.n_grid, 100, seed); });
    run_timed(out, t, one([&] { return quadrature_convergence(5, seed); }));
    run_timed(out, t, one([&] { return gateaux_slope(d, K, 50, seed); }));
    run_timed(out, t, one([&] { return injectivity_probe(d, K, 50, seed); }));
    run_timed(out, t, one([&] { return normal_convergence(spec, seed); }));
  } else if (name == "gaussian") {
    run_timed(out, t, one([&] { return green_coefficients(); }));
    run_timed(out, t, one([&] { return green_spectral_sum(200, 25, seed); }));
    run_timed(out, t, [&] { return covariance_mc(spec, cfg.mc.n_samples, seed); });
    run_timed(out, t, one([&] { return mean_zero(spec, std::min(cfg.mc.n_samples, 10000), seed); }));
    run_timed(out, t, [&] { return holder_moments(spec, cfg.mc.n_samples, seed); });
    run_timed(out, t, one([&] { return covariance_psd(cfg.mc.K_mc, cfg.mc.M); }));
  } else if (name == "poisson") {
    const auto form = SymplecticForm::canonical(d, cfg.weight_c);
    run_timed(out, t, [&] { return poisson_axioms(form, K, 100, seed); });
    run_timed(out, t, one([&] { return bracket_degree_one(form, K); }));
    run_timed(out, t, one([&] { return bracket_chaos_compatibility(form, K, 50, seed); }));
    run_timed(out, t, one([&] { return bracket_boundedness(form, K, 50, seed); }));
  } else if (name == "moyal") {
    const auto form = SymplecticForm::canonical(d, cfg.weight_c);
    run_timed(out, t, [&] { return star_axioms(form, K, R, 50, seed); });
    run_timed(out, t, [&] { return star_series_checks(form, K, R, 20, seed); });
  } else if (name == "equivalence") {
    const auto form = SymplecticForm::unit_pairing(d);
    for (const auto& a : alpha_operators(cfg)) {
      run_timed(out, t, one([&] { return intertwining_exponentials(a, form, K, N, R, 30, seed); }));
      run_timed(out, t, one([&] { return intertwining_polynomials(a, form, K, N, R, 30, seed); }));
      run_timed(out, t, one([&] { return product_formula(a, form, K, N, R, 20, seed); }));
      run_timed(out, t, [&] { return ca1_expansion(a, form, K, 30, seed); });
      run_timed(out, t, one([&] { return star_A_associativity(a, form, K, R, 20, seed); }));
      run_timed(out, t, one([&] { return transform_inverse(a, form, K, R, 30, seed); }));
      run_timed(out, t, [&] { return equivalence_bounds(a, d, K, 30, seed); });
    }
    run_timed(out, t, [&] { return normal_product(form, K, R, 30, seed); });
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

VerificationReport run_suites(const RunConfig& cfg) {
  cfg.validate();
  VerificationReport report;
  report.config_echo = config_to_json(cfg);
  for (const auto& name : cfg.suites) {
    auto recs = run_suite(name, cfg);
    report.records.insert(report.records.end(), recs.begin(), recs.end());
  }
  return report;
}

}  // namespace fockstar
