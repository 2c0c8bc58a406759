#include "fockstar/gaussian_loop.hpp"

#include "fockstar/basis.hpp"
#include "fockstar/philox.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace fockstar {

namespace {

constexpr int kChunk = 256;

/// Runs fn(chunk) for every chunk index, spread across `threads` workers.
template <class Fn>
void for_each_chunk(int n_chunks, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(n_chunks, 1));
  if (threads == 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (int c = w; c < n_chunks; c += threads) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

int n_chunks_for(int n) { return (n + kChunk - 1) / kChunk; }

std::size_t xi_slot(const LoopSpec& spec, int coord, int freq) {
  return static_cast<std::size_t>(coord - 1) * static_cast<std::size_t>(2 * spec.K_mc + 1) +
         static_cast<std::size_t>(freq + spec.K_mc);
}

void validate(const LoopSpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("loop dimension d must be >= 1");
  if (spec.K_mc < 1) throw std::invalid_argument("K_mc must be >= 1");
  if (spec.M < 8) throw std::invalid_argument("grid size M must be >= 8");
}

void fill_grid(LoopSample& sample) {
  const auto& spec = sample.spec;
  sample.values.assign(static_cast<std::size_t>(spec.M) * spec.d, 0.0);
  for (int m = 0; m < spec.M; ++m) {
    const auto v = loop_eval(sample, sample.grid_point(m));
    std::copy(v.begin(), v.end(), sample.values.begin() + static_cast<std::ptrdiff_t>(m) * spec.d);
  }
}

/// Basis values e_k(s) for k = -K..K at each point.
std::vector<std::vector<double>> basis_table(std::span<const double> points, int K) {
  std::vector<std::vector<double>> table;
  for (double s : points) {
    std::vector<double> row;
    for (int k = -K; k <= K; ++k) row.push_back(BasisFunction(primal(1, k)).value(s));
    table.push_back(std::move(row));
  }
  return table;
}

/// Draws all coefficients of realization `index` into `xi`.
void draw_xi(std::uint64_t seed, std::uint64_t index, const LoopSpec& spec,
             std::vector<double>& xi) {
  xi.resize(static_cast<std::size_t>(spec.d) * static_cast<std::size_t>(2 * spec.K_mc + 1));
  for (int i = 1; i <= spec.d; ++i) {
    for (int k = -spec.K_mc; k <= spec.K_mc; ++k) {
      xi[xi_slot(spec, i, k)] = loop_coefficient(seed, index, i, k);
    }
  }
}

double dot_row(const std::vector<double>& xi, std::size_t offset, const std::vector<double>& row) {
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += xi[offset + j] * row[j];
  return acc;
}

}  // namespace

// ------------------------------------------------------------------ kernel

GreenKernel GreenKernel::positive_branch() {
  const double denom = 4.0 * std::sinh(0.5);
  return {std::exp(0.5) / denom, std::exp(-0.5) / denom};
}

GreenKernel GreenKernel::negative_branch() {
  auto g = positive_branch();
  return {-g.alpha, -g.beta};
}

double GreenKernel::negative_branch_alpha() { return -1.0 / (2.0 * (1.0 - std::exp(-1.0))); }
double GreenKernel::negative_branch_beta() { return 1.0 / (2.0 * (1.0 - std::exp(1.0))); }

double GreenKernel::operator()(double s, double t) const {
  double x = std::fmod(s - t, 1.0);
  if (x < 0) x += 1.0;
  return alpha * std::exp(-x) + beta * std::exp(x);
}

double GreenKernel::derivative_jump() const {
  const double e = std::exp(1.0);
  return (-alpha / e + beta * e) - (-alpha + beta);
}

double circle_distance(double s, double t) {
  double x = std::fmod(std::abs(s - t), 1.0);
  return std::min(x, 1.0 - x);
}

double green_kernel(double s, double t) {
  return std::cosh(circle_distance(s, t) - 0.5) / (2.0 * std::sinh(0.5));
}

double truncated_covariance(double s, double t, int K) {
  double acc = 0.0;
  for (int k = -K; k <= K; ++k) {
    BasisFunction e(primal(1, k));
    acc += e.value(s) * e.value(t);
  }
  return acc;
}

// ------------------------------------------------------------------ sampler

double LoopSample::xi_at(int coord, int freq) const {
  if (coord < 1 || coord > spec.d || freq < -spec.K_mc || freq > spec.K_mc) return 0.0;
  return xi[xi_slot(spec, coord, freq)];
}

ModeMap<double> LoopSample::xi_map() const {
  ModeMap<double> out;
  for (int i = 1; i <= spec.d; ++i) {
    for (int k = -spec.K_mc; k <= spec.K_mc; ++k) out[primal(i, k)] = xi_at(i, k);
  }
  return out;
}

double loop_coefficient(std::uint64_t seed, std::uint64_t index, int coord, int freq) {
  const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index),
                                static_cast<std::uint32_t>(index >> 32),
                                static_cast<std::uint32_t>(coord),
                                static_cast<std::uint32_t>(freq + (1 << 30))};
  return counter_normal(seed, ctr);
}

LoopSample sample_loop(std::uint64_t seed, const LoopSpec& spec, std::uint64_t index) {
  validate(spec);
  LoopSample out;
  out.spec = spec;
  out.seed = seed;
  out.index = index;
  draw_xi(seed, index, spec, out.xi);
  fill_grid(out);
  return out;
}

LoopSample loop_from_coefficients(const ModeMap<double>& xi, const LoopSpec& spec) {
  validate(spec);
  LoopSample out;
  out.spec = spec;
  out.xi.assign(static_cast<std::size_t>(spec.d) * static_cast<std::size_t>(2 * spec.K_mc + 1), 0.0);
  for (const auto& [m, v] : xi) {
    if (m.dual || m.coord < 1 || m.coord > spec.d || std::abs(m.freq) > spec.K_mc) {
      throw std::invalid_argument("coefficient " + m.to_string() + " outside the loop spec");
    }
    out.xi[xi_slot(spec, m.coord, m.freq)] = v;
  }
  fill_grid(out);
  return out;
}

std::vector<double> loop_eval(const LoopSample& sample, double s) {
  const auto& spec = sample.spec;
  std::vector<double> out(static_cast<std::size_t>(spec.d), 0.0);
  for (int k = -spec.K_mc; k <= spec.K_mc; ++k) {
    const double e = BasisFunction(primal(1, k)).value(s);
    for (int i = 1; i <= spec.d; ++i) out[static_cast<std::size_t>(i - 1)] += sample.xi[xi_slot(spec, i, k)] * e;
  }
  return out;
}

std::string export_loop_csv(const LoopSample& sample) {
  const auto& spec = sample.spec;
  std::string out = "# {\"K_mc\":" + std::to_string(spec.K_mc) + ",\"M\":" + std::to_string(spec.M) +
                    ",\"d\":" + std::to_string(spec.d) + ",\"index\":" + std::to_string(sample.index) +
                    ",\"seed\":" + std::to_string(sample.seed) + "}\ns";
  for (int i = 1; i <= spec.d; ++i) out += ",B_" + std::to_string(i);
  out += '\n';
  char buf[64];
  for (int m = 0; m < spec.M; ++m) {
    std::snprintf(buf, sizeof buf, "%.17g", sample.grid_point(m));
    out += buf;
    for (int i = 1; i <= spec.d; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", sample.value(m, i));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("FOCKSTAR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

// ------------------------------------------------------------------ diagnostics

double CovarianceEstimate::z() const {
  return std_error > 0 ? std::abs(estimate - expected) / std_error : 0.0;
}

double HolderRow::z() const {
  return std_error > 0 ? std::abs(ratio - closed_form) / std_error : 0.0;
}

std::vector<CovarianceEstimate> estimate_covariance(const LoopSpec& spec, std::uint64_t seed,
                                                    int n_samples,
                                                    std::span<const CovarianceQuery> queries,
                                                    int threads) {
  validate(spec);
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> s_points, t_points;
  for (const auto& q : queries) {
    if (q.i < 1 || q.i > spec.d || q.j < 1 || q.j > spec.d) {
      throw std::invalid_argument("covariance query coordinate outside 1..d");
    }
    s_points.push_back(q.s);
    t_points.push_back(q.t);
  }
  const auto s_table = basis_table(s_points, spec.K_mc);
  const auto t_table = basis_table(t_points, spec.K_mc);
  const std::size_t stride = static_cast<std::size_t>(2 * spec.K_mc + 1);
  const std::size_t nq = queries.size();

  const int n_chunks = n_chunks_for(n_samples);
  std::vector<double> sums(static_cast<std::size_t>(n_chunks) * nq, 0.0);
  std::vector<double> sq_sums(sums.size(), 0.0);
  for_each_chunk(n_chunks, threads, [&](int c) {
    std::vector<double> xi;
    const int lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
    for (int n = lo; n < hi; ++n) {
      draw_xi(seed, static_cast<std::uint64_t>(n), spec, xi);
      for (std::size_t q = 0; q < nq; ++q) {
        const double x = dot_row(xi, static_cast<std::size_t>(queries[q].i - 1) * stride, s_table[q]);
        const double y = dot_row(xi, static_cast<std::size_t>(queries[q].j - 1) * stride, t_table[q]);
        sums[static_cast<std::size_t>(c) * nq + q] += x * y;
        sq_sums[static_cast<std::size_t>(c) * nq + q] += x * y * x * y;
      }
    }
  });

  std::vector<CovarianceEstimate> out;
  for (std::size_t q = 0; q < nq; ++q) {
    double sum = 0.0, sq = 0.0;
    for (int c = 0; c < n_chunks; ++c) {
      sum += sums[static_cast<std::size_t>(c) * nq + q];
      sq += sq_sums[static_cast<std::size_t>(c) * nq + q];
    }
    const double n = n_samples;
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
    CovarianceEstimate e;
    e.query = queries[q];
    e.estimate = mean;
    e.std_error = std::sqrt(var / n);
    e.expected = queries[q].i == queries[q].j
                     ? truncated_covariance(queries[q].s, queries[q].t, spec.K_mc)
                     : 0.0;
    out.push_back(e);
  }
  return out;
}

std::vector<MeanEstimate> estimate_mean(const LoopSpec& spec, std::uint64_t seed, int n_samples,
                                        std::span<const double> points, int threads) {
  validate(spec);
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  const auto table = basis_table(points, spec.K_mc);
  const std::size_t stride = static_cast<std::size_t>(2 * spec.K_mc + 1);
  const std::size_t width = points.size() * static_cast<std::size_t>(spec.d);
  const int n_chunks = n_chunks_for(n_samples);
  std::vector<double> sums(static_cast<std::size_t>(n_chunks) * width, 0.0);
  for_each_chunk(n_chunks, threads, [&](int c) {
    std::vector<double> xi;
    const int lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
    for (int n = lo; n < hi; ++n) {
      draw_xi(seed, static_cast<std::uint64_t>(n), spec, xi);
      for (std::size_t p = 0; p < points.size(); ++p) {
        for (int i = 1; i <= spec.d; ++i) {
          sums[static_cast<std::size_t>(c) * width + p * spec.d + static_cast<std::size_t>(i - 1)] +=
              dot_row(xi, static_cast<std::size_t>(i - 1) * stride, table[p]);
        }
      }
    }
  });
  std::vector<MeanEstimate> out;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (int i = 1; i <= spec.d; ++i) {
      double sum = 0.0;
      for (int c = 0; c < n_chunks; ++c) {
        sum += sums[static_cast<std::size_t>(c) * width + p * spec.d + static_cast<std::size_t>(i - 1)];
      }
      out.push_back({points[p], i, sum / n_samples});
    }
  }
  return out;
}

std::vector<HolderRow> holder_moment_check(const LoopSpec& spec, std::uint64_t seed,
                                           int n_samples, int p,
                                           std::span<const std::pair<double, double>> pairs,
                                           int threads) {
  validate(spec);
  if (p < 1 || p > 3) throw std::invalid_argument("holder moment order p must be 1, 2 or 3");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  std::vector<double> s_points, t_points;
  for (const auto& [s, t] : pairs) {
    s_points.push_back(s);
    t_points.push_back(t);
  }
  const auto s_table = basis_table(s_points, spec.K_mc);
  const auto t_table = basis_table(t_points, spec.K_mc);
  const std::size_t stride = static_cast<std::size_t>(2 * spec.K_mc + 1);
  const std::size_t np = pairs.size();
  const int n_chunks = n_chunks_for(n_samples);
  std::vector<double> sums(static_cast<std::size_t>(n_chunks) * np, 0.0);
  std::vector<double> sq_sums(sums.size(), 0.0);
  for_each_chunk(n_chunks, threads, [&](int c) {
    std::vector<double> xi;
    const int lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
    for (int n = lo; n < hi; ++n) {
      draw_xi(seed, static_cast<std::uint64_t>(n), spec, xi);
      for (std::size_t q = 0; q < np; ++q) {
        double norm2 = 0.0;
        for (int i = 1; i <= spec.d; ++i) {
          const std::size_t off = static_cast<std::size_t>(i - 1) * stride;
          const double diff = dot_row(xi, off, t_table[q]) - dot_row(xi, off, s_table[q]);
          norm2 += diff * diff;
        }
        const double v = std::pow(norm2, p);
        sums[static_cast<std::size_t>(c) * np + q] += v;
        sq_sums[static_cast<std::size_t>(c) * np + q] += v * v;
      }
    }
  });

  std::vector<HolderRow> out;
  for (std::size_t q = 0; q < np; ++q) {
    const auto [s, t] = pairs[q];
    HolderRow row;
    row.s = s;
    row.t = t;
    const double gap = circle_distance(s, t);
    if (gap == 0.0) {
      out.push_back(row);
      continue;
    }
    double sum = 0.0, sq = 0.0;
    for (int c = 0; c < n_chunks; ++c) {
      sum += sums[static_cast<std::size_t>(c) * np + q];
      sq += sq_sums[static_cast<std::size_t>(c) * np + q];
    }
    const double n = n_samples;
    const double mean = sum / n;
    const double var = std::max(0.0, (sq - n * mean * mean) / (n - 1.0));
    const double scale = std::pow(gap, p);
    row.ratio = mean / scale;
    row.std_error = std::sqrt(var / n) / scale;
    // |B(t)-B(s)|^2 = sigma^2 chi^2_d with sigma^2 = 2 (G(0) - G(t-s)), and
    // E[(chi^2_d)^p] = 2^p Gamma(d/2 + p) / Gamma(d/2).
    const double sigma2 = 2.0 * (truncated_covariance(s, s, spec.K_mc) -
                                 truncated_covariance(s, t, spec.K_mc));
    const double half_d = 0.5 * spec.d;
    const double chi_moment = std::pow(2.0, p) * std::exp(std::lgamma(half_d + p) - std::lgamma(half_d));
    row.closed_form = std::pow(sigma2, p) * chi_moment / scale;
    out.push_back(row);
  }
  return out;
}

double min_covariance_eigenvalue(int K, int M) {
  Eigen::MatrixXd cov(M, M);
  for (int a = 0; a < M; ++a) {
    for (int b = 0; b < M; ++b) {
      cov(a, b) = truncated_covariance(static_cast<double>(a) / M, static_cast<double>(b) / M, K);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace fockstar
