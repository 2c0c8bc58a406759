#pragma once

#include "fockstar/fock_vector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fockstar {

/// Covariance kernel of the loop process: the Green function of (1 - d^2/ds^2)
/// on the unit circle,
///
///     G(s, t) = cosh(dist(s, t) - 1/2) / (2 sinh(1/2)),
///
/// written on s in [0, 1] (with t = 1) as alpha e^{-s} + beta e^{s}.
struct GreenKernel {
  double alpha = 0.0;
  double beta = 0.0;

  /// The positive-definite branch.
  static GreenKernel positive_branch();
  /// The overall sign flip of the positive branch (G(s, s) < 0).
  static GreenKernel negative_branch();
  /// Closed forms -1/(2(1 - e^{-1})) and 1/(2(1 - e)) of the negative branch.
  static double negative_branch_alpha();
  static double negative_branch_beta();

  /// alpha e^{-u} + beta e^{u}, u = circle distance mapped into [0, 1].
  double operator()(double s, double t) const;
  /// d/ds G(s, 1) at s = 1 minus at s = 0.
  double derivative_jump() const;
};

/// Positive-branch kernel.
double green_kernel(double s, double t);
/// Distance on the unit circle, in [0, 1/2].
double circle_distance(double s, double t);

/// Covariance of the sampler truncated at |k| <= K: sum_k e_k(s) e_k(t).
double truncated_covariance(double s, double t, int K);

struct LoopSpec {
  int d = 2;
  int K_mc = 64;
  int M = 512;
};

/// One realization of the loop: spectral coefficients xi_{i,k} (primal modes)
/// and the grid values they induce.
struct LoopSample {
  LoopSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<double> xi;      // [(coord - 1) * (2K + 1) + (freq + K)]
  std::vector<double> values;  // row-major M x d

  double xi_at(int coord, int freq) const;
  ModeMap<double> xi_map() const;
  double grid_point(int m) const { return static_cast<double>(m) / spec.M; }
  double value(int m, int coord) const {
    return values[static_cast<std::size_t>(m) * spec.d + static_cast<std::size_t>(coord - 1)];
  }
};

/// Draws xi_{i,k} ~ N(0, 1) keyed by (seed, index, i, k) and fills the grid.
/// `index` selects an independent realization under the same seed.
LoopSample sample_loop(std::uint64_t seed, const LoopSpec& spec, std::uint64_t index = 0);

/// Builds a loop from given coefficients (missing modes are zero).
LoopSample loop_from_coefficients(const ModeMap<double>& xi, const LoopSpec& spec);

/// The coefficient of one primal mode in realization `index`.
double loop_coefficient(std::uint64_t seed, std::uint64_t index, int coord, int freq);

/// Spectral sum at an arbitrary point. Agrees bit-for-bit with the grid at s = m/M.
std::vector<double> loop_eval(const LoopSample& sample, double s);

/// Writes `# {"M":..,"K_mc":..,"d":..,"seed":..}` then `s,B_1,...,B_d` rows.
std::string export_loop_csv(const LoopSample& sample);

/// Worker count for Monte-Carlo loops: FOCKSTAR_THREADS, else 1.
int default_thread_count();

// ---------------------------------------------------------------- diagnostics

struct CovarianceQuery {
  double s = 0.0;
  double t = 0.0;
  int i = 1;
  int j = 1;
};

struct CovarianceEstimate {
  CovarianceQuery query;
  double estimate = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // delta_ij times the truncated kernel
  double z() const;
};

/// Monte-Carlo E[B_i(s) B_j(t)] over realizations 0..n-1. Reduction is in fixed
/// chunks, so results do not depend on `threads`.
std::vector<CovarianceEstimate> estimate_covariance(const LoopSpec& spec, std::uint64_t seed,
                                                    int n_samples,
                                                    std::span<const CovarianceQuery> queries,
                                                    int threads = default_thread_count());

struct MeanEstimate {
  double s = 0.0;
  int coord = 1;
  double estimate = 0.0;
};
std::vector<MeanEstimate> estimate_mean(const LoopSpec& spec, std::uint64_t seed, int n_samples,
                                        std::span<const double> points,
                                        int threads = default_thread_count());

struct HolderRow {
  double s = 0.0;
  double t = 0.0;
  double ratio = 0.0;       // estimate of E|B(t)-B(s)|^{2p} / |t-s|^p
  double std_error = 0.0;
  double closed_form = 0.0; // Gaussian moment of the truncated process
  double z() const;
};

/// Hoelder moment ratios for p in {1, 2, 3}. Coincident points give ratio 0.
std::vector<HolderRow> holder_moment_check(const LoopSpec& spec, std::uint64_t seed,
                                           int n_samples, int p,
                                           std::span<const std::pair<double, double>> pairs,
                                           int threads = default_thread_count());

/// Smallest eigenvalue of the truncated covariance matrix on an M-point grid.
double min_covariance_eigenvalue(int K, int M);

}  // namespace fockstar
