#include "fockstar/chaos.hpp"

#include "fockstar/basis.hpp"
#include "fockstar/philox.hpp"

#include <cmath>
#include <stdexcept>

namespace fockstar {

void ChaosEvalConfig::validate() const {
  if (n_grid < 64) throw std::invalid_argument("n_grid must be >= 64");
  if (!(fd_epsilon > 0.0 && fd_epsilon <= 0.1)) {
    throw std::invalid_argument("fd_epsilon must lie in (0, 0.1]");
  }
}

namespace {

/// B_coord at node j / n. Reuses the sample grid when the nodes are a subset of it.
double loop_at_node(const LoopSample& sample, int coord, int j, int n) {
  if (sample.spec.M % n == 0) return sample.value(j * (sample.spec.M / n), coord);
  return loop_eval(sample, static_cast<double>(j) / n)[static_cast<std::size_t>(coord - 1)];
}

void check_mode(const ModeIndex& mode, const LoopSample& sample) {
  if (mode.dual) throw std::invalid_argument("quadrature chaos needs primal modes");
  if (mode.coord < 1 || mode.coord > sample.spec.d) {
    throw std::invalid_argument("mode coordinate outside the sample");
  }
}

}  // namespace

double stratonovich_pairing(const ModeIndex& mode, const LoopSample& sample,
                            const ChaosEvalConfig& cfg) {
  cfg.validate();
  check_mode(mode, sample);
  const BasisFunction e(mode);
  double sum = 0.0;
  for (int j = 0; j < cfg.n_grid; ++j) {
    const double s = static_cast<double>(j) / cfg.n_grid;
    sum += e.value(s) * loop_at_node(sample, mode.coord, j, cfg.n_grid);
  }
  return e.stiffness() * sum / cfg.n_grid;
}

double slot_integral(const ModeIndex& mode, const LoopSample& sample, int n_grid) {
  check_mode(mode, sample);
  const BasisFunction e(mode);
  double sum = 0.0;
  for (int j = 0; j < n_grid; ++j) {
    const double s = static_cast<double>(j) / n_grid;
    sum += (e.value(s) - e.derivative(2, s)) * loop_at_node(sample, mode.coord, j, n_grid);
  }
  return sum / n_grid;
}

template <class S>
double chaos_eval_quadrature(const BasicFockVector<S>& f, const LoopSample& sample,
                             const ChaosEvalConfig& cfg) {
  cfg.validate();
  std::map<ModeIndex, double> slots;
  for (const auto& m : f.modes()) slots[m] = slot_integral(m, sample, cfg.n_grid);
  double total = 0.0;
  for (const auto& [mu, c] : f.terms()) {
    double term = ScalarTraits<S>::to_double(c);
    for (const auto& e : mu.entries()) term *= std::pow(slots.at(e.mode), e.mult);
    total += term;
  }
  return total;
}

template double chaos_eval_quadrature(const FockVector&, const LoopSample&, const ChaosEvalConfig&);
template double chaos_eval_quadrature(const FockVectorF&, const LoopSample&,
                                      const ChaosEvalConfig&);

bool chaos_vanishes(const FockVector& f, std::uint64_t seed) {
  const auto modes = f.modes();
  const std::size_t trials = std::max<std::size_t>(5, 5 * f.size());
  for (std::size_t t = 0; t < trials; ++t) {
    std::map<ModeIndex, double> xi;
    std::uint32_t slot = 0;
    for (const auto& m : modes) {
      xi[m] = counter_normal(seed, {static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32),
                                    slot++, 0x5eedu});
    }
    const double v = chaos_eval_spectral(f, xi);
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace fockstar
