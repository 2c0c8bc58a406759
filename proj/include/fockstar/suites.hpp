#pragma once

#include "fockstar/config.hpp"
#include "fockstar/equivalence.hpp"
#include "fockstar/gaussian_loop.hpp"
#include "fockstar/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fockstar {

/// Runs every suite named in cfg.suites, in order. Check failures become records;
/// only I/O or resource problems throw.
VerificationReport run_suites(const RunConfig& cfg);

/// One suite by name. Throws std::invalid_argument for unknown names.
std::vector<CheckRecord> run_suite(const std::string& name, const RunConfig& cfg);

/// Individual checks. Exact checks report the number of nonzero coefficients in
/// the difference of both sides (tolerance 0); floating checks report the worst
/// error over instances.
namespace checks {

// ------------------------------------------------------------------- algebra
/// Commutativity, associativity and unit of the Wick product.
std::vector<CheckRecord> wick_axioms(int d, int K, int max_degree, int n, std::uint64_t seed);
std::vector<CheckRecord> derivation_law(int d, int K, int max_degree, int n, std::uint64_t seed);
CheckRecord annihilation_commute(int d, int K, int max_degree, int n, std::uint64_t seed);
/// Round trip and byte-stability under permuted construction.
std::vector<CheckRecord> serialization(int d, int K, int n, std::uint64_t seed);
/// Associativity and distributivity of the hbar-series Wick product.
std::vector<CheckRecord> series_ring(int d, int K, int R, int n, std::uint64_t seed);
/// Smallest grid point (k0, C0) with ||:F.G:||_{k,C} <= ||F||_{k0,C0} ||G||_{k0,C0}.
CheckRecord connes_product_bound(int d, int K, int n, std::uint64_t seed);
CheckRecord wick_exponential_taylor(int d, int K, int N, int n, std::uint64_t seed);
CheckRecord basis_gram(int K, int n_points);

// --------------------------------------------------------------------- chaos
CheckRecord pairing_recovers_xi(const LoopSpec& spec, int n_grid, int n_samples,
                                std::uint64_t seed);
CheckRecord spectral_factorization(int d, int K, int n, std::uint64_t seed);
/// Quadrature vs spectral agreement and quadrature factorization at n_grid.
std::vector<CheckRecord> quadrature_evaluation(int d, int K, const LoopSpec& spec, int n_grid,
                                               int n, std::uint64_t seed);
/// Fitted order of the quadrature error over n_grid in {256, ..., 2048}.
CheckRecord quadrature_convergence(int n, std::uint64_t seed);
/// Log-log slope of the central-difference error over eps in {1e-2, 1e-3, 1e-4}.
CheckRecord gateaux_slope(int d, int K, int n, std::uint64_t seed);
CheckRecord injectivity_probe(int d, int K, int n, std::uint64_t seed);
CheckRecord normal_convergence(const LoopSpec& spec, std::uint64_t seed);

// ------------------------------------------------------------------ gaussian
CheckRecord green_coefficients();
CheckRecord green_spectral_sum(int K, int n_pairs, std::uint64_t seed);
/// Covariance, coordinate independence and stationarity against the truncated kernel.
std::vector<CheckRecord> covariance_mc(const LoopSpec& spec, int n_samples, std::uint64_t seed);
CheckRecord mean_zero(const LoopSpec& spec, int n_samples, std::uint64_t seed);
/// p = 1 closed form and p = 2 boundedness over dyadic separations.
std::vector<CheckRecord> holder_moments(const LoopSpec& spec, int n_samples, std::uint64_t seed);
CheckRecord covariance_psd(int K, int M);

// ------------------------------------------------------------------- poisson
std::vector<CheckRecord> poisson_axioms(const SymplecticForm& form, int K, int n,
                                        std::uint64_t seed);
CheckRecord bracket_degree_one(const SymplecticForm& form, int K);
CheckRecord bracket_chaos_compatibility(const SymplecticForm& form, int K, int n,
                                        std::uint64_t seed);
CheckRecord bracket_boundedness(const SymplecticForm& form, int K, int n, std::uint64_t seed);

// --------------------------------------------------------------------- moyal
/// P^0 = Wick, antisymmetrized P^1 = 2{,}, P^r = 0 past the degrees, associativity.
std::vector<CheckRecord> star_axioms(const SymplecticForm& form, int K, int R, int n,
                                     std::uint64_t seed);
std::vector<CheckRecord> star_series_checks(const SymplecticForm& form, int K, int R, int n,
                                            std::uint64_t seed);

// --------------------------------------------------------------- equivalence
/// T(Phi1 *^A Phi2) = T(Phi1) * T(Phi2) on Wick exponentials (and on random
/// polynomials of degree <= N - 2R), compared at degrees <= N - 2R.
CheckRecord intertwining_exponentials(const DiagonalOperatorA& a, const SymplecticForm& form,
                                      int K, int N, int R, int n, std::uint64_t seed);
CheckRecord intertwining_polynomials(const DiagonalOperatorA& a, const SymplecticForm& form,
                                     int K, int N, int R, int n, std::uint64_t seed);
CheckRecord product_formula(const DiagonalOperatorA& a, const SymplecticForm& form, int K, int N,
                            int R, int n, std::uint64_t seed);
/// cA1 = {,} + E_A equals the (alpha + 1)/(alpha - 1) expansion; E_A symmetric.
std::vector<CheckRecord> ca1_expansion(const DiagonalOperatorA& a, const SymplecticForm& form,
                                       int K, int n, std::uint64_t seed);
/// alpha = 1: one-sided contractions only.
std::vector<CheckRecord> normal_product(const SymplecticForm& form, int K, int R, int n,
                                        std::uint64_t seed);
CheckRecord star_A_associativity(const DiagonalOperatorA& a, const SymplecticForm& form, int K,
                                 int R, int n, std::uint64_t seed);
CheckRecord transform_inverse(const DiagonalOperatorA& a, const SymplecticForm& form, int K,
                              int R, int n, std::uint64_t seed);
/// Norm ratios ||T_1 F|| / ||F|| and ||E_A(F, G)|| / (||F|| ||G||) bounded on a grid.
std::vector<CheckRecord> equivalence_bounds(const DiagonalOperatorA& a, int d, int K, int n,
                                            std::uint64_t seed);

}  // namespace checks

}  // namespace fockstar
