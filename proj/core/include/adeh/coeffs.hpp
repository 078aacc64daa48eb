#pragma once

#include "adeh/cyclo.hpp"
#include "adeh/rootsys.hpp"

#include <optional>
#include <string>
#include <vector>

/**
 * The coefficient layer: the normalized eigenbasis H_1..H_N of the Coxeter
 * element, the beta-tables beta_{i,+-m} = (alpha_i | H_{a}), both forms of
 * the OPE factor B_i, the exact hierarchy coefficients a_i, the
 * singularity-side coefficients a~_i, and the verifier for a_i = a~_i.
 *
 * Exactness notes:
 *  - All eigen-data lives in Q(zeta_L) where L is h times the small
 *    extension needed by the normalization radicals (L = h for every
 *    supported type except D_6 -> 20 and E_7 -> 36).
 *  - The a_i are exact elements of Q(zeta_h).  They are always real and
 *    positive, and their sum is the exact rational N(h+1)/(12h), but
 *    individual a_i need not be rational (first case: A_4, where
 *    a_i in {(5+sqrt5)/50, (5-sqrt5)/50}); compute_a certifies reality,
 *    positivity and the exact sum instead of rationality.
 */
namespace adeh::coeffs {

using cyclo::Num;
using cyclo::Rational;
using cyclo::Real;

/**
 * Eigenvectors H[a] (0-based; H_{a+1} in 1-based accounts) of the Coxeter element
 * with M*H[a] = eta_h^{m_{a+1}} H[a] and (H[a]|H[b]) = h when a+b = N-1,
 * else 0 — verified exactly at construction.
 */
struct Eigenbasis {
  unsigned conductor;  // L; h | L
  unsigned eta_power;  // L/h, so eta_h = zeta_L^{eta_power}
  std::vector<std::vector<Num>> H;

  Num eta_h(long k = 1) const {
    return Num::zeta_power(conductor, static_cast<long>(eta_power) * k);
  }
};

/** Smallest working conductor: lcm of h and the radical field conductor. */
unsigned eigenbasis_conductor(const rootsys::CoxeterData& cox);

/**
 * Solve the eigenproblem exactly over Q(zeta_L), pair eigenvectors a with
 * N-1-a and rescale to the h*antidiagonal Gram normalization.  The doubled
 * eigenvalue -1 of D_N (N even) is resolved by an isotropic hyperbolic pair
 * built from the exact 2x2 restricted form.  Throws on any inconsistency.
 */
Eigenbasis eigenbasis(const rootsys::CoxeterData& cox);

/** The bilinear Cartan form extended over Q(zeta_L). */
Num eigen_inner(const rootsys::CoxeterData& cox,
                const std::vector<Num>& x, const std::vector<Num>& y);

/**
 * beta_{i,l} for a label l = (a,n) depends only on a:
 *   pos(i,a) = (alpha_i | H[a])      i.e. beta_{i,m} with m = m_{a+1}+n*h
 *   neg(i,a) = (alpha_i | H[N-1-a])  i.e. beta_{i,-m}
 * Entries are exact at the eigenbasis conductor.
 */
struct BetaTable {
  unsigned conductor;
  int cutoff;  // advertised max label weight (entries are per-a, so any m works)
  std::vector<std::vector<Num>> pos_, neg_;

  const Num& pos(int i, int a) const { return pos_.at(i).at(a); }
  const Num& neg(int i, int a) const { return neg_.at(i).at(a); }
  int rank() const { return static_cast<int>(pos_.empty() ? 0 : pos_[0].size()); }
};

BetaTable beta_table(const rootsys::CoxeterData& cox, const Eigenbasis& basis,
                     int cutoff);

/**
 * The pairing identity sum_{l: wt l = m} beta_{i,l} beta_{i,-l}
 * = sum_{k=1}^{h} eta^{m k} (alpha_i | M^k alpha_i), exact in Q(zeta_L).
 * (The left side has one term per label of weight m — two for the doubled
 * D_even weights, none when h | m.)
 */
bool beta_pairing_identity(const rootsys::CoxeterData& cox,
                           const BetaTable& beta, int i, int m);

/** Truncated series in x = w/zeta; index = power of x; constant term 1. */
using BSeries = std::vector<Num>;

/** prod_{k=1}^{h} (1 - eta^k x)^{-(alpha_i|M^k alpha_i)} to order K, in Q(zeta_h). */
BSeries b_series_product(const rootsys::CoxeterData& cox, int i, int K);

/**
 * exp( sum_{labels l, wt l <= K} beta_{i,-l} beta_{i,l} x^{wt l} / wt l )
 * to order K, at the beta-table conductor.
 */
BSeries b_series_exponential(const rootsys::CoxeterData& cox,
                             const BetaTable& beta, int i, int K);

/** N(h+1)/(12h) = h^{-2} (rho|rho); the exact value of sum_i a_i. */
Rational target_sum(const rootsys::CoxeterData& cox);

/**
 * a_i = h^{-1} prod_{k=1}^{h-1} (1 - eta^k)^{(alpha_i|M^k alpha_i)},
 * exact in Q(zeta_h); certified real (conjugation-invariant), positive,
 * with sum_i a_i = target_sum exactly.  Throws if certification fails.
 */
std::vector<Num> compute_a(const rootsys::CoxeterData& cox);

/**
 * Corollary route to 1/a_i: the exact value at x = 1 of
 * (1-x)(1-x^h) prod_{k=1}^{h} (1 - eta^k x)^{-(alpha_i|M^k alpha_i)}
 * after symbolic cancellation of the (1-x)^2 factor.  Exact in Q(zeta_h);
 * equals compute_a(cox)[i]^{-1}.
 */
Num limit_corollary_check(const rootsys::CoxeterData& cox, int i);

/**
 * Singularity-side coefficients via the ratio characterization:
 *   ratio_i = prod_{roots alpha} |(H_1|alpha)|^{-(alpha_i|alpha)^2 / 2},
 *   a~_i = target_sum * ratio_i / sum_j ratio_j,
 * evaluated at `digits` decimal digits (magnitude convention; the
 * half-integer exponents make the principal-branch phase ambiguous, and the
 * a_i = a~_i verification certifies the convention a posteriori).
 */
std::vector<Real> compute_a_tilde(const rootsys::CoxeterData& cox,
                                  const Eigenbasis& basis, unsigned digits);

/** Diagnostic: principal-branch phase sums -sum (alpha_i|alpha)^2/2 * arg(H_1|alpha). */
std::vector<Real> a_tilde_phase_sums(const rootsys::CoxeterData& cox,
                                     const Eigenbasis& basis, unsigned digits);

struct OrbitReport {
  rootsys::Root rep;
  Num a_exact;                          // conductor h
  std::optional<Rational> a_rational;   // present iff a_i is rational
  Real a_value;                         // real embedding of a_exact
  Real a_tilde;
  Real residual;                        // |a_i - a~_i| / a_i
  Real phase_sum;                       // diagnostic
};

struct CoefficientReport {
  rootsys::RootSystemId id;
  int rank = 0;
  int h = 0;
  std::vector<int> exponents;
  unsigned digits = 0;
  Rational target;                      // N(h+1)/(12h)
  std::vector<OrbitReport> orbits;
  bool sum_exact = false;               // sum a_i == target, exact
  bool all_positive = false;
  Real max_residual;
  bool theorem_pass = false;            // max residual < 10^{-digits/2} + exact checks
};

/**
 * Full theorem check for one type at the given precision.  `perturb`
 * multiplies a~_1 by (1 + perturb) before the residual comparison — a test
 * hook proving the tolerance can fail.
 */
CoefficientReport verify_theorem(rootsys::RootSystemId id, unsigned digits,
                                 double perturb = 0.0);

}  // namespace adeh::coeffs
