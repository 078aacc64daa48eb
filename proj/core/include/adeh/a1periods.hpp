#pragma once

#include "adeh/cyclo.hpp"

#include <vector>

/**
 * The A_1 Picard-Lefschetz phase integrals on the real slice: the period
 * 2/sqrt(2(lambda-u)), the regularized phase integral
 *
 *   I(s, eps) = int_{-1}^{-eps} 4 du / (sqrt(2(s-u)) sqrt(2(-u)))
 *             + int_{1}^{s+eps} 2 dxi / xi,
 *
 * its closed form via the antiderivative -2 ln(-u + s/2 + sqrt((s-u)(-u))),
 * the 4 ln 2 limit, and the direct evaluation of a~_1 = 1/8 with the
 * logarithmic cutoff divergences cancelled explicitly.
 */
namespace adeh::a1periods {

using cyclo::Real;

struct A1PhaseParams {
  Real s;        // separation lambda - mu, >= 0
  Real epsilon;  // discriminant cutoff, >= 0; s + epsilon > 0
  unsigned digits = 50;
};

struct QuadratureConfig {
  double tolerance = 1e-30;  // termination target for the adaptive rule
  unsigned max_depth = 18;   // maximum interval halvings
};

/** The A_1 period 2/sqrt(2(lambda-u)); requires lambda > u. */
Real period_a1(const Real& lambda, const Real& u);

/** Exact antiderivative route; handles eps = 0 (s > 0) and s = 0 (eps > 0). */
Real phase_integral_closed(const A1PhaseParams& p);

/**
 * Adaptive Gauss-Kronrod route after the substitution u = -t^2, which
 * removes the inverse-square-root endpoint singularity:
 *   int_{sqrt eps}^{1} 4 dt / sqrt(t^2 + s) + 2 ln(s + eps).
 */
Real phase_integral_quadrature(const A1PhaseParams& p,
                               const QuadratureConfig& q);

/**
 * a~_1 = h exp(-int_{-1}^{-eps} (I o I) du - int_1^eps 2 dxi/xi - 4 ln 2)
 * for h = 2: the two cutoff integrals are +-2 ln eps and cancel at every
 * eps (checked numerically at several cutoffs), leaving 2 e^{-4 ln 2} = 1/8.
 */
Real a_tilde_a1_direct(unsigned digits);

struct PhaseStudyRow {
  Real s;
  Real epsilon;
  Real closed_form;
  Real quadrature;
  Real abs_diff;
};

/**
 * Closed form vs quadrature over a parameter grid, mirroring the
 * order-of-limits argument: s = 0 rows vanish identically, the eps = 0
 * column tends to 4 ln 2 as s -> 0.
 */
std::vector<PhaseStudyRow> limit_commutation_study(
    const std::vector<A1PhaseParams>& grid, const QuadratureConfig& q);

/** A default study grid: eps = 0, s = 0 and diagonal s = eps sweeps. */
std::vector<A1PhaseParams> default_study_grid(unsigned digits);

}  // namespace adeh::a1periods
