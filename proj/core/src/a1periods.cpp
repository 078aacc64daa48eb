#include "adeh/a1periods.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>

namespace adeh::a1periods {

namespace {

/**
 * Fixed-precision type for the quadrature internals: the Gauss-Kronrod
 * abscissae are cached statically at the precision of first use, so they
 * must not depend on the ambient mpfr default precision.
 */
using QuadReal = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<100>>;

void check_params(const A1PhaseParams& p) {
  if (p.s < 0 || p.epsilon < 0 || !(p.s + p.epsilon > 0))
    throw std::domain_error(
        "phase integral: need s >= 0, eps >= 0, s + eps > 0");
}

Real four_ln_two() { return 4 * log(Real(2)); }

}  // namespace

Real period_a1(const Real& lambda, const Real& u) {
  if (!(lambda > u)) throw std::domain_error("period_a1: need lambda > u");
  return 2 / sqrt(2 * (lambda - u));
}

Real phase_integral_closed(const A1PhaseParams& p) {
  check_params(p);
  cyclo::PrecisionGuard guard(p.digits + 10);
  const Real s(p.s), eps(p.epsilon);
  // F(u) = -2 ln(-u + s/2 + sqrt((s-u)(-u))) evaluated at -eps and -1,
  // plus the logarithmic xi-integral
  Real upper = eps + s / 2 + sqrt(eps * (eps + s));
  Real lower = 1 + s / 2 + sqrt(1 + s);
  return 2 * log(lower) - 2 * log(upper) + 2 * log(s + eps);
}

Real phase_integral_quadrature(const A1PhaseParams& p,
                               const QuadratureConfig& q) {
  check_params(p);
  if (!(q.tolerance > 0))
    throw std::invalid_argument("quadrature: tolerance must be > 0");
  const QuadReal s(p.s), eps(p.epsilon);
  auto f = [&s](const QuadReal& t) -> QuadReal { return 4 / sqrt(t * t + s); };
  QuadReal error = 0;
  QuadReal val =
      boost::math::quadrature::gauss_kronrod<QuadReal, 61>::integrate(
          f, sqrt(eps), QuadReal(1), q.max_depth, QuadReal(q.tolerance),
          &error);
  if (!(error < QuadReal(1e-20) * (abs(val) + 1)))
    throw std::runtime_error("quadrature did not converge");
  val += 2 * log(s + eps);
  cyclo::PrecisionGuard guard(p.digits + 10);
  return static_cast<Real>(val);
}

Real a_tilde_a1_direct(unsigned digits) {
  if (digits < 15)
    throw std::invalid_argument("a_tilde_a1_direct: digits >= 15");
  cyclo::PrecisionGuard guard(digits + 10);
  // exponent(eps) = -(-2 ln eps) - (2 ln eps) - 4 ln 2; the cutoff pieces
  // cancel at every eps, which we verify before taking the value
  auto exponent = [](const Real& eps) {
    Real cycle_piece = -2 * log(eps);  // int_{-1}^{-eps} (I o I) du
    Real xi_piece = 2 * log(eps);      // int_1^{eps} 2 dxi / xi
    return -cycle_piece - xi_piece - four_ln_two();
  };
  Real e1 = exponent(pow(Real(10), -1));
  Real e2 = exponent(pow(Real(10), -7));
  Real drift = abs(e1 - e2);
  if (!(drift < pow(Real(10), -static_cast<int>(digits))))
    throw std::logic_error("cutoff divergences failed to cancel");
  return 2 * exp(e1);
}

std::vector<PhaseStudyRow> limit_commutation_study(
    const std::vector<A1PhaseParams>& grid, const QuadratureConfig& q) {
  std::vector<PhaseStudyRow> rows;
  rows.reserve(grid.size());
  for (const A1PhaseParams& p : grid) {
    PhaseStudyRow row;
    row.s = p.s;
    row.epsilon = p.epsilon;
    row.closed_form = phase_integral_closed(p);
    row.quadrature = phase_integral_quadrature(p, q);
    row.abs_diff = abs(row.closed_form - row.quadrature);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<A1PhaseParams> default_study_grid(unsigned digits) {
  cyclo::PrecisionGuard guard(digits + 10);
  std::vector<A1PhaseParams> grid;
  auto tenpow = [](int e) { return pow(Real(10), e); };
  // eps = 0 column: s -> 0 approaches 4 ln 2
  for (int e = -1; e >= -6; e -= 1)
    grid.push_back({tenpow(e), Real(0), digits});
  // s = 0 row: identically zero
  for (int e = -2; e >= -6; e -= 2)
    grid.push_back({Real(0), tenpow(e), digits});
  // diagonal s = eps: converges to 4 ln 2
  for (int e = -1; e >= -5; e -= 1)
    grid.push_back({tenpow(e), tenpow(e), digits});
  return grid;
}

}  // namespace adeh::a1periods
