#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * Exact arithmetic in cyclotomic fields Q(zeta_L), zeta_L = e^{2*pi*i/L}.
 *
 * Elements are stored as rational coordinate vectors in the reduced power
 * basis 1, zeta, ..., zeta^{phi(L)-1} modulo the L-th cyclotomic polynomial
 * Phi_L, so equality is literal coordinate equality and rationality is
 * decidable by inspection.  This module also provides exact kernel solving
 * over such fields and a high-precision complex embedding.
 */
namespace adeh::cyclo {

using Rational = mpq_class;

/** Arbitrary-precision real (MPFR-backed, precision set at runtime). */
using Real = boost::multiprecision::mpfr_float;

/**
 * Scoped change of the default decimal precision for Real.
 * Restores the previous default on destruction.
 */
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits)
      : saved_(Real::default_precision()) {
    Real::default_precision(digits);
  }
  ~PrecisionGuard() { Real::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

/** Exact conversion of a rational to a Real at the current precision. */
Real to_real(const Rational& q);

/** Minimal arbitrary-precision complex value (no expression templates). */
struct Complex {
  Real re, im;

  Complex() : re(0), im(0) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
  Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
  Complex operator*(const Complex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
};

/** |z| and the principal argument atan2(im, re). */
Real abs(const Complex& z);
Real arg(const Complex& z);

/**
 * Coefficients of the L-th cyclotomic polynomial Phi_L, low degree first,
 * computed by exact division through x^L - 1 = prod_{d|L} Phi_d.
 * The result is monic of degree phi(L) with integer coefficients.
 */
std::vector<mpz_class> cyclotomic_polynomial(unsigned L);

/**
 * Immutable per-conductor data: Phi_L, the reduction table for powers
 * x^{phi(L)} .. x^{2*phi(L)-2}, and the reduced coordinates of every power
 * zeta^j, j = 0..L-1 (used by conjugation and by embeddings into larger
 * fields).  Instances are interned; Field::of returns a stable reference.
 */
class Field {
 public:
  static const Field& of(unsigned conductor);

  unsigned conductor() const { return L_; }
  unsigned degree() const { return deg_; }
  const std::vector<mpz_class>& phi() const { return phi_; }

  /** Reduced coordinates of x^{degree()+t}, t = 0..degree()-2. */
  const std::vector<mpz_class>& reduction(unsigned t) const {
    return red_.at(t);
  }

  /** Reduced coordinates of zeta^j for j in [0, L). */
  const std::vector<Rational>& zeta_power(unsigned j) const {
    return zeta_pow_.at(j % L_);
  }

 private:
  explicit Field(unsigned L);

  unsigned L_;
  unsigned deg_;
  std::vector<mpz_class> phi_;
  std::vector<std::vector<mpz_class>> red_;
  std::vector<std::vector<Rational>> zeta_pow_;
};

/**
 * An element of Q(zeta_L) in the reduced power basis.
 *
 * All binary operations require equal conductors (no implicit coercion);
 * use lift() to move into a larger field first.  Operations are exact.
 */
class Num {
 public:
  /** Zero in Q = Q(zeta_1). */
  Num() : Num(1) {}

  /** Zero at the given conductor. */
  explicit Num(unsigned conductor)
      : fld_(&Field::of(conductor)),
        coords_(fld_->degree()) {}

  static Num zero(unsigned conductor) { return Num(conductor); }
  static Num one(unsigned conductor) { return rational(1, conductor); }
  static Num rational(const Rational& q, unsigned conductor = 1);

  /** zeta_L itself. */
  static Num zeta(unsigned conductor) { return zeta_power(conductor, 1); }

  /** zeta_L^k, any integer k (reduced mod L). */
  static Num zeta_power(unsigned conductor, long k);

  /** From explicit reduced coordinates (must have length phi(conductor)). */
  static Num from_coords(unsigned conductor, std::vector<Rational> coords);

  unsigned conductor() const { return fld_->conductor(); }
  const Field& field() const { return *fld_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool operator==(const Num& o) const;
  bool operator!=(const Num& o) const { return !(*this == o); }

  Num operator-() const;
  Num operator+(const Num& o) const;
  Num operator-(const Num& o) const;
  Num operator*(const Num& o) const;
  Num operator*(const Rational& q) const;
  Num operator/(const Num& o) const { return *this * o.inverse(); }
  Num& operator+=(const Num& o) { return *this = *this + o; }
  Num& operator-=(const Num& o) { return *this = *this - o; }
  Num& operator*=(const Num& o) { return *this = *this * o; }
  Num& operator*=(const Rational& q) { return *this = *this * q; }

  /** Multiplicative inverse via the extended Euclidean algorithm mod Phi_L. */
  Num inverse() const;

  /** Integer power; negative exponents go through inverse(). */
  Num pow(long e) const;

  /** Complex conjugation zeta -> zeta^{-1}. */
  Num conj() const;

  /** The rational value if all non-constant coordinates vanish. */
  std::optional<Rational> as_rational() const;
  bool is_rational() const { return as_rational().has_value(); }

  /** Embed into Q(zeta_M); requires conductor() | M. */
  Num lift(unsigned M) const;

  /**
   * Evaluate at zeta = e^{2*pi*i/L} with >= digits correct decimal digits.
   * Absolute error is bounded by (sum of |coords|) * 10^{-(digits+10)}:
   * each zeta^j is computed to relative 10^{-(digits+10)} on the unit circle.
   */
  Complex to_complex(unsigned digits) const;

  /** Debug form, e.g. "1/2 - 1/10*z^2" with z = zeta_L. */
  std::string str() const;

 private:
  const Field* fld_;
  std::vector<Rational> coords_;

  void require_same_field(const Num& o) const;
};

/**
 * Exact kernel of a rectangular matrix over Q(zeta_L) via Gaussian
 * elimination with exact field division.  Returns the canonical echelon
 * kernel basis (one vector per free column, unit in the free coordinate);
 * every returned v satisfies A*v = 0 coordinate-exactly.
 */
std::vector<std::vector<Num>> solve_kernel(
    const std::vector<std::vector<Num>>& A);

/**
 * Dense polynomial in one variable with Num coefficients (used for the
 * rational-function manipulations behind the a_i limit corollary).
 */
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Num> coeffs) : c_(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(const Num& c) { return Poly({c}); }

  /** -1 for the zero polynomial. */
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Num>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;

  /** Exact quotient; throws if the division leaves a remainder. */
  Poly divide_exact(const Poly& divisor) const;

  Num eval(const Num& x) const;

 private:
  std::vector<Num> c_;  // low degree first, no trailing zeros
  void normalize();
};

}  // namespace adeh::cyclo
