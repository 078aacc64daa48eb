#pragma once

#include "adeh/coeffs.hpp"
#include "adeh/cyclo.hpp"
#include "adeh/rootsys.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

/**
 * Truncated weight-graded Fock space C[y_l] over the label set
 * E_+ = {(a,n) : 1 <= a <= N, n >= 0}, wt (a,n) = m_a + n*h, with exact
 * cyclotomic coefficients; the principal-realization vertex operators
 * Gamma^{+-alpha_i}(zeta); the OPE identity checker; and the Hirota
 * bilinear residue engine.
 *
 * Everything is graded by total weight (deg y_l = wt l) and every operator
 * in play is weight-homogeneous of degree 0 once powers of the formal
 * variable are counted.  Applying an operator at zeta = 1 and regrading the
 * result by weight therefore recovers each zeta-power slice exactly: the
 * coefficient of zeta^p on a weight-b input is the weight-(b+p) component.
 * All truncation is by total weight; multiplication operators only raise
 * weight, so a cap K loses nothing below K.
 */
namespace adeh::fock {

using cyclo::Num;
using cyclo::Rational;

/** A Fock variable label (a,n); a is 1-based as in E_+. */
struct Label {
  int a;
  int n;
  bool operator==(const Label& o) const { return a == o.a && n == o.n; }
  bool operator<(const Label& o) const {
    return a != o.a ? a < o.a : n < o.n;
  }
};

/**
 * The labels of weight <= weight_cap for a given Coxeter datum, indexed
 * densely and sorted by (weight, a).  For D_N with N even, two distinct
 * labels share each weight congruent to h/2 mod h — labels, not weights,
 * are the identity of a variable.
 */
class LabelSet {
 public:
  LabelSet(const rootsys::CoxeterData& cox, int weight_cap);

  int size() const { return static_cast<int>(labels_.size()); }
  Label label(int idx) const { return labels_.at(idx); }
  int weight(int idx) const { return weights_.at(idx); }
  int index(Label l) const;
  std::optional<int> find(Label l) const;
  int weight_cap() const { return cap_; }
  int h() const { return h_; }
  int rank() const { return rank_; }
  /** m_a for 1-based a. */
  int exponent(int a) const { return exps_.at(a - 1); }
  std::string var_name(int idx) const;

 private:
  int h_, rank_, cap_;
  std::vector<int> exps_;
  std::vector<Label> labels_;
  std::vector<int> weights_;
  std::map<std::pair<int, int>, int> index_;
};

/** Sparse monomial: (variable index, exponent > 0) pairs, sorted by index. */
using Monomial = std::vector<std::pair<int, int>>;

int monomial_weight(const LabelSet& vars, const Monomial& m);

/**
 * Sparse polynomial with Num coefficients and a hard total-weight cap:
 * terms above the cap are discarded on insertion (truncation semantics).
 */
class FockPoly {
 public:
  FockPoly(const LabelSet* vars, int cap) : vars_(vars), cap_(cap) {}

  static FockPoly one(const LabelSet* vars, int cap, unsigned conductor);
  static FockPoly variable(const LabelSet* vars, int cap, Label l,
                           unsigned conductor);

  const LabelSet& vars() const { return *vars_; }
  int cap() const { return cap_; }
  const std::map<Monomial, Num>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /** Accumulate c on monomial m; drops zero results and overweight terms. */
  void add_term(const Monomial& m, const Num& c);

  FockPoly operator+(const FockPoly& o) const;
  FockPoly operator-(const FockPoly& o) const;
  FockPoly operator*(const Num& c) const;

  /** Truncating product. */
  FockPoly mul(const FockPoly& o) const;

  std::string str() const;

 private:
  const LabelSet* vars_;
  int cap_;
  std::map<Monomial, Num> terms_;
};

/** Multiplication by y_l and d/dy_l (building blocks of everything else). */
FockPoly mul_variable(const FockPoly& p, int var_idx);
FockPoly diff_variable(const FockPoly& p, int var_idx);

/**
 * The principal Heisenberg action on the Fock space:
 * sign = -1 gives H_{-wt l} |-> wt(l) * y_l, sign = +1 gives d/dy_l.
 */
std::function<FockPoly(const FockPoly&)> heisenberg_action(Label l, int sign);

/** Split into weight-homogeneous components (the Euler grading). */
std::map<int, FockPoly> euler_grading(const FockPoly& p);

/** Laurent block: zeta-power -> coefficient polynomial. */
using LaurentBlock = std::map<int, FockPoly>;

/**
 * Gamma^{sign * alpha_i}(zeta) applied to p, as a Laurent block with output
 * weight capped at W:
 *   exp(sign * sum_l beta_{i,l} y_l zeta^{wt l})
 *   o exp(-sign * sum_l beta_{i,-l} d/dy_l zeta^{-wt l} / wt l),
 * derivative exponential applied first.  For weight-homogeneous input of
 * weight b, the slice at zeta^p is weight-homogeneous of weight b+p and is
 * exact whenever b+p <= W.
 */
LaurentBlock apply_vertex(const coeffs::BetaTable& beta, int i, int sign,
                          const FockPoly& p, int W);

struct OpeReport {
  bool pass = false;
  long long compared = 0;     // matchable bidegree coefficients checked
  long long mismatched = 0;
  int monomials = 0;          // input basis monomials exercised
  std::string first_mismatch; // empty when pass
};

/**
 * Exact check of Gamma^{alpha_i}(zeta) Gamma^{-alpha_i}(w)
 *   = B_i(w/zeta) * :Gamma^{alpha_i}(zeta) Gamma^{-alpha_i}(w):
 * on every basis monomial of weight <= W, with B_i expanded to order K.
 * A bidegree (p,q) on a weight-b input is matchable iff q <= K - b and
 * 0 <= b+p+q <= K: then the B-series tail cannot reach it and both sides
 * are exact under the internal weight cap K.
 */
OpeReport ope_check(const rootsys::CoxeterData& cox,
                    const coeffs::BetaTable& beta, int i, int W, int K);

/** Doubled-variable monomial (left factor, right factor). */
struct TensorMonomial {
  Monomial left, right;
  bool operator<(const TensorMonomial& o) const {
    return left != o.left ? left < o.left : right < o.right;
  }
  bool operator==(const TensorMonomial& o) const {
    return left == o.left && right == o.right;
  }
};

/** Sparse polynomial on tau (x) tau variables, capped by total weight. */
class TensorFockPoly {
 public:
  TensorFockPoly(const LabelSet* vars, int cap) : vars_(vars), cap_(cap) {}

  const LabelSet& vars() const { return *vars_; }
  int cap() const { return cap_; }
  const std::map<TensorMonomial, Num>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const TensorMonomial& m, const Num& c);
  int total_weight(const TensorMonomial& m) const;

  std::string str() const;
  std::string leading_term() const;

 private:
  const LabelSet* vars_;
  int cap_;
  std::map<TensorMonomial, Num> terms_;
};

struct HirotaResidual {
  int weight_cap = 0;        // engine cap W
  int certified_weight = 0;  // = W: grading makes every component <= W exact
  /** Nonzero weight components of LHS - RHS, keyed by total weight. */
  std::map<int, TensorFockPoly> nonzero_components;
  bool zero_to_certified = true;
  int first_nonzero_weight = -1;
};

/**
 * Graded residual of the bilinear identity
 *   Res_zeta zeta^{-1} sum_i a_i (Gamma^{alpha_i} (x) Gamma^{-alpha_i})(tau (x) tau)
 *   = h^{-2}(rho|rho)(tau (x) tau)
 *     + h^{-1} sum_l wt(l) (y'_l - y''_l)(d/dy'_l - d/dy''_l)(tau (x) tau).
 * The residue pairs zeta^p with zeta^{-p}, so total weight is preserved and
 * every component of weight <= W is exact for a tau known to weight W.
 */
HirotaResidual hirota_residual(const rootsys::CoxeterData& cox,
                               const std::vector<Num>& a,
                               const coeffs::BetaTable& beta,
                               const FockPoly& tau, int W);

/** 1 + c * exp(sum_{wt l <= W} beta_{i,l} y_l z0^{wt l}), truncated at W. */
FockPoly tau_one_soliton(const LabelSet& vars, const coeffs::BetaTable& beta,
                         int i, const Rational& z0, const Rational& c, int W);

/**
 * The variable dictionary to the singularity-side Hirota form:
 * y_{(a,n)} |-> q_n^a / prod_{r=0}^{n} (m_a + r*h)   (hbar = 1).
 * rescale_factor returns that product; the rescale/unrescale pair rewrites
 * a polynomial's coefficients accordingly (round-trip exact).
 */
mpz_class rescale_factor(const LabelSet& vars, Label l);
FockPoly rescale_to_singularity_variables(const FockPoly& p);
FockPoly unrescale_from_singularity_variables(const FockPoly& p);

/**
 * Parse a tau polynomial in the CLI grammar: terms joined by '+', factors
 * joined by '*', each factor an integer, a rational p/q, or y(a,n)[^e].
 * Example: "1 + 2*y(1,0)^2*y(1,1)".  Throws std::invalid_argument.
 */
FockPoly parse_tau_poly(const LabelSet& vars, unsigned conductor,
                        const std::string& body, int W);

}  // namespace adeh::fock
