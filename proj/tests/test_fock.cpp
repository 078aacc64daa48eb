#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <adeh/fock.hpp>

#include <map>
#include <string>
#include <vector>

using namespace adeh;
using cyclo::Num;
using cyclo::Rational;
using fock::FockPoly;
using fock::Label;
using fock::LabelSet;
using fock::Monomial;

namespace {

Rational q(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

rootsys::CoxeterData cox_of(const std::string& name) {
  return rootsys::coxeter(rootsys::build(rootsys::RootSystemId::parse(name)));
}

struct A1Setup {
  rootsys::CoxeterData cox = cox_of("A_1");
  coeffs::Eigenbasis basis = coeffs::eigenbasis(cox);
  coeffs::BetaTable beta;
  std::vector<Num> a = coeffs::compute_a(cox);

  explicit A1Setup(int cutoff) : beta(coeffs::beta_table(cox, basis, cutoff)) {}
};

}  // namespace

TEST_CASE("label sets enumerate E_+ up to the weight cap") {
  const auto a1 = cox_of("A_1");
  const LabelSet vars(a1, 9);
  REQUIRE(vars.size() == 5);  // weights 1,3,5,7,9
  for (int idx = 0; idx < vars.size(); ++idx) {
    const Label l = vars.label(idx);
    CHECK(l.a == 1);
    CHECK(vars.weight(idx) == 1 + 2 * l.n);
    CHECK(vars.index(l) == idx);
    CHECK(vars.find(l) == idx);
  }
  CHECK_FALSE(vars.find(Label{1, 5}).has_value());  // weight 11 > cap
  CHECK_THROWS_AS(vars.index(Label{2, 0}), std::out_of_range);
  CHECK(vars.h() == 2);
  CHECK(vars.exponent(1) == 1);
  CHECK(vars.var_name(0) == "y(1,0)");

  // D_4: two distinct labels share each weight = 3 mod 6; labels are the
  // identity of a variable, weights are not.
  const auto d4 = cox_of("D_4");
  const LabelSet dvars(d4, 6);
  REQUIRE(dvars.size() == 4);  // (1,0) w1, (2,0) w3, (3,0) w3, (4,0) w5
  CHECK(dvars.weight(1) == 3);
  CHECK(dvars.weight(2) == 3);
  CHECK(dvars.label(1).a != dvars.label(2).a);
}

TEST_CASE("fock polynomial arithmetic respects the weight cap") {
  const auto cox = cox_of("A_1");
  const LabelSet vars(cox, 5);
  const unsigned L = 2;

  const FockPoly one = FockPoly::one(&vars, 5, L);
  const FockPoly y1 = FockPoly::variable(&vars, 5, Label{1, 0}, L);
  const FockPoly y3 = FockPoly::variable(&vars, 5, Label{1, 1}, L);

  CHECK(fock::monomial_weight(vars, Monomial{}) == 0);
  const FockPoly prod = y1.mul(y3);  // weight 4
  REQUIRE(prod.terms().size() == 1);
  CHECK(fock::monomial_weight(vars, prod.terms().begin()->first) == 4);

  // y1^2 * y3 has weight 5 = cap (kept); times y1 again weight 6 (dropped).
  const FockPoly w5 = prod.mul(y1);
  CHECK_FALSE(w5.is_zero());
  CHECK(w5.mul(y1).is_zero());

  const FockPoly sum = one + y1 * Num::rational(Rational(3), L) - y1;
  const auto grading = fock::euler_grading(sum);
  REQUIRE(grading.size() == 2);
  CHECK(grading.count(0) == 1);
  CHECK(grading.count(1) == 1);
  CHECK(grading.at(1).terms().begin()->second ==
        Num::rational(Rational(2), L));
}

TEST_CASE("variable derivation and multiplication are adjoint ladder ops") {
  const auto cox = cox_of("A_1");
  const LabelSet vars(cox, 6);
  const unsigned L = 2;
  const int i1 = vars.index(Label{1, 0});

  const FockPoly one = FockPoly::one(&vars, 6, L);
  const FockPoly y1 = FockPoly::variable(&vars, 6, Label{1, 0}, L);

  CHECK(fock::diff_variable(one, i1).is_zero());
  CHECK(fock::diff_variable(y1, i1).terms() == one.terms());

  const FockPoly y1sq = y1.mul(y1);
  const FockPoly two_y1 = y1 * Num::rational(Rational(2), L);
  CHECK(fock::diff_variable(y1sq, i1).terms() == two_y1.terms());
  CHECK(fock::mul_variable(one, i1).terms() == y1.terms());
}

TEST_CASE("heisenberg action: creation, annihilation, commutator") {
  const auto cox = cox_of("A_1");
  // Cap high enough that no term of create(f) is truncated: the commutator
  // identity is only exact below cap - wt(l).
  const LabelSet vars(cox, 12);
  const unsigned L = 2;
  const Label l{1, 1};  // weight 3
  const auto create = fock::heisenberg_action(l, -1);   // wt * y_l
  const auto annihilate = fock::heisenberg_action(l, +1);  // d/dy_l

  const FockPoly one = FockPoly::one(&vars, 12, L);
  const FockPoly y3 = FockPoly::variable(&vars, 12, l, L);

  // H_{-3} |0> = 3 y_3.
  const FockPoly created = create(one);
  REQUIRE(created.terms().size() == 1);
  CHECK(created.terms().begin()->second == Num::rational(Rational(3), L));

  // d/dy_3 y_3 = 1.
  CHECK(annihilate(y3).terms() == one.terms());

  // Canonical commutation [d/dy_l, wt*y_l] = wt on arbitrary input.
  const FockPoly f = y3.mul(y3) + one;
  const FockPoly comm = annihilate(create(f)) - create(annihilate(f));
  const FockPoly expect = f * Num::rational(Rational(3), L);
  CHECK(comm.terms() == expect.terms());

  // Different labels commute outright.
  const auto create5 = fock::heisenberg_action(Label{1, 2}, -1);
  const FockPoly cross =
      annihilate(create5(f)) - create5(annihilate(f));
  CHECK(cross.is_zero());
}

TEST_CASE("vertex operator on the vacuum reproduces the exponential") {
  A1Setup s(4);
  const LabelSet vars(s.cox, 4);
  const unsigned L = s.beta.conductor;
  const FockPoly one = FockPoly::one(&vars, 4, L);

  const auto block = fock::apply_vertex(s.beta, 0, +1, one, 4);
  // Gamma^{+alpha}(zeta) 1 = exp(sum_m beta y_m zeta^m), beta = -2:
  //   zeta^0: 1, zeta^1: -2 y1, zeta^2: 2 y1^2,
  //   zeta^3: -4/3 y1^3 - 2 y3, zeta^4: 2/3 y1^4 + 4 y1 y3.
  const FockPoly y1 = FockPoly::variable(&vars, 4, Label{1, 0}, L);
  const FockPoly y3 = FockPoly::variable(&vars, 4, Label{1, 1}, L);

  auto coeff = [&](long n, long d) { return Num::rational(q(n, d), L); };
  CHECK(block.at(0).terms() == one.terms());
  CHECK(block.at(1).terms() == (y1 * coeff(-2, 1)).terms());
  CHECK(block.at(2).terms() == (y1.mul(y1) * coeff(2, 1)).terms());
  CHECK(block.at(3).terms() ==
        (y1.mul(y1).mul(y1) * coeff(-4, 3) + y3 * coeff(-2, 1)).terms());
  CHECK(block.at(4).terms() ==
        (y1.mul(y1).mul(y1).mul(y1) * coeff(2, 3) +
         y1.mul(y3) * coeff(4, 1)).terms());

  // Weight homogeneity of every block on a weight-1 input.
  const auto shifted = fock::apply_vertex(s.beta, 0, -1, y1, 4);
  for (const auto& [p, poly] : shifted) {
    if (poly.is_zero()) continue;
    const auto grading = fock::euler_grading(poly);
    REQUIRE(grading.size() == 1);
    CHECK(grading.begin()->first == 1 + p);
  }
}

TEST_CASE("OPE identity holds exactly on a small A_1 window") {
  A1Setup s(8);
  const auto rep = fock::ope_check(s.cox, s.beta, 0, 4, 8);
  CHECK(rep.pass);
  CHECK(rep.mismatched == 0);
  CHECK(rep.compared > 0);
  CHECK(rep.monomials > 0);
  CHECK(rep.first_mismatch.empty());
}

TEST_CASE("hirota residual: tau = 1 is a vacuum solution everywhere") {
  for (const auto& name : {"A_1", "A_2", "D_4"}) {
    CAPTURE(name);
    const auto cox = cox_of(name);
    const auto basis = coeffs::eigenbasis(cox);
    const int W = 5;
    const auto beta =
        coeffs::beta_table(cox, basis, std::max(W, cox.h));
    const auto a = coeffs::compute_a(cox);
    const LabelSet vars(cox, W);
    const auto one = FockPoly::one(&vars, W, beta.conductor);
    const auto res = fock::hirota_residual(cox, a, beta, one, W);
    CHECK(res.zero_to_certified);
    CHECK(res.first_nonzero_weight == -1);
    CHECK(res.nonzero_components.empty());
    CHECK(res.certified_weight == W);
  }
}

TEST_CASE("hirota residual: y(1,0) solves the A_1 hierarchy") {
  // tau = y_1 is the rational one-vertex tau function (tau = x after the
  // dictionary); its residual vanishes identically.  This is why the
  // non-vacuity control below uses y_1^2 instead.
  A1Setup s(6);
  const LabelSet vars(s.cox, 6);
  const auto y1 = FockPoly::variable(&vars, 6, Label{1, 0}, s.beta.conductor);
  const auto res = fock::hirota_residual(s.cox, s.a, s.beta, y1, 6);
  CHECK(res.zero_to_certified);
  CHECK(res.nonzero_components.empty());
}

TEST_CASE("hirota residual: y(1,0)^2 fails at weight 4 (non-vacuity)") {
  A1Setup s(6);
  const LabelSet vars(s.cox, 6);
  const auto y1 = FockPoly::variable(&vars, 6, Label{1, 0}, s.beta.conductor);
  const auto res = fock::hirota_residual(s.cox, s.a, s.beta, y1.mul(y1), 6);
  CHECK_FALSE(res.zero_to_certified);
  CHECK(res.first_nonzero_weight == 4);
  REQUIRE(res.nonzero_components.count(4) == 1);
  const auto& comp = res.nonzero_components.at(4);
  CHECK(comp.terms().size() == 9);
  CHECK(comp.leading_term() == "4 * 1 (x) y\"(1,0)*y\"(1,1)");
}

TEST_CASE("one-soliton tau functions solve the hierarchy") {
  A1Setup s(9);
  const LabelSet vars(s.cox, 9);
  for (const Rational& z0 : {q(1, 1), q(-1, 1), q(2, 1)}) {
    CAPTURE(z0.get_str());
    const auto tau = fock::tau_one_soliton(vars, s.beta, 0, z0, 1, 9);
    const auto res = fock::hirota_residual(s.cox, s.a, s.beta, tau, 9);
    CHECK(res.zero_to_certified);
  }
}

TEST_CASE("soliton at z0 = -1 matches the hand expansion") {
  // beta = -2, so z0 = -1 gives exp(sum 2 y_m) on the odd weights:
  //   2 + 2y1 + 2y1^2 + (4/3)y1^3 + 2y3   at W = 3.
  A1Setup s(3);
  const LabelSet vars(s.cox, 3);
  const auto tau = fock::tau_one_soliton(vars, s.beta, 0, -1, 1, 3);
  const unsigned L = s.beta.conductor;
  const auto y1 = FockPoly::variable(&vars, 3, Label{1, 0}, L);
  const auto y3 = FockPoly::variable(&vars, 3, Label{1, 1}, L);
  auto coeff = [&](long n, long d) { return Num::rational(q(n, d), L); };
  FockPoly expect = FockPoly::one(&vars, 3, L) * coeff(2, 1);
  expect = expect + y1 * coeff(2, 1) + y1.mul(y1) * coeff(2, 1) +
           y1.mul(y1).mul(y1) * coeff(4, 3) + y3 * coeff(2, 1);
  CHECK(tau.terms() == expect.terms());

  // c = 0 collapses to the vacuum.
  const auto vac = fock::tau_one_soliton(vars, s.beta, 0, 1, 0, 3);
  CHECK(vac.terms() == FockPoly::one(&vars, 3, L).terms());
}

TEST_CASE("singularity-variable rescaling round-trips and scales right") {
  const auto cox = cox_of("A_1");
  const LabelSet vars(cox, 7);
  // y(1,n) divides by prod_{r=0..n} (1 + 2r): n=0 -> 1, n=1 -> 3, n=2 -> 15.
  CHECK(fock::rescale_factor(vars, Label{1, 0}) == 1);
  CHECK(fock::rescale_factor(vars, Label{1, 1}) == 3);
  CHECK(fock::rescale_factor(vars, Label{1, 2}) == 15);

  const auto d4 = cox_of("D_4");
  const LabelSet dvars(d4, 9);
  CHECK(fock::rescale_factor(dvars, Label{3, 1}) == 27);  // (3)(3+6)

  const unsigned L = 2;
  FockPoly p = FockPoly::one(&vars, 7, L);
  const auto y1 = FockPoly::variable(&vars, 7, Label{1, 0}, L);
  const auto y3 = FockPoly::variable(&vars, 7, Label{1, 1}, L);
  p = p + y1.mul(y3) * Num::rational(q(5, 7), L) + y3 * Num::rational(3, L);
  const auto there = fock::rescale_to_singularity_variables(p);
  CHECK(there.terms() != p.terms());
  const auto back = fock::unrescale_from_singularity_variables(there);
  CHECK(back.terms() == p.terms());

  // The y3 coefficient moves by exactly the factor 3 (one way or the other);
  // the constant and pure-y1 terms are untouched since their factor is 1.
  const auto it = there.terms().find(Monomial{{vars.index(Label{1, 1}), 1}});
  REQUIRE(it != there.terms().end());
  const Num three = Num::rational(Rational(3), L);
  CHECK((it->second == three * three || it->second == Num::one(L)));
}

TEST_CASE("tau polynomial parser: grammar and failures") {
  const auto cox = cox_of("A_1");
  const LabelSet vars(cox, 6);
  const unsigned L = 2;

  const auto p = fock::parse_tau_poly(vars, L, "1 + 2*y(1,0)^2*y(1,1)", 6);
  const auto y1 = FockPoly::variable(&vars, 6, Label{1, 0}, L);
  const auto y3 = FockPoly::variable(&vars, 6, Label{1, 1}, L);
  FockPoly expect = FockPoly::one(&vars, 6, L) +
                    y1.mul(y1).mul(y3) * Num::rational(Rational(2), L);
  CHECK(p.terms() == expect.terms());

  const auto r = fock::parse_tau_poly(vars, L, "3/4*y(1,0) - y(1,1)", 6);
  FockPoly rexp = y1 * Num::rational(q(3, 4), L) - y3;
  CHECK(r.terms() == rexp.terms());

  CHECK(fock::parse_tau_poly(vars, L, "0", 6).is_zero());

  for (const char* bad :
       {"", "1 +", "y(1,0)^", "y(2,0)", "y(1,9)", "2**3", "q", "y(1,0", "^2",
        "1/0"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(fock::parse_tau_poly(vars, L, bad, 6),
                    std::invalid_argument);
  }
}
