#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_bridge.hpp"

#include <adeh/coeffs.hpp>
#include <adeh/fock.hpp>

// Cross-validation of the library's Hirota engine against the stand-alone
// dense-representation oracle on A_1, coefficient-exact through the oracle's
// certified weight (5).  Both engines receive identical tau inputs; their
// graded residuals must agree term by term, not merely both vanish.

using namespace adeh;
using cyclo::Num;
using cyclo::Rational;
using fock::FockPoly;
using fock::Label;
using fock::LabelSet;

namespace {

struct Rig {
  rootsys::CoxeterData cox = rootsys::coxeter(
      rootsys::build(rootsys::RootSystemId::parse("A_1")));
  coeffs::Eigenbasis basis = coeffs::eigenbasis(cox);
  coeffs::BetaTable beta = coeffs::beta_table(cox, basis, 5);
  std::vector<Num> a = coeffs::compute_a(cox);
  LabelSet vars{cox, 5};

  FockPoly from_oracle(const a1oracle::Poly& p) const {
    FockPoly out(&vars, 5);
    for (const auto& [m, c] : p) {
      fock::Monomial mono;
      for (int j = 0; j < 3; ++j)
        if (m[static_cast<size_t>(j)] > 0)
          mono.emplace_back(vars.index(Label{1, j}),
                            m[static_cast<size_t>(j)]);
      out.add_term(mono, Num::rational(c, beta.conductor));
    }
    return out;
  }

  // Graded residuals from both engines on the same input, oracle-encoded.
  std::pair<std::map<int, a1oracle::Poly2>, std::map<int, a1oracle::Poly2>>
  both(const FockPoly& tau) const {
    const auto engine = fock::hirota_residual(cox, a, beta, tau, 5);
    const auto oracle = a1oracle::hirota_residual(bridge::to_oracle_poly(tau));
    return {bridge::to_oracle_residual(engine, a1oracle::kWeightCap),
            bridge::certified_part(oracle)};
  }
};

a1oracle::Q q(long n, long d) {
  a1oracle::Q r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("residuals agree on the vacuum and on y1 (both zero)") {
  const Rig rig;
  const auto one = FockPoly::one(&rig.vars, 5, rig.beta.conductor);
  const auto [eng1, orc1] = rig.both(one);
  CHECK(eng1.empty());
  CHECK(orc1.empty());

  const auto y1 =
      FockPoly::variable(&rig.vars, 5, Label{1, 0}, rig.beta.conductor);
  const auto [eng2, orc2] = rig.both(y1);
  CHECK(eng2.empty());
  CHECK(orc2.empty());
}

TEST_CASE("residuals agree term-by-term on the y1^2 control (both nonzero)") {
  const Rig rig;
  const auto y1 =
      FockPoly::variable(&rig.vars, 5, Label{1, 0}, rig.beta.conductor);
  const auto [eng, orc] = rig.both(y1.mul(y1));
  REQUIRE_FALSE(eng.empty());
  CHECK(eng == orc);
  REQUIRE(eng.count(4) == 1);
  CHECK(eng.at(4).size() == 9);
}

TEST_CASE("residuals agree on mixed non-tau polynomials") {
  const Rig rig;
  const unsigned L = rig.beta.conductor;
  const auto y1 = FockPoly::variable(&rig.vars, 5, Label{1, 0}, L);
  const auto y3 = FockPoly::variable(&rig.vars, 5, Label{1, 1}, L);
  const auto y5 = FockPoly::variable(&rig.vars, 5, Label{1, 2}, L);

  FockPoly p = FockPoly::one(&rig.vars, 5, L) + y3 * Num::rational(q(2, 3), L);
  p = p + y1.mul(y1).mul(y3) * Num::rational(q(-5, 1), L) + y5;
  const auto [eng, orc] = rig.both(p);
  CHECK(eng == orc);  // equality of full graded maps, zero or not
}

TEST_CASE("engine soliton translates to the oracle soliton (z0 mirrored)") {
  const Rig rig;
  // beta = -2 in the engine vs +2 in the oracle: z0 = -1 on the engine side
  // reproduces the oracle's z0 = +1 soliton exactly, and vice versa.
  const auto eng_sol =
      fock::tau_one_soliton(rig.vars, rig.beta, 0, -1, 1, 5);
  CHECK(bridge::to_oracle_poly(eng_sol) == a1oracle::soliton_tau(1, 1));

  const auto eng_sol_pos =
      fock::tau_one_soliton(rig.vars, rig.beta, 0, 1, 1, 5);
  CHECK(bridge::to_oracle_poly(eng_sol_pos) == a1oracle::soliton_tau(-1, 1));
}

TEST_CASE("both engines accept the same solitons as tau functions") {
  const Rig rig;
  for (long z0 : {1L, -1L, 2L}) {
    CAPTURE(z0);
    const auto tau = fock::tau_one_soliton(rig.vars, rig.beta, 0,
                                           Rational(z0), 1, 5);
    const auto [eng, orc] = rig.both(tau);
    CHECK(eng.empty());
    CHECK(orc.empty());
  }
}

TEST_CASE("oracle-built tau fed through the engine round-trips") {
  const Rig rig;
  const auto oracle_tau = a1oracle::soliton_tau(q(1, 2), q(3, 1));
  const auto engine_tau = rig.from_oracle(oracle_tau);
  CHECK(bridge::to_oracle_poly(engine_tau) == oracle_tau);
  const auto [eng, orc] = rig.both(engine_tau);
  CHECK(eng.empty());
  CHECK(orc.empty());
}
