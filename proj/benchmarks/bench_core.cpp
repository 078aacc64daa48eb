// Micro-benchmarks for the hot paths: cyclotomic arithmetic, root-system
// construction, exact coefficient computation, and the Hirota engine.

#include <benchmark/benchmark.h>

#include <adeh/coeffs.hpp>
#include <adeh/cyclo.hpp>
#include <adeh/fock.hpp>
#include <adeh/rootsys.hpp>

using namespace adeh;
using cyclo::Num;

namespace {

rootsys::CoxeterData cox_of(const char* name) {
  return rootsys::coxeter(rootsys::build(rootsys::RootSystemId::parse(name)));
}

Num dense_element(unsigned L, long seed) {
  // Deterministic element touching every power-basis coordinate.
  Num x = Num::zero(L);
  const unsigned deg = cyclo::Field::of(L).degree();
  for (unsigned j = 0; j < deg; ++j) {
    cyclo::Rational c(seed + static_cast<long>(j), 7 + (j % 5));
    c.canonicalize();
    x += Num::zeta_power(L, static_cast<long>(j)) * c;
  }
  return x;
}

void bm_cyclo_mul_zeta30(benchmark::State& state) {
  const Num x = dense_element(30, 3);
  const Num y = dense_element(30, 11);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(bm_cyclo_mul_zeta30);

void bm_cyclo_inverse_zeta30(benchmark::State& state) {
  const Num x = dense_element(30, 5);
  for (auto _ : state) benchmark::DoNotOptimize(x.inverse());
}
BENCHMARK(bm_cyclo_inverse_zeta30);

void bm_rootsys_build_e8(benchmark::State& state) {
  const auto id = rootsys::RootSystemId::parse("E_8");
  for (auto _ : state) benchmark::DoNotOptimize(rootsys::build(id));
}
BENCHMARK(bm_rootsys_build_e8)->Unit(benchmark::kMillisecond);

void bm_coxeter_e8(benchmark::State& state) {
  const auto rs = rootsys::build(rootsys::RootSystemId::parse("E_8"));
  for (auto _ : state) benchmark::DoNotOptimize(rootsys::coxeter(rs));
}
BENCHMARK(bm_coxeter_e8)->Unit(benchmark::kMillisecond);

void bm_compute_a_e8(benchmark::State& state) {
  const auto cox = cox_of("E_8");
  for (auto _ : state) benchmark::DoNotOptimize(coeffs::compute_a(cox));
}
BENCHMARK(bm_compute_a_e8)->Unit(benchmark::kMillisecond);

void bm_eigenbasis_e6(benchmark::State& state) {
  const auto cox = cox_of("E_6");
  for (auto _ : state) benchmark::DoNotOptimize(coeffs::eigenbasis(cox));
}
BENCHMARK(bm_eigenbasis_e6)->Unit(benchmark::kMillisecond);

void bm_hirota_soliton_a1_w9(benchmark::State& state) {
  const auto cox = cox_of("A_1");
  const auto basis = coeffs::eigenbasis(cox);
  const int W = 9;
  const auto beta = coeffs::beta_table(cox, basis, W);
  const auto a = coeffs::compute_a(cox);
  const fock::LabelSet vars(cox, W);
  const auto tau = fock::tau_one_soliton(vars, beta, 0, 1, 1, W);
  for (auto _ : state)
    benchmark::DoNotOptimize(fock::hirota_residual(cox, a, beta, tau, W));
}
BENCHMARK(bm_hirota_soliton_a1_w9)->Unit(benchmark::kMillisecond);

void bm_ope_check_a1(benchmark::State& state) {
  const auto cox = cox_of("A_1");
  const auto basis = coeffs::eigenbasis(cox);
  const auto beta = coeffs::beta_table(cox, basis, 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(fock::ope_check(cox, beta, 0, 4, 8));
}
BENCHMARK(bm_ope_check_a1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
