#include "adeh/coeffs.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace adeh::coeffs {

namespace {

Rational make_q(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/** q = s^2 * d0 with d0 a squarefree integer carrying the sign, s > 0. */
std::pair<mpz_class, Rational> squarefree_part(const Rational& q) {
  if (q == 0) throw std::invalid_argument("squarefree_part: zero");
  mpz_class t = q.get_num() * q.get_den();  // q and t differ by den^2
  int sign = sgn(t) < 0 ? -1 : 1;
  mpz_class m = ::abs(t);
  mpz_class d0 = sign;
  for (mpz_class p = 2; p * p <= m; ++p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e & 1) d0 *= p;
  }
  d0 *= m;  // leftover prime
  Rational s2 = q / Rational(d0);
  mpz_class sn = sqrt(s2.get_num()), sd = sqrt(s2.get_den());
  if (sn * sn != s2.get_num() || sd * sd != s2.get_den())
    throw std::logic_error("squarefree_part: non-square cofactor");
  Rational s(sn, sd);
  s.canonicalize();
  return {d0, s};
}

/** Conductor of Q(sqrt(d0)) for squarefree d0: |d0| if d0 = 1 mod 4, else 4|d0|. */
unsigned cond_sqrt(const mpz_class& d0) {
  if (d0 == 1) return 1;
  mpz_class m = ::abs(d0);
  mpz_class r = ((d0 % 4) + 4) % 4;
  mpz_class c = (r == 1) ? m : 4 * m;
  return static_cast<unsigned>(c.get_ui());
}

int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  long r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = (r * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

/**
 * An exact square root of the rational q inside Q(zeta_L), built from Gauss
 * sums: sum_a (a|p) zeta_p^a squares to (-1)^{(p-1)/2} p, and
 * zeta_8 + zeta_8^{-1} = sqrt 2.  Requires cond_sqrt(squarefree part) | L.
 */
Num sqrt_in_field(unsigned L, const Rational& q) {
  auto [d0z, s] = squarefree_part(q);
  if (d0z == 1) return Num::rational(s, L);
  long d0 = d0z.get_si();
  Num y = Num::one(L);
  long m = d0 < 0 ? -d0 : d0;
  for (long p = 2; m > 1; ++p) {
    if (p * p > m) p = m;  // leftover prime
    if (m % p != 0) continue;
    m /= p;
    if (p == 2) {
      if (L % 8 != 0) throw std::logic_error("sqrt_in_field: need 8 | L");
      long t = L / 8;
      y *= Num::zeta_power(L, t) + Num::zeta_power(L, 7 * t);
    } else {
      if (L % p != 0) throw std::logic_error("sqrt_in_field: need p | L");
      long t = L / p;
      Num g = Num::zero(L);
      for (long a = 1; a < p; ++a) {
        Num z = Num::zeta_power(L, a * t);
        g += (legendre(a, p) == 1) ? z : -z;
      }
      y *= g;
    }
  }
  auto y2 = (y * y).as_rational();
  if (!y2) throw std::logic_error("sqrt_in_field: Gauss product not rational");
  if (*y2 == d0) return y * s;
  if (*y2 == -d0) {
    if (L % 4 != 0) throw std::logic_error("sqrt_in_field: need 4 | L");
    return y * Num::zeta_power(L, L / 4) * s;
  }
  throw std::logic_error("sqrt_in_field: Gauss product squared to " +
                         y2->get_str());
}

/** Kernel of (M - lambda I) over the field of lambda. */
std::vector<std::vector<Num>> eigen_kernel(const rootsys::IntMatrix& M,
                                           const Num& lambda) {
  const size_t N = M.size();
  const unsigned L = lambda.conductor();
  std::vector<std::vector<Num>> rows(N, std::vector<Num>(N, Num::zero(L)));
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j) {
      rows[i][j] = Num::rational(M[i][j], L);
      if (i == j) rows[i][j] -= lambda;
    }
  return cyclo::solve_kernel(rows);
}

std::vector<Num> scale_vec(const std::vector<Num>& v, const Num& c) {
  std::vector<Num> r(v);
  for (auto& x : r) x *= c;
  return r;
}

}  // namespace

Num eigen_inner(const rootsys::CoxeterData& cox, const std::vector<Num>& x,
                const std::vector<Num>& y) {
  const int N = cox.rank;
  Num s = Num::zero(x.at(0).conductor());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (cox.cartan[i][j] == 0) continue;
      s += x[i] * y[j] * Rational(cox.cartan[i][j]);
    }
  return s;
}

unsigned eigenbasis_conductor(const rootsys::CoxeterData& cox) {
  const int h = cox.h;
  const int mult =
      static_cast<int>(std::count(cox.exponents.begin(), cox.exponents.end(),
                                  h / 2));
  if (h % 2 != 0 || mult == 0) return static_cast<unsigned>(h);

  // rational kernel of (M + I); its Gram data decides the radical
  auto ker = eigen_kernel(cox.M, Num::rational(-1, 1));
  if (static_cast<int>(ker.size()) != mult)
    throw std::logic_error("eigenvalue -1 multiplicity mismatch");
  Rational probe;
  if (mult == 1) {
    auto c = eigen_inner(cox, ker[0], ker[0]).as_rational();
    probe = Rational(h) / *c;
  } else {
    auto g11 = *eigen_inner(cox, ker[0], ker[0]).as_rational();
    auto g12 = *eigen_inner(cox, ker[0], ker[1]).as_rational();
    auto g22 = *eigen_inner(cox, ker[1], ker[1]).as_rational();
    probe = g12 * g12 - g11 * g22;
    if (probe == 0) throw std::logic_error("degenerate restricted form");
  }
  auto [d0, s] = squarefree_part(probe);
  (void)s;
  return std::lcm(static_cast<unsigned>(h), cond_sqrt(d0));
}

Eigenbasis eigenbasis(const rootsys::CoxeterData& cox) {
  const int N = cox.rank;
  const int h = cox.h;
  const unsigned L = eigenbasis_conductor(cox);
  const unsigned step = L / static_cast<unsigned>(h);

  Eigenbasis basis;
  basis.conductor = L;
  basis.eta_power = step;
  basis.H.assign(N, {});

  auto filled = [&basis](int a) { return !basis.H[a].empty(); };

  for (int a = 0; a < N;) {
    if (filled(a)) {
      ++a;
      continue;
    }
    const int m = cox.exponents[a];
    const Num lambda = basis.eta_h(m);
    const int mult = static_cast<int>(
        std::count(cox.exponents.begin(), cox.exponents.end(), m));

    if (2 * m == h && mult == 2) {
      // D_even: hyperbolic pair inside the 2-dimensional (-1)-eigenspace
      auto ker = eigen_kernel(cox.M, lambda);
      if (ker.size() != 2)
        throw std::logic_error("kernel dimension != exponent multiplicity");
      std::vector<Num> u = ker[0], w = ker[1];
      Rational g11 = *eigen_inner(cox, u, u).as_rational();
      Rational g12 = *eigen_inner(cox, u, w).as_rational();
      Rational g22 = *eigen_inner(cox, w, w).as_rational();
      if (g11 == 0 && g22 == 0) {
        // both generators already isotropic — they are the pair
        basis.H[a] = u;
        Num c12 = eigen_inner(cox, u, w);
        basis.H[a + 1] = scale_vec(w, Num::rational(h, L) * c12.inverse());
      } else {
        if (g22 == 0) {
          std::swap(u, w);
          std::swap(g11, g22);
        }
        Rational delta2 = g12 * g12 - g11 * g22;
        if (delta2 == 0) throw std::logic_error("degenerate restricted form");
        Num delta = sqrt_in_field(L, delta2);
        Num ig22 = Num::rational(1 / g22, L);
        Num t1 = (Num::rational(-g12, L) + delta) * ig22;
        Num t2 = (Num::rational(-g12, L) - delta) * ig22;
        std::vector<Num> v1(N, Num::zero(L)), v2(N, Num::zero(L));
        for (int j = 0; j < N; ++j) {
          v1[j] = u[j] + t1 * w[j];
          v2[j] = u[j] + t2 * w[j];
        }
        Num c12 = eigen_inner(cox, v1, v2);
        basis.H[a] = v1;
        basis.H[a + 1] = scale_vec(v2, Num::rational(h, L) * c12.inverse());
      }
      a += 2;
    } else if (2 * m == h) {
      // self-paired eigenvalue -1: rescale by sqrt(h / (v|v))
      auto ker = eigen_kernel(cox.M, lambda);
      if (ker.size() != 1)
        throw std::logic_error("kernel dimension != exponent multiplicity");
      auto c = eigen_inner(cox, ker[0], ker[0]).as_rational();
      if (!c || *c == 0) throw std::logic_error("isotropic -1 eigenvector");
      Num t = sqrt_in_field(L, Rational(h) / *c);
      basis.H[a] = scale_vec(ker[0], t);
      ++a;
    } else {
      // generic pair (a, N-1-a): normalize the partner against H[a]
      const int b = N - 1 - a;
      auto ker = eigen_kernel(cox.M, lambda);
      if (ker.size() != 1)
        throw std::logic_error("kernel dimension != exponent multiplicity");
      basis.H[a] = ker[0];
      auto kerb = eigen_kernel(cox.M, basis.eta_h(h - m));
      if (kerb.size() != 1)
        throw std::logic_error("kernel dimension != exponent multiplicity");
      Num c = eigen_inner(cox, basis.H[a], kerb[0]);
      if (c.is_zero()) throw std::logic_error("degenerate eigen pairing");
      basis.H[b] = scale_vec(kerb[0], Num::rational(h, L) * c.inverse());
      ++a;
    }
  }

  // hard exact verification: Gram normalization and eigenvalue equations
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Num g = eigen_inner(cox, basis.H[i], basis.H[j]);
      Num want = (i + j == N - 1) ? Num::rational(h, L) : Num::zero(L);
      if (g != want)
        throw std::logic_error("eigenbasis Gram normalization failed at (" +
                               std::to_string(i) + "," + std::to_string(j) +
                               ")");
    }
  for (int i = 0; i < N; ++i) {
    Num lam = basis.eta_h(cox.exponents[i]);
    for (int r = 0; r < N; ++r) {
      Num s = Num::zero(L);
      for (int c = 0; c < N; ++c) {
        if (cox.M[r][c] == 0) continue;
        s += basis.H[i][c] * Rational(cox.M[r][c]);
      }
      if (s != lam * basis.H[i][r])
        throw std::logic_error("eigenvector equation failed");
    }
  }
  return basis;
}

BetaTable beta_table(const rootsys::CoxeterData& cox, const Eigenbasis& basis,
                     int cutoff) {
  if (cutoff < cox.h)
    throw std::invalid_argument("beta_table: cutoff must be >= h");
  const int N = cox.rank;
  BetaTable t;
  t.conductor = basis.conductor;
  t.cutoff = cutoff;
  t.pos_.assign(N, std::vector<Num>(N, Num::zero(t.conductor)));
  t.neg_ = t.pos_;
  for (int i = 0; i < N; ++i) {
    std::vector<Num> rep(N, Num::zero(t.conductor));
    for (int j = 0; j < N; ++j) rep[j] = Num::rational(cox.reps[i][j], t.conductor);
    for (int a = 0; a < N; ++a)
      t.pos_[i][a] = eigen_inner(cox, rep, basis.H[a]);
    for (int a = 0; a < N; ++a) t.neg_[i][a] = t.pos_[i][N - 1 - a];
  }
  return t;
}

bool beta_pairing_identity(const rootsys::CoxeterData& cox,
                           const BetaTable& beta, int i, int m) {
  const int N = cox.rank, h = cox.h;
  const unsigned L = beta.conductor;
  Num lhs = Num::zero(L);
  for (int a = 0; a < N; ++a) {
    int ma = cox.exponents[a];
    if (ma <= m && (m - ma) % h == 0) lhs += beta.pos(i, a) * beta.neg(i, a);
  }
  Num rhs = Num::zero(L);
  const long stepm = static_cast<long>(L / h) * m;
  for (int k = 1; k <= h; ++k)
    rhs += Num::zeta_power(L, stepm * k) * Rational(cox.profiles[i][k]);
  return lhs == rhs;
}

Rational target_sum(const rootsys::CoxeterData& cox) {
  return make_q(static_cast<long>(cox.rank) * (cox.h + 1), 12L * cox.h);
}

std::vector<Num> compute_a(const rootsys::CoxeterData& cox) {
  const int h = cox.h;
  const unsigned hc = static_cast<unsigned>(h);
  std::vector<Num> out;
  out.reserve(cox.rank);
  for (int i = 0; i < cox.rank; ++i) {
    Num p = Num::rational(make_q(1, h), hc);
    for (int k = 1; k < h; ++k) {
      Num f = Num::one(hc) - Num::zeta_power(hc, k);
      p *= f.pow(cox.profiles[i][k]);
    }
    if (p != p.conj())
      throw std::logic_error("a_i failed the reality certification");
    // positivity: p is certified real, so a 40-digit evaluation far from
    // zero settles the sign
    cyclo::Complex z = p.to_complex(40);
    cyclo::PrecisionGuard guard(50);
    cyclo::Real tiny = pow(cyclo::Real(10), -20);
    if (!(abs(z.im) < tiny) || !(z.re > tiny))
      throw std::logic_error("a_i failed the positivity certification");
    out.push_back(std::move(p));
  }
  Num sum = Num::zero(hc);
  for (const auto& p : out) sum += p;
  auto sr = sum.as_rational();
  if (!sr || *sr != target_sum(cox))
    throw std::logic_error("sum of a_i differs from N(h+1)/(12h)");
  return out;
}

Num limit_corollary_check(const rootsys::CoxeterData& cox, int i) {
  const int h = cox.h;
  const unsigned hc = static_cast<unsigned>(h);
  const Num one = Num::one(hc);
  using cyclo::Poly;

  Poly num = Poly::constant(one);
  Poly den = Poly::constant(one);
  num = num * Poly({one, -one});  // (1 - x)
  {
    std::vector<Num> xh(h + 1, Num::zero(hc));
    xh[0] = one;
    xh[h] = -one;
    num = num * Poly(std::move(xh));  // (1 - x^h)
  }
  for (int k = 1; k <= h; ++k) {
    int nk = cox.profiles[i][k];
    Poly factor({one, -Num::zeta_power(hc, k)});
    for (int t = 0; t < -nk; ++t) num = num * factor;
    for (int t = 0; t < nk; ++t) den = den * factor;
  }
  Poly one_minus_x({one, -one});
  try {
    num = num.divide_exact(one_minus_x).divide_exact(one_minus_x);
    den = den.divide_exact(one_minus_x).divide_exact(one_minus_x);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("limit corollary: residual pole at x = 1");
  }
  Num dv = den.eval(one);
  if (dv.is_zero())
    throw std::runtime_error("limit corollary: residual pole at x = 1");
  return num.eval(one) * dv.inverse();
}

BSeries b_series_product(const rootsys::CoxeterData& cox, int i, int K) {
  if (K < 1) throw std::invalid_argument("b_series_product: K >= 1");
  const int h = cox.h;
  const unsigned hc = static_cast<unsigned>(h);
  BSeries s(K + 1, Num::zero(hc));
  s[0] = Num::one(hc);
  for (int k = 1; k <= h; ++k) {
    const int e = -cox.profiles[i][k];  // exponent of (1 - eta^k x)
    const Num zk = Num::zeta_power(hc, k);
    for (int t = 0; t < e; ++t) {
      // multiply by (1 - eta^k x)
      for (int j = K; j >= 1; --j) s[j] -= zk * s[j - 1];
    }
    for (int t = 0; t < -e; ++t) {
      // multiply by the geometric series sum_j eta^{kj} x^j
      for (int j = 1; j <= K; ++j) s[j] += zk * s[j - 1];
    }
  }
  return s;
}

BSeries b_series_exponential(const rootsys::CoxeterData& cox,
                             const BetaTable& beta, int i, int K) {
  if (K < 1) throw std::invalid_argument("b_series_exponential: K >= 1");
  if (beta.cutoff < K)
    throw std::invalid_argument("b_series_exponential: beta cutoff < K");
  const int N = cox.rank, h = cox.h;
  const unsigned L = beta.conductor;
  // E(x) = sum over labels of weight m <= K of beta- * beta+ * x^m / m
  BSeries E(K + 1, Num::zero(L));
  for (int a = 0; a < N; ++a) {
    Num prod = beta.neg(i, a) * beta.pos(i, a);
    for (int m = cox.exponents[a]; m <= K; m += h)
      E[m] += prod * make_q(1, m);
  }
  BSeries out(K + 1, Num::zero(L)), term(K + 1, Num::zero(L));
  out[0] = Num::one(L);
  term[0] = Num::one(L);
  for (int r = 1; r <= K; ++r) {
    // term = term * E / r, truncated
    BSeries next(K + 1, Num::zero(L));
    for (int p = 0; p <= K; ++p) {
      if (term[p].is_zero()) continue;
      for (int q = 1; p + q <= K; ++q) {
        if (E[q].is_zero()) continue;
        next[p + q] += term[p] * E[q];
      }
    }
    bool any = false;
    Rational inv_r = make_q(1, r);
    for (int p = 0; p <= K; ++p) {
      next[p] *= inv_r;
      if (!next[p].is_zero()) any = true;
      out[p] += next[p];
    }
    if (!any) break;
    term = std::move(next);
  }
  return out;
}

namespace {

struct TildeData {
  std::vector<Real> values;
  std::vector<Real> phases;
};

TildeData a_tilde_full(const rootsys::CoxeterData& cox,
                       const Eigenbasis& basis, unsigned digits) {
  if (digits < 30)
    throw std::invalid_argument("compute_a_tilde: digits >= 30");
  cyclo::PrecisionGuard guard(digits + 20);
  const int N = cox.rank;

  // ln |(H_1|alpha)| and arg(H_1|alpha) for every root alpha
  std::vector<rootsys::Root> roots;
  for (const auto& cell : cox.orbits)
    roots.insert(roots.end(), cell.begin(), cell.end());
  std::vector<Real> lnv(roots.size()), av(roots.size());
  Real floor_mag = pow(Real(10), -static_cast<int>(digits / 2));
  for (size_t r = 0; r < roots.size(); ++r) {
    std::vector<int> w(N, 0);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) w[i] += cox.cartan[i][j] * roots[r][j];
    Num z = Num::zero(basis.conductor);
    for (int i = 0; i < N; ++i)
      if (w[i] != 0) z += basis.H[0][i] * Rational(w[i]);
    cyclo::Complex zc = z.to_complex(digits + 15);
    Real mag = cyclo::abs(zc);
    if (!(mag > floor_mag))
      throw std::runtime_error("(H_1|alpha) vanished numerically");
    lnv[r] = log(mag);
    av[r] = cyclo::arg(zc);
  }

  TildeData out;
  std::vector<Real> lnratio(N);
  out.phases.assign(N, Real(0));
  for (int i = 0; i < N; ++i) {
    Real sl(0), sa(0);
    for (size_t r = 0; r < roots.size(); ++r) {
      long long ip = rootsys::inner(cox.cartan, cox.reps[i], roots[r]);
      long long e = ip * ip;
      if (e == 0) continue;
      sl += static_cast<long>(e) * lnv[r];
      sa += static_cast<long>(e) * av[r];
    }
    lnratio[i] = -sl / 2;
    out.phases[i] = -sa / 2;
  }
  Real denom(0);
  std::vector<Real> ratios(N);
  for (int i = 0; i < N; ++i) {
    ratios[i] = exp(lnratio[i]);
    denom += ratios[i];
  }
  Real T = cyclo::to_real(target_sum(cox));
  out.values.resize(N);
  for (int i = 0; i < N; ++i) out.values[i] = T * ratios[i] / denom;
  return out;
}

}  // namespace

std::vector<Real> compute_a_tilde(const rootsys::CoxeterData& cox,
                                  const Eigenbasis& basis, unsigned digits) {
  return a_tilde_full(cox, basis, digits).values;
}

std::vector<Real> a_tilde_phase_sums(const rootsys::CoxeterData& cox,
                                     const Eigenbasis& basis,
                                     unsigned digits) {
  return a_tilde_full(cox, basis, digits).phases;
}

CoefficientReport verify_theorem(rootsys::RootSystemId id, unsigned digits,
                                 double perturb) {
  if (digits < 30)
    throw std::invalid_argument("verify_theorem: digits >= 30");
  rootsys::RootSystem rs = rootsys::build(id);
  rootsys::CoxeterData cox = rootsys::coxeter(rs);
  Eigenbasis basis = eigenbasis(cox);
  std::vector<Num> a = compute_a(cox);

  cyclo::PrecisionGuard guard(digits + 20);
  TildeData tilde = a_tilde_full(cox, basis, digits);
  if (perturb != 0.0 && !tilde.values.empty())
    tilde.values[0] *= Real(1) + Real(perturb);

  CoefficientReport rep;
  rep.id = id;
  rep.rank = cox.rank;
  rep.h = cox.h;
  rep.exponents = cox.exponents;
  rep.digits = digits;
  rep.target = target_sum(cox);
  rep.max_residual = Real(0);
  rep.all_positive = true;

  Real im_bound = pow(Real(10), -static_cast<int>(digits / 2));
  for (int i = 0; i < cox.rank; ++i) {
    OrbitReport orep;
    orep.rep = cox.reps[i];
    orep.a_exact = a[i];
    orep.a_rational = a[i].as_rational();
    cyclo::Complex z = a[i].to_complex(digits + 15);
    if (!(abs(z.im) < im_bound))
      throw std::logic_error("a_i embedding has a nonreal part");
    orep.a_value = z.re;
    orep.a_tilde = tilde.values[i];
    orep.phase_sum = tilde.phases[i];
    orep.residual = abs(orep.a_value - orep.a_tilde) / orep.a_value;
    if (!(orep.a_value > 0)) rep.all_positive = false;
    if (orep.residual > rep.max_residual) rep.max_residual = orep.residual;
    rep.orbits.push_back(std::move(orep));
  }

  Num sum = Num::zero(static_cast<unsigned>(cox.h));
  for (const auto& x : a) sum += x;
  rep.sum_exact = sum.as_rational() && *sum.as_rational() == rep.target;

  Real tol = pow(Real(10), -static_cast<int>(digits / 2));
  rep.theorem_pass =
      rep.sum_exact && rep.all_positive && rep.max_residual < tol;
  return rep;
}

}  // namespace adeh::coeffs
