#include "adeh/cyclo.hpp"

#include <mpfr.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>

namespace adeh::cyclo {

namespace {

// exact division of monic integer polynomials, low degree first;
// used only inside the cyclotomic recursion where divisibility is guaranteed
std::vector<mpz_class> polydiv_monic(std::vector<mpz_class> num,
                                     const std::vector<mpz_class>& den) {
  const size_t nd = den.size() - 1;
  if (num.size() < den.size()) throw std::logic_error("polydiv: degree");
  std::vector<mpz_class> q(num.size() - nd);
  for (size_t i = q.size(); i-- > 0;) {
    mpz_class c = num[i + nd];  // den is monic
    q[i] = c;
    if (c != 0)
      for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
  }
  for (const auto& r : num)
    if (r != 0) throw std::logic_error("polydiv: nonzero remainder");
  return q;
}

std::vector<mpz_class> polymul_z(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b) {
  std::vector<mpz_class> r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real abs(const Complex& z) {
  return Real(sqrt(z.re * z.re + z.im * z.im));
}

Real arg(const Complex& z) { return Real(atan2(z.im, z.re)); }

std::vector<mpz_class> cyclotomic_polynomial(unsigned L) {
  if (L == 0) throw std::invalid_argument("cyclotomic_polynomial: L >= 1");
  std::map<unsigned, std::vector<mpz_class>> phis;
  phis[1] = {mpz_class(-1), mpz_class(1)};  // x - 1
  for (unsigned n = 2; n <= L; ++n) {
    if (L % n != 0) continue;
    std::vector<mpz_class> num(n + 1);
    num[0] = -1;
    num[n] = 1;  // x^n - 1
    std::vector<mpz_class> den{mpz_class(1)};
    for (unsigned d = 1; d < n; ++d)
      if (n % d == 0) den = polymul_z(den, phis.at(d));
    phis[n] = polydiv_monic(std::move(num), den);
  }
  return phis.at(L);
}

Field::Field(unsigned L) : L_(L) {
  phi_ = cyclotomic_polynomial(L);
  deg_ = static_cast<unsigned>(phi_.size()) - 1;

  // x^{deg+t} mod Phi for t = 0..deg-2 (largest power a product can reach)
  if (deg_ >= 2) {
    std::vector<mpz_class> cur(deg_);
    for (unsigned j = 0; j < deg_; ++j) cur[j] = -phi_[j];  // x^deg, monic
    red_.push_back(cur);
    for (unsigned t = 1; t + 1 < deg_; ++t) {
      std::vector<mpz_class> nxt(deg_ + 1);
      for (unsigned j = 0; j < deg_; ++j) nxt[j + 1] = cur[j];
      mpz_class lead = nxt[deg_];
      nxt.resize(deg_);
      if (lead != 0)
        for (unsigned j = 0; j < deg_; ++j) nxt[j] += lead * red_[0][j];
      cur = nxt;
      red_.push_back(cur);
    }
  } else if (deg_ == 1) {
    // no products overflow the basis, but keep x^1 handy for zeta powers:
    // x = -phi_[0] (x - 1 or x + 1)
  }

  // reduced coordinates of zeta^j, j = 0..L-1
  zeta_pow_.resize(L_);
  std::vector<Rational> curz(deg_);
  curz[0] = 1;
  zeta_pow_[0] = curz;
  for (unsigned j = 1; j < L_; ++j) {
    // multiply by zeta: shift up one degree, then reduce
    std::vector<Rational> v(deg_ + 1);
    for (unsigned t = 0; t < deg_; ++t) v[t + 1] = curz[t];
    if (v[deg_] != 0) {
      if (deg_ == 1) {
        v[0] += v[1] * Rational(-phi_[0]);
      } else {
        for (unsigned t = 0; t < deg_; ++t) v[t] += v[deg_] * red_[0][t];
      }
    }
    v.resize(deg_);
    curz = v;
    zeta_pow_[j] = curz;
  }
}

const Field& Field::of(unsigned conductor) {
  if (conductor == 0) throw std::invalid_argument("Field: conductor >= 1");
  static std::mutex mu;
  static std::map<unsigned, std::unique_ptr<const Field>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto it = registry.find(conductor);
  if (it == registry.end()) {
    it = registry
             .emplace(conductor,
                      std::unique_ptr<const Field>(new Field(conductor)))
             .first;
  }
  return *it->second;
}

Num Num::rational(const Rational& q, unsigned conductor) {
  Num x(conductor);
  x.coords_[0] = q;
  return x;
}

Num Num::zeta_power(unsigned conductor, long k) {
  const Field& f = Field::of(conductor);
  long L = static_cast<long>(conductor);
  long kk = ((k % L) + L) % L;
  if (f.degree() == 1) {
    // L in {1, 2}: zeta is 1 or -1
    Rational z = -Rational(f.phi()[0]);
    Rational val = 1;
    for (long t = 0; t < kk; ++t) val *= z;
    return rational(val, conductor);
  }
  if (static_cast<unsigned>(kk) < f.degree()) {
    Num x(conductor);
    x.coords_[static_cast<size_t>(kk)] = 1;
    return x;
  }
  Num e1(conductor);
  e1.coords_[1] = 1;
  return e1.pow(kk);
}

Num Num::from_coords(unsigned conductor, std::vector<Rational> coords) {
  Num x(conductor);
  if (coords.size() != x.coords_.size())
    throw std::invalid_argument("Num::from_coords: wrong length");
  x.coords_ = std::move(coords);
  return x;
}

void Num::require_same_field(const Num& o) const {
  if (fld_ != o.fld_)
    throw std::invalid_argument(
        "cyclotomic conductor mismatch: " + std::to_string(conductor()) +
        " vs " + std::to_string(o.conductor()));
}

bool Num::is_zero() const {
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

bool Num::operator==(const Num& o) const {
  return fld_ == o.fld_ && coords_ == o.coords_;
}

Num Num::operator-() const {
  Num r(*this);
  for (auto& c : r.coords_) c = -c;
  return r;
}

Num Num::operator+(const Num& o) const {
  require_same_field(o);
  Num r(*this);
  for (size_t i = 0; i < coords_.size(); ++i) r.coords_[i] += o.coords_[i];
  return r;
}

Num Num::operator-(const Num& o) const {
  require_same_field(o);
  Num r(*this);
  for (size_t i = 0; i < coords_.size(); ++i) r.coords_[i] -= o.coords_[i];
  return r;
}

Num Num::operator*(const Num& o) const {
  require_same_field(o);
  const unsigned d = fld_->degree();
  if (d == 1) {
    Num r(conductor());
    r.coords_[0] = coords_[0] * o.coords_[0];
    return r;
  }
  std::vector<Rational> v(2 * d - 1);
  for (unsigned i = 0; i < d; ++i) {
    if (coords_[i] == 0) continue;
    for (unsigned j = 0; j < d; ++j) {
      if (o.coords_[j] == 0) continue;
      v[i + j] += coords_[i] * o.coords_[j];
    }
  }
  // reduce degrees d..2d-2 through the precomputed rows
  for (unsigned i = 2 * d - 2; i >= d; --i) {
    if (v[i] != 0) {
      const auto& row = fld_->reduction(i - d);
      for (unsigned j = 0; j < d; ++j) v[j] += v[i] * row[j];
      v[i] = 0;
    }
    if (i == d) break;
  }
  v.resize(d);
  Num r(conductor());
  r.coords_ = std::move(v);
  return r;
}

Num Num::operator*(const Rational& q) const {
  Num r(*this);
  for (auto& c : r.coords_) c *= q;
  return r;
}

Num Num::inverse() const {
  if (is_zero())
    throw std::domain_error("division by zero in Q(zeta_" +
                            std::to_string(conductor()) + ")");
  using P = std::vector<Rational>;
  auto strip = [](P p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
  };
  auto pmul = [](const P& a, const P& b) {
    if (a.empty() || b.empty()) return P{};
    P r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] != 0)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  auto psub = [&strip](const P& a, const P& b) {
    P r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return strip(std::move(r));
  };
  auto pdiv = [&strip](P n, const P& d) {
    P q(n.size() >= d.size() ? n.size() - d.size() + 1 : 0);
    for (size_t i = q.size(); i-- > 0;) {
      Rational c = n[i + d.size() - 1] / d.back();
      q[i] = c;
      if (c != 0)
        for (size_t j = 0; j < d.size(); ++j) n[i + j] -= c * d[j];
    }
    return std::make_pair(std::move(q), strip(std::move(n)));
  };

  P r0(fld_->phi().size());
  for (size_t i = 0; i < r0.size(); ++i) r0[i] = Rational(fld_->phi()[i]);
  P r1 = strip(coords_);
  P s0{}, s1{Rational(1)};
  while (true) {
    auto [q, rem] = pdiv(r0, r1);
    P s = psub(s0, pmul(q, s1));
    if (rem.empty()) {
      if (r1.size() != 1)
        throw std::logic_error("inverse: gcd with Phi_L not constant");
      Rational ic = 1 / r1[0];
      Num out(conductor());
      for (size_t i = 0; i < s1.size() && i < out.coords_.size(); ++i)
        out.coords_[i] = s1[i] * ic;
      return out;
    }
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
}

Num Num::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Num r = one(conductor());
  Num b(*this);
  unsigned long n = static_cast<unsigned long>(e);
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

Num Num::conj() const {
  const unsigned L = conductor();
  Num r(L);
  for (unsigned j = 0; j < fld_->degree(); ++j) {
    if (coords_[j] == 0) continue;
    const auto& zp = fld_->zeta_power((L - j) % L);
    for (unsigned t = 0; t < fld_->degree(); ++t)
      r.coords_[t] += coords_[j] * zp[t];
  }
  return r;
}

std::optional<Rational> Num::as_rational() const {
  for (size_t i = 1; i < coords_.size(); ++i)
    if (coords_[i] != 0) return std::nullopt;
  return coords_[0];
}

Num Num::lift(unsigned M) const {
  const unsigned L = conductor();
  if (M % L != 0)
    throw std::invalid_argument("Num::lift: " + std::to_string(L) +
                                " does not divide " + std::to_string(M));
  if (M == L) return *this;
  const Field& fm = Field::of(M);
  const unsigned step = M / L;
  Num r(M);
  for (unsigned j = 0; j < fld_->degree(); ++j) {
    if (coords_[j] == 0) continue;
    const auto& zp = fm.zeta_power((j * step) % M);
    for (unsigned t = 0; t < fm.degree(); ++t)
      r.coords_[t] += coords_[j] * zp[t];
  }
  return r;
}

Complex Num::to_complex(unsigned digits) const {
  PrecisionGuard guard(digits + 10);
  const unsigned L = conductor();
  Real two_pi;
  mpfr_const_pi(two_pi.backend().data(), MPFR_RNDN);
  two_pi *= 2;
  Complex z;
  for (unsigned j = 0; j < fld_->degree(); ++j) {
    if (coords_[j] == 0) continue;
    Real q = to_real(coords_[j]);
    if (j == 0) {
      z.re += q;
      continue;
    }
    Real angle = two_pi * j / L;
    z.re += q * cos(angle);
    z.im += q * sin(angle);
  }
  return z;
}

std::string Num::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < coords_.size(); ++j) {
    if (coords_[j] == 0) continue;
    Rational c = coords_[j];
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    if (j == 0 || c != 1) os << c.get_str();
    if (j > 0) {
      if (c != 1) os << "*";
      os << "z";
      if (j > 1) os << "^" << j;
    }
  }
  if (first) os << "0";
  return os.str();
}

std::vector<std::vector<Num>> solve_kernel(
    const std::vector<std::vector<Num>>& A) {
  if (A.empty() || A[0].empty())
    throw std::invalid_argument("solve_kernel: empty matrix");
  const size_t m = A.size(), n = A[0].size();
  const unsigned cond = A[0][0].conductor();
  for (const auto& row : A) {
    if (row.size() != n)
      throw std::invalid_argument("solve_kernel: ragged matrix");
    for (const auto& x : row)
      if (x.conductor() != cond)
        throw std::invalid_argument("solve_kernel: mixed conductors");
  }

  std::vector<std::vector<Num>> R(A);
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < n && r < m; ++c) {
    size_t p = m;
    for (size_t i = r; i < m; ++i)
      if (!R[i][c].is_zero()) {
        p = i;
        break;
      }
    if (p == m) continue;
    std::swap(R[r], R[p]);
    Num ip = R[r][c].inverse();
    for (size_t j = 0; j < n; ++j) R[r][j] *= ip;
    for (size_t i = 0; i < m; ++i) {
      if (i == r || R[i][c].is_zero()) continue;
      Num f = R[i][c];
      for (size_t j = 0; j < n; ++j) R[i][j] -= f * R[r][j];
    }
    pivots.push_back(c);
    ++r;
  }

  std::vector<std::vector<Num>> basis;
  size_t next_pivot = 0;
  for (size_t c = 0; c < n; ++c) {
    if (next_pivot < pivots.size() && pivots[next_pivot] == c) {
      ++next_pivot;
      continue;
    }
    std::vector<Num> v(n, Num::zero(cond));
    v[c] = Num::one(cond);
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -R[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

void Poly::normalize() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Num> r(std::max(c_.size(), o.c_.size()));
  unsigned cond = c_.empty() ? (o.c_.empty() ? 1 : o.c_[0].conductor())
                             : c_[0].conductor();
  for (auto& x : r) x = Num::zero(cond);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<Num> r(std::max(c_.size(), o.c_.size()));
  unsigned cond = c_.empty() ? (o.c_.empty() ? 1 : o.c_[0].conductor())
                             : c_[0].conductor();
  for (auto& x : r) x = Num::zero(cond);
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return Poly(std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly();
  std::vector<Num> r(c_.size() + o.c_.size() - 1, Num::zero(c_[0].conductor()));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j].is_zero()) continue;
      r[i + j] += c_[i] * o.c_[j];
    }
  }
  return Poly(std::move(r));
}

Poly Poly::divide_exact(const Poly& divisor) const {
  if (divisor.is_zero())
    throw std::domain_error("Poly::divide_exact: zero divisor");
  if (is_zero()) return Poly();
  if (degree() < divisor.degree())
    throw std::runtime_error("Poly::divide_exact: nonzero remainder");
  std::vector<Num> rem = c_;
  const auto& d = divisor.c_;
  Num lead_inv = d.back().inverse();
  std::vector<Num> q(c_.size() - d.size() + 1, Num::zero(c_[0].conductor()));
  for (size_t i = q.size(); i-- > 0;) {
    Num f = rem[i + d.size() - 1] * lead_inv;
    q[i] = f;
    if (f.is_zero()) continue;
    for (size_t j = 0; j < d.size(); ++j) rem[i + j] -= f * d[j];
  }
  for (const auto& x : rem)
    if (!x.is_zero())
      throw std::runtime_error("Poly::divide_exact: nonzero remainder");
  return Poly(std::move(q));
}

Num Poly::eval(const Num& x) const {
  Num acc = Num::zero(x.conductor());
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

}  // namespace adeh::cyclo
