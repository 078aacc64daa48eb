#include "adeh/rootsys.hpp"

#include "adeh/cyclo.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <stdexcept>

namespace adeh::rootsys {

namespace {

IntMatrix cartan_matrix(RootSystemId id) {
  const int N = id.rank;
  IntMatrix C(N, std::vector<int>(N, 0));
  for (int i = 0; i < N; ++i) C[i][i] = 2;
  auto link = [&C](int i, int j) {  // 1-based node labels
    C[i - 1][j - 1] = -1;
    C[j - 1][i - 1] = -1;
  };
  switch (id.family) {
    case 'A':
      for (int i = 1; i < N; ++i) link(i, i + 1);
      break;
    case 'D':
      for (int i = 1; i < N - 1; ++i) link(i, i + 1);
      link(N - 2, N);
      break;
    case 'E':
      link(1, 3);
      link(3, 4);
      link(2, 4);
      for (int i = 4; i < N; ++i) link(i, i + 1);
      break;
    default:
      throw std::invalid_argument("unknown family");
  }
  return C;
}

/** Matrix of the simple reflection s_i (0-based) in the simple-root basis. */
IntMatrix reflection(const IntMatrix& cartan, int i) {
  const int N = static_cast<int>(cartan.size());
  IntMatrix S(N, std::vector<int>(N, 0));
  for (int r = 0; r < N; ++r) S[r][r] = 1;
  for (int j = 0; j < N; ++j) S[i][j] -= cartan[i][j];
  return S;
}

IntMatrix matmul(const IntMatrix& A, const IntMatrix& B) {
  const int N = static_cast<int>(A.size());
  IntMatrix R(N, std::vector<int>(N, 0));
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) {
      if (A[i][k] == 0) continue;
      for (int j = 0; j < N; ++j) R[i][j] += A[i][k] * B[k][j];
    }
  return R;
}

bool is_identity(const IntMatrix& A) {
  const int N = static_cast<int>(A.size());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (A[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace

bool RootSystemId::valid(char family, int rank) {
  switch (family) {
    case 'A': return rank >= 1;
    case 'D': return rank >= 4;
    case 'E': return rank == 6 || rank == 7 || rank == 8;
    default: return false;
  }
}

RootSystemId RootSystemId::parse(const std::string& label) {
  if (label.empty()) throw std::invalid_argument("empty type label");
  char fam = static_cast<char>(std::toupper(label[0]));
  size_t pos = 1;
  if (pos < label.size() && label[pos] == '_') ++pos;
  if (pos >= label.size())
    throw std::invalid_argument("bad type label: " + label);
  int rank = 0;
  for (; pos < label.size(); ++pos) {
    if (!std::isdigit(label[pos]))
      throw std::invalid_argument("bad type label: " + label);
    rank = rank * 10 + (label[pos] - '0');
    if (rank > 1000) throw std::invalid_argument("bad type label: " + label);
  }
  if (!valid(fam, rank))
    throw std::invalid_argument("unsupported type: " + label);
  return RootSystemId{fam, rank};
}

long long inner(const IntMatrix& cartan, const std::vector<int>& x,
                const std::vector<int>& y) {
  const size_t N = cartan.size();
  if (x.size() != N || y.size() != N)
    throw std::invalid_argument("inner: dimension mismatch");
  long long s = 0;
  for (size_t i = 0; i < N; ++i) {
    if (x[i] == 0) continue;
    long long row = 0;
    for (size_t j = 0; j < N; ++j) row += static_cast<long long>(cartan[i][j]) * y[j];
    s += x[i] * row;
  }
  return s;
}

long long inner(const RootSystem& rs, const std::vector<int>& x,
                const std::vector<int>& y) {
  return inner(rs.cartan, x, y);
}

Root apply_matrix(const IntMatrix& M, const Root& v) {
  const size_t N = M.size();
  Root r(N, 0);
  for (size_t i = 0; i < N; ++i) {
    long long s = 0;
    for (size_t j = 0; j < N; ++j) s += static_cast<long long>(M[i][j]) * v[j];
    r[i] = static_cast<int>(s);
  }
  return r;
}

RootSystem build(RootSystemId id) {
  if (!RootSystemId::valid(id.family, id.rank))
    throw std::invalid_argument("unsupported type: " + id.name());
  const int N = id.rank;
  IntMatrix cartan = cartan_matrix(id);
  std::vector<IntMatrix> refl;
  refl.reserve(N);
  for (int i = 0; i < N; ++i) refl.push_back(reflection(cartan, i));

  std::set<Root> seen;
  std::vector<Root> frontier;
  for (int i = 0; i < N; ++i) {
    Root e(N, 0);
    e[i] = 1;
    seen.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<Root> next;
    for (const Root& r : frontier)
      for (const IntMatrix& S : refl) {
        Root w = apply_matrix(S, r);
        if (seen.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }

  RootSystem rs{id, N, std::move(cartan), {seen.begin(), seen.end()}};
  for (const Root& r : rs.roots)
    if (inner(rs.cartan, r, r) != 2)
      throw std::logic_error("root of squared length != 2 in closure");
  return rs;
}

std::vector<mpz_class> charpoly(const IntMatrix& M) {
  // Faddeev-LeVerrier: exact coefficients of det(x*I - M)
  const int N = static_cast<int>(M.size());
  using QMat = std::vector<std::vector<mpq_class>>;
  QMat A(N, std::vector<mpq_class>(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) A[i][j] = M[i][j];
  QMat Ak = A;
  std::vector<mpq_class> c(N + 1);
  c[N] = 1;
  for (int k = 1; k <= N; ++k) {
    if (k > 1) {
      // Ak = M * (Ak_prev + c_{N-k+1} * I)
      QMat T = Ak;
      for (int i = 0; i < N; ++i) T[i][i] += c[N - k + 1];
      QMat R(N, std::vector<mpq_class>(N));
      for (int i = 0; i < N; ++i)
        for (int l = 0; l < N; ++l) {
          if (A[i][l] == 0) continue;
          for (int j = 0; j < N; ++j) R[i][j] += A[i][l] * T[l][j];
        }
      Ak = std::move(R);
    }
    mpq_class tr = 0;
    for (int i = 0; i < N; ++i) tr += Ak[i][i];
    c[N - k] = -tr / k;
  }
  std::vector<mpz_class> out(N + 1);
  for (int i = 0; i <= N; ++i) {
    if (c[i].get_den() != 1)
      throw std::logic_error("charpoly: non-integer coefficient");
    out[i] = c[i].get_num();
  }
  return out;
}

std::vector<int> orbit_profile(const IntMatrix& cartan, const IntMatrix& M,
                               const Root& rep, int h) {
  std::vector<int> prof(h + 1);
  Root cur = rep;
  prof[0] = static_cast<int>(inner(cartan, rep, rep));
  for (int k = 1; k <= h; ++k) {
    cur = apply_matrix(M, cur);
    prof[k] = static_cast<int>(inner(cartan, rep, cur));
  }
  return prof;
}

CoxeterData coxeter(const RootSystem& rs, std::vector<int> ordering) {
  const int N = rs.rank;
  if (ordering.empty()) {
    ordering.resize(N);
    std::iota(ordering.begin(), ordering.end(), 1);
  }
  {
    std::vector<int> sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < N; ++i)
      if (sorted[i] != i + 1)
        throw std::invalid_argument("ordering must be a permutation of 1.." +
                                    std::to_string(N));
  }

  IntMatrix M(N, std::vector<int>(N, 0));
  for (int i = 0; i < N; ++i) M[i][i] = 1;
  for (int idx : ordering) M = matmul(M, reflection(rs.cartan, idx - 1));

  int h = 1;
  {
    IntMatrix P = M;
    while (!is_identity(P)) {
      P = matmul(P, M);
      ++h;
      if (h > 1000) throw std::logic_error("Coxeter element order overflow");
    }
  }

  // exponents by peeling cyclotomic factors off the characteristic polynomial
  std::vector<mpz_class> cp = charpoly(M);
  std::vector<int> exponents;
  for (int d = 1; d <= h; ++d) {
    if (h % d != 0) continue;
    std::vector<mpz_class> phi_d = cyclo::cyclotomic_polynomial(d);
    while (static_cast<int>(cp.size()) > static_cast<int>(phi_d.size()) - 1) {
      // try exact division cp / phi_d
      std::vector<mpz_class> rem = cp;
      std::vector<mpz_class> q(cp.size() - phi_d.size() + 1);
      for (size_t i = q.size(); i-- > 0;) {
        mpz_class f = rem[i + phi_d.size() - 1];  // phi_d monic
        q[i] = f;
        if (f != 0)
          for (size_t j = 0; j < phi_d.size(); ++j) rem[i + j] -= f * phi_d[j];
      }
      bool exact = true;
      for (size_t j = 0; j + 1 < phi_d.size(); ++j)
        if (rem[j] != 0) {
          exact = false;
          break;
        }
      if (!exact) break;
      cp = std::move(q);
      for (int j = 1; j <= d; ++j)
        if (std::gcd(j, d) == 1) exponents.push_back(j * h / d);
      if (cp.size() == 1) break;
    }
    if (cp.size() == 1) break;
  }
  if (cp.size() != 1 || static_cast<int>(exponents.size()) != N)
    throw std::logic_error(
        "characteristic polynomial is not a product of cyclotomics");
  std::sort(exponents.begin(), exponents.end());
  if (exponents.front() != 1 || exponents.back() != h - 1)
    throw std::logic_error("exponents out of range: expected m_1=1, m_N=h-1");

  // orbit decomposition, canonical representatives, pairing profiles
  std::set<Root> remaining(rs.roots.begin(), rs.roots.end());
  std::vector<std::vector<Root>> orbits;
  while (!remaining.empty()) {
    Root start = *remaining.begin();
    std::vector<Root> cell{start};
    remaining.erase(start);
    Root cur = apply_matrix(M, start);
    while (cur != start) {
      if (remaining.erase(cur) == 0)
        throw std::logic_error("orbit iteration left the remaining set");
      cell.push_back(cur);
      cur = apply_matrix(M, cur);
    }
    if (static_cast<int>(cell.size()) != h)
      throw std::logic_error("orbit of size != h");
    // rotate so the lexicographically smallest root leads
    auto mn = std::min_element(cell.begin(), cell.end());
    std::rotate(cell.begin(), mn, cell.end());
    orbits.push_back(std::move(cell));
  }
  if (static_cast<int>(orbits.size()) != N)
    throw std::logic_error("expected N orbits");
  std::sort(orbits.begin(), orbits.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });

  CoxeterData cox;
  cox.id = rs.id;
  cox.rank = N;
  cox.cartan = rs.cartan;
  cox.M = M;
  cox.ordering = std::move(ordering);
  cox.h = h;
  cox.exponents = std::move(exponents);
  for (const auto& cell : orbits) cox.reps.push_back(cell[0]);
  cox.orbits = std::move(orbits);
  for (const auto& rep : cox.reps)
    cox.profiles.push_back(orbit_profile(cox.cartan, M, rep, h));
  return cox;
}

int orbit_weights(const CoxeterData& cox, int i, int k) {
  if (i < 0 || i >= static_cast<int>(cox.profiles.size()))
    throw std::invalid_argument("orbit_weights: bad orbit index");
  int kk = ((k % cox.h) + cox.h) % cox.h;
  return cox.profiles[i][kk];
}

std::vector<RootSystemId> supported_types() {
  std::vector<RootSystemId> v;
  for (int n = 1; n <= 8; ++n) v.push_back({'A', n});
  for (int n = 4; n <= 8; ++n) v.push_back({'D', n});
  for (int n = 6; n <= 8; ++n) v.push_back({'E', n});
  return v;
}

}  // namespace adeh::rootsys
