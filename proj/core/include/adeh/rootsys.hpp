#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

/**
 * ADE root systems in the simple-root basis: reflection closure of the
 * simple roots, the Coxeter element for a chosen reflection ordering, its
 * order h, the exponents (extracted by exact cyclotomic factorization of the
 * characteristic polynomial), and the decomposition of the roots into N
 * orbits of size h under the Coxeter element.
 *
 * Conventions fixed here (the constructions below depend on them):
 *  - Bourbaki Cartan matrices; for E_N the chain is 1-3-4-5-...-N with
 *    node 2 attached to node 4.
 *  - Default Coxeter ordering is the identity permutation; M = s_1 s_2 ... s_N
 *    with s_N applied first to vectors.
 *  - The canonical orbit representative is the lexicographically smallest
 *    coordinate vector in the orbit; orbits are sorted by representative.
 */
namespace adeh::rootsys {

struct RootSystemId {
  char family;  // 'A', 'D' or 'E'
  int rank;

  /** Parse "A_3", "D4", "e_8", ...; throws std::invalid_argument. */
  static RootSystemId parse(const std::string& label);

  /** True for the constructible combinations (A>=1, D>=4, E in {6,7,8}). */
  static bool valid(char family, int rank);

  std::string name() const { return std::string(1, family) + "_" +
                                    std::to_string(rank); }
  bool operator==(const RootSystemId& o) const {
    return family == o.family && rank == o.rank;
  }
};

using Root = std::vector<int>;                 // coordinates in simple roots
using IntMatrix = std::vector<std::vector<int>>;

struct RootSystem {
  RootSystemId id;
  int rank;
  IntMatrix cartan;          // symmetric Gram matrix of the simple roots
  std::vector<Root> roots;   // all N*h roots, sorted lexicographically
};

/** Reflection closure of the simple roots; |roots| = N*h. */
RootSystem build(RootSystemId id);

/** x^T * cartan * y; the exact inner product on the root lattice. */
long long inner(const IntMatrix& cartan, const std::vector<int>& x,
                const std::vector<int>& y);
long long inner(const RootSystem& rs, const std::vector<int>& x,
                const std::vector<int>& y);

struct CoxeterData {
  RootSystemId id;
  int rank;
  IntMatrix cartan;
  IntMatrix M;                  // Coxeter element in the simple-root basis
  std::vector<int> ordering;    // 1-based reflection order used to form M
  int h;                        // order of M
  std::vector<int> exponents;   // m_1 <= ... <= m_N, from Phi-factorization
  std::vector<std::vector<Root>> orbits;  // orbits[i][k] = M^k(reps[i])
  std::vector<Root> reps;       // canonical representatives, sorted
  std::vector<std::vector<int>> profiles;  // profiles[i][k] = (rep_i|M^k rep_i)
};

/**
 * Coxeter element for the given 1-based reflection ordering (defaults to
 * identity), with exact order, exponents, orbits and pairing profiles.
 */
CoxeterData coxeter(const RootSystem& rs, std::vector<int> ordering = {});

/** n_k = (alpha_i | M^k alpha_i); defined for any k via k mod h. */
int orbit_weights(const CoxeterData& cox, int i, int k);

/** The profile (rep|M^k rep), k = 0..h, of an arbitrary root. */
std::vector<int> orbit_profile(const IntMatrix& cartan, const IntMatrix& M,
                               const Root& rep, int h);

/** Exact characteristic polynomial det(x*I - M), low degree first. */
std::vector<mpz_class> charpoly(const IntMatrix& M);

/** Matrix-vector product over the integers. */
Root apply_matrix(const IntMatrix& M, const Root& v);

/** All supported type labels: A_1..A_8, D_4..D_8, E_6, E_7, E_8. */
std::vector<RootSystemId> supported_types();

}  // namespace adeh::rootsys
