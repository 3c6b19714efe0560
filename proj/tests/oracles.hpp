#pragma once
// Reference computations for tests. Nothing here calls the library's normal
// form, solving or purity code; they are deliberately naive.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "alab/certificates.hpp"

namespace oracle {

using alab::Integer;
using alab::IntMatrix;
using alab::IntVector;
using alab::Rational;
using alab::RatVector;

inline long uniform(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi) {
  IntMatrix A(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) A(i, j) = uniform(rng, lo, hi);
  return A;
}

inline IntVector random_vector(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
  IntVector v(n);
  for (auto& x : v) x = uniform(rng, lo, hi);
  return v;
}

inline Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Determinant by cofactor expansion.
inline Integer laplace_det(const std::vector<std::vector<Integer>>& M) {
  const std::size_t n = M.size();
  if (n == 0) return 1;
  if (n == 1) return M[0][0];
  Integer d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (M[0][j] == 0) continue;
    std::vector<std::vector<Integer>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Integer> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(M[i][k]);
      sub.push_back(row);
    }
    const Integer c = M[0][j] * laplace_det(sub);
    d += (j % 2 == 0) ? c : Integer(-c);
  }
  return d;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

/// gcd of all k x k minors (0 when every minor vanishes).
inline Integer minor_gcd(const IntMatrix& A, std::size_t k) {
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  subsets(A.rows(), k, 0, cur, rs);
  subsets(A.cols(), k, 0, cur, cs);
  Integer g = 0;
  for (const auto& r : rs)
    for (const auto& c : cs) {
      std::vector<std::vector<Integer>> M(k, std::vector<Integer>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M[i][j] = A(r[i], c[j]);
      g = gcd(g, laplace_det(M));
      if (g == 1) return g;
    }
  return g;
}

/// Invariant factors from determinant divisors: d_k = g_k / g_{k-1}.
inline IntVector determinant_divisor_factors(const IntMatrix& A) {
  IntVector f;
  Integer prev = 1;
  for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k) {
    const Integer g = minor_gcd(A, k);
    if (g == 0) break;
    f.push_back(g / prev);
    prev = g;
  }
  return f;
}

/// Row Hermite form by repeated Euclid, zero rows dropped.
inline IntMatrix hnf(IntMatrix A) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    while (true) {
      std::size_t best = A.rows();
      for (std::size_t i = r; i < A.rows(); ++i)
        if (A(i, c) != 0 && (best == A.rows() || abs(A(i, c)) < abs(A(best, c)))) best = i;
      if (best == A.rows()) break;
      A.swap_rows(r, best);
      bool clean = true;
      for (std::size_t i = r + 1; i < A.rows(); ++i) {
        if (A(i, c) == 0) continue;
        const Integer q = fdiv(A(i, c), A(r, c));
        for (std::size_t j = c; j < A.cols(); ++j) A(i, j) -= q * A(r, j);
        if (A(i, c) != 0) clean = false;
      }
      if (clean) break;
    }
    if (A(r, c) == 0) continue;
    if (A(r, c) < 0)
      for (std::size_t j = 0; j < A.cols(); ++j) A(r, j) = -A(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = fdiv(A(i, c), A(r, c));
      if (q != 0)
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) -= q * A(r, j);
    }
    ++r;
  }
  IntMatrix H(r, A.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) H(i, j) = A(i, j);
  return H;
}

inline IntMatrix stack(const std::vector<IntVector>& rows, std::size_t dim) {
  IntMatrix M(rows.size(), dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) M(i, j) = rows[i][j];
  return M;
}

inline std::vector<IntVector> rows_of(const IntMatrix& M) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < M.rows(); ++i) out.push_back(M.row_vector(i));
  return out;
}

/// Membership in the lattice of an oracle HNF basis.
inline bool in_hnf(const IntMatrix& H, IntVector v) {
  for (std::size_t i = 0; i < H.rows(); ++i) {
    std::size_t c = 0;
    while (H(i, c) == 0) ++c;
    for (std::size_t j = 0; j < c; ++j)
      if (v[j] != 0) return false;
    if (v[c] % H(i, c) != 0) return false;
    const Integer q = v[c] / H(i, c);
    for (std::size_t j = c; j < v.size(); ++j) v[j] -= q * H(i, j);
  }
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

/// Intersection of two row lattices in Z^d (Zassenhaus).
inline IntMatrix intersect(const IntMatrix& A, const IntMatrix& B) {
  const std::size_t d = A.cols();
  IntMatrix Z(A.rows() + B.rows(), 2 * d);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) Z(i, j) = Z(i, d + j) = A(i, j);
  for (std::size_t i = 0; i < B.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) Z(A.rows() + i, j) = B(i, j);
  const IntMatrix H = hnf(Z);
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    bool left_zero = true;
    for (std::size_t j = 0; j < d; ++j) left_zero = left_zero && H(i, j) == 0;
    if (left_zero) {
      IntVector v(H.row(i).begin() + d, H.row(i).end());
      out.push_back(v);
    }
  }
  return hnf(stack(out, d));
}

/// Relation rows d_j e_{free + j} of an FgGroup in canonical coordinates.
inline std::vector<IntVector> relation_rows(const alab::FgGroup& G) {
  std::vector<IntVector> rows;
  for (std::size_t j = 0; j < G.torsion().size(); ++j) {
    IntVector r(G.dimension());
    r[G.free_rank() + j] = G.torsion()[j];
    rows.push_back(r);
  }
  return rows;
}

/// Exponent of the torsion of G / H, from determinant divisors of the
/// preimage lattice generators.
inline Integer quotient_torsion_exponent(const alab::FgGroup& G, const std::vector<IntVector>& gens) {
  std::vector<IntVector> rows = gens;
  for (auto& r : relation_rows(G)) rows.push_back(r);
  if (rows.empty()) return 1;
  const IntVector f = determinant_divisor_factors(stack(rows, G.dimension()));
  return f.empty() ? Integer(1) : f.back();
}

/// nG cap H == nH, tested on preimage lattices in Z^d.
inline bool pure_at(const alab::FgGroup& G, const std::vector<IntVector>& gens, const Integer& n) {
  const std::size_t d = G.dimension();
  const auto N = relation_rows(G);
  std::vector<IntVector> L = gens, nG = N, nH = N;
  for (auto& r : N) L.push_back(r);
  for (std::size_t i = 0; i < d; ++i) {
    IntVector e(d);
    e[i] = n;
    nG.push_back(e);
  }
  for (const auto& g : gens) {
    IntVector v = g;
    for (auto& x : v) x *= n;
    nH.push_back(v);
  }
  return intersect(hnf(stack(L, d)), hnf(stack(nG, d))) == hnf(stack(nH, d));
}

/// Purity at every n up to the bound.
inline bool brute_pure(const alab::FgGroup& G, const std::vector<IntVector>& gens, const Integer& bound) {
  for (Integer n = 2; n <= bound; ++n)
    if (!pure_at(G, gens, n)) return false;
  return true;
}

/// Whether a + G -> b + G, fixing G, extends to an isomorphism of the
/// generated subgroups: for every multiple j <= J, j a in G forces j b = j a
/// and symmetrically.
inline bool brute_type_equal(const alab::FgSubgroup& G, const IntVector& a, const IntVector& b, long J) {
  const std::size_t d = G.ambient.dimension();
  std::vector<IntVector> L = G.generators;
  for (auto& r : relation_rows(G.ambient)) L.push_back(r);
  const IntMatrix H = hnf(stack(L, d));
  const IntMatrix R = hnf(stack(relation_rows(G.ambient), d));
  IntVector ja(d), jb(d), diff(d);
  for (long j = 1; j <= J; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      ja[i] += a[i];
      jb[i] += b[i];
      diff[i] = ja[i] - jb[i];
    }
    const bool ia = in_hnf(H, ja), ib = in_hnf(H, jb);
    if ((ia || ib) && !in_hnf(R, diff)) return false;
  }
  return true;
}

/// Rank over Q by naive elimination.
inline std::size_t rational_rank(std::vector<RatVector> rows) {
  std::size_t r = 0;
  if (rows.empty()) return 0;
  const std::size_t n = rows[0].size();
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      const Rational f = rows[i][c] / rows[r][c];
      for (std::size_t j = c; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  return r;
}

inline RatVector to_rat(const IntVector& v) { return RatVector(v.begin(), v.end()); }

/// B is a basis of (Q A) cap Z^n: B spans the same Q-space as A, has full
/// row rank, and its maximal minors are coprime.
inline bool is_rational_span_closure(const std::vector<IntVector>& A, const IntMatrix& B) {
  std::vector<RatVector> ra;
  for (const auto& a : A) ra.push_back(to_rat(a));
  const std::size_t r = rational_rank(ra);
  if (B.rows() != r) return false;
  if (r == 0) return true;
  std::vector<RatVector> both = ra;
  for (std::size_t i = 0; i < B.rows(); ++i) both.push_back(to_rat(B.row_vector(i)));
  if (rational_rank(both) != r) return false;
  return minor_gcd(B, r) == 1;
}

inline std::vector<long> brute_solutions_box(const IntMatrix& A, const IntVector& b, long box) {
  // Only used for 1 or 2 unknowns; returns the first hit flattened.
  std::vector<long> x(A.cols(), -box);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < A.rows() && ok; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
      ok = s == b[i];
    }
    if (ok) return x;
    std::size_t k = 0;
    while (k < x.size() && x[k] == box) x[k++] = -box;
    if (k == x.size()) return {};
    ++x[k];
  }
}

/// Random FgGroup with at most max_torsion torsion elements.
inline alab::FgGroup random_fg(std::mt19937_64& rng, std::size_t max_free, long max_torsion) {
  const std::size_t f = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(max_free)));
  IntVector t;
  long order = 1;
  const long len = uniform(rng, 0, 3);
  for (long i = 0; i < len; ++i) {
    const long base = t.empty() ? 1 : t.back().get_si();
    const long mult = uniform(rng, t.empty() ? 2 : 1, 6);
    const long d = base * mult;
    if (d < 2 || order * d > max_torsion) break;
    t.push_back(d);
    order *= d;
  }
  return alab::FgGroup(f, t);
}

inline IntVector random_element(std::mt19937_64& rng, const alab::FgGroup& G, long lo, long hi) {
  IntVector v(G.dimension());
  for (std::size_t i = 0; i < G.free_rank(); ++i) v[i] = uniform(rng, lo, hi);
  for (std::size_t j = 0; j < G.torsion().size(); ++j)
    v[G.free_rank() + j] = uniform(rng, 0, G.torsion()[j].get_si() - 1);
  return v;
}

}  // namespace oracle
