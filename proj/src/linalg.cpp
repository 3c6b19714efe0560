#include "alab/linalg.hpp"

#include <algorithm>

namespace alab {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

IntVector row_times(std::span<const Integer> v, const IntMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("row_times: shape mismatch");
  IntVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

RatVector row_times(std::span<const Rational> v, const RatMatrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("row_times: shape mismatch");
  RatVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

IntVector times_col(const IntMatrix& m, std::span<const Integer> v) {
  if (v.size() != m.cols()) throw std::invalid_argument("times_col: shape mismatch");
  IntVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

namespace {

// (r_a, r_b) <- (s r_a + u r_b, x r_a + y r_b), determinant s*y - u*x = 1.
void mix_rows(IntMatrix& M, std::size_t a, std::size_t b, const Integer& s, const Integer& u,
              const Integer& x, const Integer& y) {
  for (std::size_t j = 0; j < M.cols(); ++j) {
    Integer ra = M(a, j), rb = M(b, j);
    M(a, j) = s * ra + u * rb;
    M(b, j) = x * ra + y * rb;
  }
}

void mix_cols(IntMatrix& M, std::size_t a, std::size_t b, const Integer& s, const Integer& u,
              const Integer& x, const Integer& y) {
  for (std::size_t i = 0; i < M.rows(); ++i) {
    Integer ca = M(i, a), cb = M(i, b);
    M(i, a) = s * ca + u * cb;
    M(i, b) = x * ca + y * cb;
  }
}

void negate_row(IntMatrix& M, std::size_t r) {
  for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) = -M(r, j);
}

struct SmithWork {
  IntMatrix A, U, V, Vinv;

  void rows(std::size_t a, std::size_t b, const Integer& s, const Integer& u, const Integer& x,
            const Integer& y) {
    mix_rows(A, a, b, s, u, x, y);
    mix_rows(U, a, b, s, u, x, y);
  }
  // A <- A T, V <- V T, Vinv <- T^{-1} Vinv.
  void cols(std::size_t a, std::size_t b, const Integer& s, const Integer& u, const Integer& x,
            const Integer& y) {
    mix_cols(A, a, b, s, u, x, y);
    mix_cols(V, a, b, s, u, x, y);
    mix_rows(Vinv, a, b, y, Integer(-x), Integer(-u), s);
  }
  void swap_rows(std::size_t a, std::size_t b) {
    A.swap_rows(a, b);
    U.swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    A.swap_cols(a, b);
    V.swap_cols(a, b);
    Vinv.swap_rows(a, b);
  }
};

// Bezout step zeroing `b` against pivot `a`: returns (s, u, x, y).
struct Bezout {
  Integer s, u, x, y;
};

Bezout bezout_step(const Integer& a, const Integer& b) {
  if (b % a == 0) return {1, 0, Integer(-(b / a)), 1};
  const auto e = extended_gcd(a, b);
  return {e.s, e.t, Integer(-(b / e.g)), Integer(a / e.g)};
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  SmithWork w{A, IntMatrix::identity(m), IntMatrix::identity(n), IntMatrix::identity(n)};
  const std::size_t k = std::min(m, n);

  for (std::size_t t = 0; t < k; ++t) {
    // Smallest nonzero entry of the trailing block as pivot.
    std::size_t pi = m, pj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (w.A(i, j) != 0 && (pi == m || abs(w.A(i, j)) < abs(w.A(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi == m) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);

    for (;;) {
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.A(i, t) == 0) continue;
        const auto b = bezout_step(w.A(t, t), w.A(i, t));
        w.rows(t, i, b.s, b.u, b.x, b.y);
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.A(t, j) == 0) continue;
        const auto b = bezout_step(w.A(t, t), w.A(t, j));
        w.cols(t, j, b.s, b.u, b.x, b.y);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < m && clean; ++i) clean = w.A(i, t) == 0;
      if (!clean) continue;

      // Enforce d_t | every trailing entry by folding an offending row in.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.A(i, j) % w.A(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      w.rows(t, bad, 1, 1, 0, 1);
    }
    if (w.A(t, t) < 0) {
      negate_row(w.A, t);
      negate_row(w.U, t);
    }
  }

  SmithForm out;
  for (std::size_t t = 0; t < k; ++t)
    if (w.A(t, t) != 0) out.invariant_factors.push_back(w.A(t, t));
  out.U = std::move(w.U);
  out.D = std::move(w.A);
  out.V = std::move(w.V);
  out.Vinv = std::move(w.Vinv);
  return out;
}

HermiteForm hermite_normal_form(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  HermiteForm out{A, IntMatrix::identity(m), 0, {}};
  IntMatrix& H = out.H;
  IntMatrix& U = out.U;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (std::size_t i = r + 1; i < m; ++i) {
      if (H(i, c) == 0) continue;
      if (H(r, c) == 0) {
        H.swap_rows(r, i);
        U.swap_rows(r, i);
        continue;
      }
      const auto b = bezout_step(H(r, c), H(i, c));
      mix_rows(H, r, i, b.s, b.u, b.x, b.y);
      mix_rows(U, r, i, b.s, b.u, b.x, b.y);
    }
    if (H(r, c) == 0) continue;
    if (H(r, c) < 0) {
      negate_row(H, r);
      negate_row(U, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      const Integer q = floor_div(H(i, c), H(r, c));
      if (q == 0) continue;
      mix_rows(H, i, r, 1, Integer(-q), 0, 1);
      mix_rows(U, i, r, 1, Integer(-q), 0, 1);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

SolveResult solve_integer_system(const IntMatrix& A, std::span<const Integer> b) {
  if (b.size() != A.rows())
    throw InputError("solve_integer_system: right-hand side has " + std::to_string(b.size()) +
                     " entries, matrix has " + std::to_string(A.rows()) + " rows");
  const auto snf = smith_normal_form(A);
  const IntVector ub = times_col(snf.U, b);
  const std::size_t r = snf.rank();
  IntVector y(A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const Integer d = i < r ? snf.invariant_factors[i] : Integer(0);
    const bool ok = d == 0 ? ub[i] == 0 : ub[i] % d == 0;
    if (!ok) {
      SolveObstruction o;
      o.row = i;
      o.modulus = d;
      o.value = ub[i];
      o.combination = snf.U.row_vector(i);
      o.reduced_row = i < r ? snf.Vinv.row_vector(i) : IntVector(A.cols());
      return o;
    }
    if (i < r) y[i] = ub[i] / d;
  }
  SolutionSet s;
  s.particular = times_col(snf.V, y);
  std::vector<IntVector> kernel;
  for (std::size_t j = r; j < A.cols(); ++j) kernel.push_back(snf.V.col_vector(j));
  const IntMatrix kb = lattice_basis(kernel, A.cols());
  for (std::size_t i = 0; i < kb.rows(); ++i) s.homogeneous.push_back(kb.row_vector(i));
  return s;
}

bool check_obstruction(const IntMatrix& A, std::span<const Integer> b, const SolveObstruction& o) {
  if (o.combination.size() != A.rows() || o.reduced_row.size() != A.cols()) return false;
  const IntVector lhs = row_times(o.combination, A);
  Integer value = 0;
  for (std::size_t i = 0; i < b.size(); ++i) value += o.combination[i] * b[i];
  if (value != o.value) return false;
  for (std::size_t j = 0; j < lhs.size(); ++j)
    if (lhs[j] != o.modulus * o.reduced_row[j]) return false;
  if (o.modulus == 0) return value != 0;
  return value % o.modulus != 0;
}

IntMatrix lattice_basis(const IntMatrix& rows) {
  const auto h = hermite_normal_form(rows);
  IntMatrix out(h.rank, rows.cols());
  for (std::size_t i = 0; i < h.rank; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) out(i, j) = h.H(i, j);
  return out;
}

IntMatrix lattice_basis(const std::vector<IntVector>& rows, std::size_t dim) {
  return lattice_basis(IntMatrix::from_rows(rows, dim));
}

std::optional<IntVector> lattice_coordinates(const IntMatrix& B, std::span<const Integer> v) {
  if (v.size() != B.cols()) throw std::invalid_argument("lattice_coordinates: dimension mismatch");
  IntVector rest(v.begin(), v.end());
  IntVector coeffs(B.rows());
  std::size_t col = 0;
  for (std::size_t i = 0; i < B.rows(); ++i) {
    while (col < B.cols() && B(i, col) == 0) {
      if (rest[col] != 0) return std::nullopt;
      ++col;
    }
    if (col == B.cols()) break;
    if (rest[col] % B(i, col) != 0) return std::nullopt;
    const Integer q = rest[col] / B(i, col);
    coeffs[i] = q;
    for (std::size_t j = col; j < B.cols(); ++j) rest[j] -= q * B(i, j);
    ++col;
  }
  for (const auto& x : rest)
    if (x != 0) return std::nullopt;
  return coeffs;
}

bool in_lattice(const IntMatrix& B, std::span<const Integer> v) {
  return lattice_coordinates(B, v).has_value();
}

std::vector<IntVector> integer_left_kernel(const IntMatrix& A) {
  const auto h = hermite_normal_form(A);
  std::vector<IntVector> out;
  for (std::size_t i = h.rank; i < A.rows(); ++i) out.push_back(h.U.row_vector(i));
  return out;
}

IntMatrix lattice_intersection(const IntMatrix& B1, const IntMatrix& B2) {
  if (B1.cols() != B2.cols()) throw std::invalid_argument("lattice_intersection: dimension mismatch");
  IntMatrix stacked(B1.rows() + B2.rows(), B1.cols());
  for (std::size_t i = 0; i < B1.rows(); ++i)
    for (std::size_t j = 0; j < B1.cols(); ++j) stacked(i, j) = B1(i, j);
  for (std::size_t i = 0; i < B2.rows(); ++i)
    for (std::size_t j = 0; j < B2.cols(); ++j) stacked(B1.rows() + i, j) = B2(i, j);
  std::vector<IntVector> gens;
  for (const auto& k : integer_left_kernel(stacked)) {
    IntVector y(k.begin(), k.begin() + static_cast<std::ptrdiff_t>(B1.rows()));
    gens.push_back(row_times(y, B1));
  }
  return lattice_basis(gens, B1.cols());
}

IntMatrix lattice_saturation(const IntMatrix& rows) {
  const auto snf = smith_normal_form(rows);
  std::vector<IntVector> gens;
  for (std::size_t i = 0; i < snf.rank(); ++i) gens.push_back(snf.Vinv.row_vector(i));
  return lattice_basis(gens, rows.cols());
}

Integer determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("determinant: non-square");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  IntMatrix M = A;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && M(s, k) == 0) ++s;
      if (s == n) return 0;
      M.swap_rows(k, s);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = M(i, j) * M(k, k) - M(i, k) * M(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        M(i, j) = v;
      }
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

RowEchelon rref(const RatMatrix& A) {
  RatMatrix R = A;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < R.cols() && r < R.rows(); ++c) {
    std::size_t p = r;
    while (p < R.rows() && R(p, c) == 0) ++p;
    if (p == R.rows()) continue;
    R.swap_rows(r, p);
    const Rational inv = 1 / R(r, c);
    for (std::size_t j = c; j < R.cols(); ++j) R(r, j) *= inv;
    for (std::size_t i = 0; i < R.rows(); ++i) {
      if (i == r || R(i, c) == 0) continue;
      const Rational f = R(i, c);
      for (std::size_t j = c; j < R.cols(); ++j) R(i, j) -= f * R(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  RatMatrix trimmed(r, A.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) trimmed(i, j) = R(i, j);
  return {std::move(trimmed), std::move(pivots)};
}

std::size_t rank(const RatMatrix& A) { return rref(A).pivots.size(); }
std::size_t rank(const IntMatrix& A) { return hermite_normal_form(A).rank; }

std::vector<RatVector> left_kernel(const RatMatrix& A) {
  // Null space of A^T.
  const auto e = rref(A.transpose());
  const std::size_t n = A.rows();
  std::vector<bool> is_pivot(n, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RatVector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(n);
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.R(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<RatVector> solve_left(const RatMatrix& A, std::span<const Rational> b) {
  if (b.size() != A.cols()) throw std::invalid_argument("solve_left: dimension mismatch");
  // Solve A^T y = b via rref of [A^T | b].
  RatMatrix aug(A.cols(), A.rows() + 1);
  for (std::size_t i = 0; i < A.cols(); ++i) {
    for (std::size_t j = 0; j < A.rows(); ++j) aug(i, j) = A(j, i);
    aug(i, A.rows()) = b[i];
  }
  const auto e = rref(aug);
  RatVector y(A.rows());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == A.rows()) return std::nullopt;
    y[e.pivots[i]] = e.R(i, A.rows());
  }
  return y;
}

namespace {

Integer reduce_mod_p(const Rational& q, const Integer& p) {
  const Integer den(q.get_den());
  if (den % p == 0) throw std::logic_error("reduce_mod_p: entry is not p-integral");
  return mod(Integer(q.get_num()) * inverse_mod(den, p), p);
}

// Gauss-Jordan over F_p on an integer matrix with entries in [0, p).
std::vector<std::size_t> eliminate_mod_p(IntMatrix& M, const Integer& p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols() && r < M.rows(); ++c) {
    std::size_t piv = r;
    while (piv < M.rows() && M(piv, c) == 0) ++piv;
    if (piv == M.rows()) continue;
    M.swap_rows(r, piv);
    const Integer inv = inverse_mod(M(r, c), p);
    for (std::size_t j = 0; j < M.cols(); ++j) M(r, j) = mod(M(r, j) * inv, p);
    for (std::size_t i = 0; i < M.rows(); ++i) {
      if (i == r || M(i, c) == 0) continue;
      const Integer f = M(i, c);
      for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) = mod(M(i, j) - f * M(r, j), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank_mod_p(const RatMatrix& A, const Integer& p) {
  IntMatrix M(A.rows(), A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) M(i, j) = reduce_mod_p(A(i, j), p);
  return eliminate_mod_p(M, p).size();
}

std::vector<IntVector> left_kernel_mod_p(const RatMatrix& A, const Integer& p) {
  const std::size_t n = A.rows();
  IntMatrix M(A.cols(), n);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) M(j, i) = reduce_mod_p(A(i, j), p);
  const auto pivots = eliminate_mod_p(M, p);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<IntVector> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    IntVector v(n);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = mod(Integer(-M(i, f)), p);
    out.push_back(std::move(v));
  }
  return out;
}

bool same_row_space(const RatMatrix& A, const RatMatrix& B) {
  if (A.cols() != B.cols()) return false;
  return rref(A).R == rref(B).R;
}

Integer common_denominator(std::span<const Rational> v) {
  Integer d = 1;
  for (const auto& q : v) d = lcm(d, Integer(q.get_den()));
  return d;
}

Integer common_denominator(const RatMatrix& A) { return common_denominator(std::span(A.data())); }

}  // namespace alab
