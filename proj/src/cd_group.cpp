#include "alab/cd_group.hpp"

#include <algorithm>

namespace alab {

namespace {

IntMatrix integerize(const RatMatrix& W, const Integer& N) {
  IntMatrix Y(W.rows(), W.cols());
  for (std::size_t i = 0; i < W.rows(); ++i)
    for (std::size_t j = 0; j < W.cols(); ++j) {
      const Rational v = W(i, j) * N;
      if (v.get_den() != 1) throw std::logic_error("integerize: denominator left over");
      Y(i, j) = v.get_num();
    }
  return Y;
}

RatMatrix select_cols(const RatMatrix& W, const std::vector<std::size_t>& cols) {
  RatMatrix out(W.rows(), cols.size());
  for (std::size_t i = 0; i < W.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = W(i, cols[j]);
  return out;
}

std::vector<std::size_t> default_zero_cols(const CompletelyDecomposable& C) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < C.rank(); ++i)
    if (C.characteristics()[i].default_kind() == CharDefault::zero) cols.push_back(i);
  return cols;
}

/// Columns constrained at p, each scaled by p^chi_i(p).
RatMatrix local_matrix(const CompletelyDecomposable& C, const RatMatrix& W, const Integer& p) {
  std::vector<std::size_t> cols;
  std::vector<Integer> scale;
  for (std::size_t i = 0; i < C.rank(); ++i) {
    const Height h = C.characteristics()[i].at(p);
    if (h.is_infinite()) continue;
    cols.push_back(i);
    scale.push_back(pow(p, h.value()));
  }
  RatMatrix Z = select_cols(W, cols);
  for (std::size_t i = 0; i < Z.rows(); ++i)
    for (std::size_t j = 0; j < Z.cols(); ++j) Z(i, j) *= scale[j];
  return Z;
}

void insert_primes(std::set<Integer>& out, const Integer& n) {
  if (abs(n) <= 1) return;
  for (const auto& p : prime_divisors(n)) out.insert(p);
}

Integer product_of_factors(const IntMatrix& Y) {
  Integer prod = 1;
  for (const auto& d : smith_normal_form(Y).invariant_factors) prod *= d;
  return prod;
}

std::size_t smith_rank_mod_p(const RatMatrix& Z, const Integer& p) {
  const Integer N = common_denominator(Z);
  if (N % p == 0) throw std::logic_error("smith_rank_mod_p: matrix is not p-integral");
  std::size_t r = 0;
  for (const auto& d : smith_normal_form(integerize(Z, N)).invariant_factors)
    if (d % p != 0) ++r;
  return r;
}

RatVector combine(std::span<const Integer> c, const RatMatrix& B) {
  RatVector x(B.cols());
  for (std::size_t i = 0; i < B.rows(); ++i)
    if (c[i] != 0)
      for (std::size_t j = 0; j < B.cols(); ++j) x[j] += Rational(c[i]) * B(i, j);
  return x;
}

RatVector divide_vec(std::span<const Rational> x, const Integer& n) {
  RatVector y(x.begin(), x.end());
  for (auto& v : y) v /= n;
  return y;
}

/// The part of the purity test shared by producer and certificate checker
/// is only the list of relevant primes; it is recomputed by both.
std::set<Integer> purity_primes(const CompletelyDecomposable& C, const RatMatrix& B) {
  std::set<Integer> primes = C.exception_primes();
  const Integer N = common_denominator(B);
  insert_primes(primes, N);
  insert_primes(primes, product_of_factors(integerize(select_cols(B, default_zero_cols(C)), N)));
  return primes;
}

IntVector primitive_integer(const RatVector& v) {
  Integer den = common_denominator(v);
  IntVector c(v.size());
  Integer g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    c[i] = Rational(v[i] * den).get_num();
    g = gcd(g, c[i]);
  }
  if (g > 1)
    for (auto& x : c) x /= g;
  return c;
}

}  // namespace

bool CompletelyDecomposable::contains(std::span<const Rational> x) const {
  if (x.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i)
    if (!RankOneGroup(chars_[i]).contains(x[i])) return false;
  return true;
}

void CompletelyDecomposable::require_member(std::span<const Rational> x, const std::string& what) const {
  if (x.size() != rank())
    throw InputError(what + ": expected " + std::to_string(rank()) + " coordinates, got " +
                     std::to_string(x.size()));
  if (!contains(x)) throw InputError(what + ": element is not in the completely decomposable group");
}

Height CompletelyDecomposable::p_height(std::span<const Rational> x, const Integer& p) const {
  require_member(x, "p_height");
  Height best = Height::infinity();
  for (std::size_t i = 0; i < rank(); ++i)
    if (x[i] != 0) best = std::min(best, RankOneGroup(chars_[i]).p_height(x[i], p));
  return best;
}

Characteristic CompletelyDecomposable::characteristic_of(std::span<const Rational> x) const {
  require_member(x, "characteristic_of");
  std::optional<Characteristic> acc;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (x[i] == 0) continue;
    Characteristic c = RankOneGroup(chars_[i]).characteristic_of(x[i]);
    acc = acc ? pointwise_min(*acc, c) : c;
  }
  if (!acc) throw InputError("characteristic_of: zero element has no characteristic here");
  return *acc;
}

bool CompletelyDecomposable::finite_valued() const {
  for (const auto& c : chars_) {
    if (c.default_kind() != CharDefault::zero) return false;
    for (const auto& kv : c.exceptions())
      if (kv.second.is_infinite()) return false;
  }
  return true;
}

IntVector CompletelyDecomposable::scales() const {
  if (!finite_valued()) throw std::logic_error("scales: ambient is not finite-valued");
  IntVector s;
  for (const auto& c : chars_) {
    Integer N = 1;
    for (const auto& [p, h] : c.exceptions()) N *= pow(p, h.value());
    s.push_back(N);
  }
  return s;
}

std::set<Integer> CompletelyDecomposable::exception_primes() const {
  std::set<Integer> out;
  for (const auto& c : chars_)
    for (const auto& kv : c.exceptions()) out.insert(kv.first);
  return out;
}

CompletelyDecomposable direct_sum(const CompletelyDecomposable& a, const CompletelyDecomposable& b) {
  auto chars = a.characteristics();
  chars.insert(chars.end(), b.characteristics().begin(), b.characteristics().end());
  return CompletelyDecomposable(std::move(chars));
}

RatMatrix z_span_basis(const std::vector<RatVector>& gens, std::size_t dim) {
  RatMatrix G(gens.size(), dim);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].size() != dim) throw InputError("generator has the wrong number of coordinates");
    for (std::size_t j = 0; j < dim; ++j) G(i, j) = gens[i][j];
  }
  const Integer N = common_denominator(G);
  const IntMatrix H = lattice_basis(integerize(G, N));
  RatMatrix B(H.rows(), dim);
  for (std::size_t i = 0; i < H.rows(); ++i)
    for (std::size_t j = 0; j < dim; ++j) B(i, j) = ratio(H(i, j), N);
  return B;
}

bool in_z_span(const RatMatrix& basis, std::span<const Rational> x) {
  if (x.size() != basis.cols()) return false;
  const Integer N = lcm(common_denominator(basis), common_denominator(x));
  IntVector y(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) y[j] = Rational(x[j] * N).get_num();
  return in_lattice(lattice_basis(integerize(basis, N)), y);
}

CdPurityResult is_pure(const CompletelyDecomposable& C, const std::vector<RatVector>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) C.require_member(gens[i], "generator " + std::to_string(i));
  const RatMatrix B = z_span_basis(gens, C.rank());
  const std::size_t r = B.rows();
  const auto zero_cols = default_zero_cols(C);
  const RatMatrix B0 = select_cols(B, zero_cols);

  if (rank(B0) < r) {
    // A rational relation among the default-zero columns fails at almost
    // every prime; take the first prime that is not special.
    const auto kernel = left_kernel(B0);
    const IntVector c = primitive_integer(kernel.front());
    const auto special = C.exception_primes();
    Integer p = 2;
    auto bad = [&](const Integer& q) {
      if (special.count(q)) return true;
      return std::all_of(c.begin(), c.end(), [&](const Integer& v) { return v == 0 || v % q == 0; });
    };
    while (bad(p)) p = next_prime(p);
    return CdNonPurityWitness{C, B, p, combine(c, B)};
  }

  const auto primes = purity_primes(C, B);
  for (const auto& p : primes) {
    const RatMatrix Z = local_matrix(C, B, p);
    if (rank_mod_p(Z, p) == r) continue;
    const auto ker = left_kernel_mod_p(Z, p);
    return CdNonPurityWitness{C, B, p, combine(ker.front(), B)};
  }
  return CdPurityCertificate{C, B, {primes.begin(), primes.end()}};
}

bool verify(const CdPurityCertificate& c) {
  const auto& C = c.ambient;
  const RatMatrix& B = c.basis;
  if (B.cols() != C.rank()) return false;
  for (std::size_t i = 0; i < B.rows(); ++i)
    if (!C.contains(B.row(i))) return false;
  const std::size_t r = B.rows();
  const Integer N = common_denominator(B);
  if (smith_normal_form(integerize(B, N)).rank() != r) return false;
  const RatMatrix B0 = select_cols(B, default_zero_cols(C));
  if (smith_normal_form(integerize(B0, N)).rank() != r) return false;
  const std::set<Integer> listed(c.checked_primes.begin(), c.checked_primes.end());
  for (const auto& p : purity_primes(C, B)) {
    if (!listed.count(p)) return false;
    if (smith_rank_mod_p(local_matrix(C, B, p), p) != r) return false;
  }
  return true;
}

bool verify(const CdNonPurityWitness& w) {
  const auto& C = w.ambient;
  if (w.n < 2 || w.basis.cols() != C.rank() || w.h.size() != C.rank()) return false;
  for (std::size_t i = 0; i < w.basis.rows(); ++i)
    if (!C.contains(w.basis.row(i))) return false;
  if (!in_z_span(w.basis, w.h)) return false;
  const RatVector q = divide_vec(w.h, w.n);
  return C.contains(q) && !in_z_span(w.basis, q);
}

bool CdClosure::contains(std::span<const Rational> x) const {
  if (!ambient.contains(x)) return false;
  if (span.rows() == 0) return std::all_of(x.begin(), x.end(), [](const Rational& v) { return v == 0; });
  return solve_left(span, x).has_value();
}

CdClosure cd_closure_of_span(const CompletelyDecomposable& C, const RatMatrix& span) {
  if (span.cols() != C.rank()) throw InputError("closure span has the wrong number of coordinates");
  CdClosure out{C, rref(span).R, std::nullopt};
  if (C.finite_valued()) {
    const IntVector s = C.scales();
    RatMatrix scaled = out.span;
    for (std::size_t i = 0; i < scaled.rows(); ++i)
      for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= s[j];
    const IntMatrix sat = lattice_basis(lattice_saturation(integerize(scaled, common_denominator(scaled))));
    RatMatrix zb(sat.rows(), C.rank());
    for (std::size_t i = 0; i < sat.rows(); ++i)
      for (std::size_t j = 0; j < C.rank(); ++j) zb(i, j) = ratio(sat(i, j), s[j]);
    out.z_basis = std::move(zb);
  }
  return out;
}

CdClosure cd_closure(const CompletelyDecomposable& C, const std::vector<RatVector>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) C.require_member(gens[i], "generator " + std::to_string(i));
  RatMatrix G(gens.size(), C.rank());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < C.rank(); ++j) G(i, j) = gens[i][j];
  return cd_closure_of_span(C, G);
}

std::set<Integer> relevant_primes(const CompletelyDecomposable& C, const RatMatrix& W) {
  std::set<Integer> primes = C.exception_primes();
  const Integer N = common_denominator(W);
  insert_primes(primes, N);
  insert_primes(primes, product_of_factors(integerize(select_cols(W, default_zero_cols(C)), N)));
  return primes;
}

LocalModule local_module(const CompletelyDecomposable& C, const RatMatrix& W, const Integer& p) {
  const RatMatrix Z = local_matrix(C, W, p);
  const Integer N = common_denominator(Z);
  const long e = valuation(N, p);
  const SmithForm S = smith_normal_form(integerize(Z, N));
  LocalModule out;
  for (std::size_t j = 0; j < W.rows(); ++j) {
    RatVector u(W.rows());
    for (std::size_t k = 0; k < W.rows(); ++k) u[k] = S.U(j, k);
    if (j < S.rank()) {
      const long shift = e - valuation(S.invariant_factors[j], p);
      const Rational f = shift >= 0 ? Rational(pow(p, shift)) : Rational(1, pow(p, -shift));
      for (auto& v : u) v *= f;
      out.lattice.push_back(std::move(u));
    } else {
      out.lines.push_back(std::move(u));
    }
  }
  return out;
}

bool locally_in(const CompletelyDecomposable& C, std::span<const Rational> x, const Integer& p) {
  for (std::size_t i = 0; i < C.rank(); ++i) {
    if (x[i] == 0) continue;
    const Height h = C.characteristics()[i].at(p);
    if (h.is_infinite()) continue;
    if (valuation(x[i], p) < -static_cast<long>(h.value())) return false;
  }
  return true;
}

RatMatrix generic_kernel(const CompletelyDecomposable& C, const RatMatrix& W) {
  const auto ker = left_kernel(select_cols(W, default_zero_cols(C)));
  RatMatrix K(ker.size(), W.rows());
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (std::size_t j = 0; j < W.rows(); ++j) K(i, j) = ker[i][j];
  return rref(K).R;
}

std::optional<RatVector> local_gap(const CompletelyDecomposable& C, const RatMatrix& W1,
                                   const RatMatrix& W2, const Integer& p) {
  const LocalModule M = local_module(C, W1, p);
  for (const auto& t : M.lattice)
    if (!locally_in(C, row_times(t, W2), p)) return t;
  for (const auto& line : M.lines) {
    const RatVector y = row_times(line, W2);
    for (std::size_t i = 0; i < C.rank(); ++i) {
      const Height h = C.characteristics()[i].at(p);
      if (h.is_infinite() || y[i] == 0) continue;
      // Push the coordinate below the allowed valuation.
      const long k = std::max<long>(0, valuation(y[i], p) + static_cast<long>(h.value()) + 1);
      RatVector t = line;
      const Rational f(1, pow(p, k));
      for (auto& v : t) v *= f;
      return t;
    }
  }
  return std::nullopt;
}

RatVector globalize(const RatMatrix& W, RatVector t, const Integer& p) {
  const RatVector x = row_times(t, W);
  const Integer unit = split_prime_part(common_denominator(x), p).unit;
  for (auto& v : t) v *= unit;
  return t;
}

}  // namespace alab
