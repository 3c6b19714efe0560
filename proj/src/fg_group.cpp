#include "alab/fg_group.hpp"

#include <algorithm>

namespace alab {

FgGroup::FgGroup(std::size_t free_rank, IntVector torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  for (std::size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw InputError("invariant factors must be >= 2");
    if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
      throw InputError("invariant factors must form a divisibility chain");
  }
}

FgGroup FgGroup::from_relations(const IntMatrix& A) {
  const auto snf = smith_normal_form(A);
  const std::size_t n = A.cols();
  const std::size_t r = snf.rank();
  std::vector<std::size_t> cols;  // canonical order: free, then torsion
  for (std::size_t j = r; j < n; ++j) cols.push_back(j);
  IntVector torsion;
  for (std::size_t j = 0; j < r; ++j)
    if (snf.invariant_factors[j] != 1) {
      cols.push_back(j);
      torsion.push_back(snf.invariant_factors[j]);
    }
  FgGroup g(n - r, std::move(torsion));
  Presentation p;
  p.relations = A;
  p.to_canonical = IntMatrix(n, cols.size());
  p.from_canonical = IntMatrix(cols.size(), n);
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) {
      p.to_canonical(i, c) = snf.V(i, cols[c]);
      p.from_canonical(c, i) = snf.Vinv(cols[c], i);
    }
  g.presentation_ = std::move(p);
  return g;
}

Integer FgGroup::torsion_order() const {
  Integer o = 1;
  for (const auto& d : torsion_) o *= d;
  return o;
}

Integer FgGroup::torsion_exponent() const { return torsion_.empty() ? Integer(1) : torsion_.back(); }

IntVector FgGroup::normalize(std::span<const Integer> x) const {
  if (x.size() != dimension())
    throw InputError("element has " + std::to_string(x.size()) + " coordinates, group needs " +
                     std::to_string(dimension()));
  IntVector out(x.begin(), x.end());
  for (std::size_t i = 0; i < torsion_.size(); ++i)
    out[free_rank_ + i] = mod(out[free_rank_ + i], torsion_[i]);
  return out;
}

IntVector FgGroup::add(std::span<const Integer> x, std::span<const Integer> y) const {
  if (x.size() != dimension() || y.size() != dimension())
    throw InputError("add: coordinate length mismatch");
  IntVector s(dimension());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = x[i] + y[i];
  return normalize(s);
}

IntVector FgGroup::scale(const Integer& k, std::span<const Integer> x) const {
  IntVector s(x.begin(), x.end());
  for (auto& v : s) v *= k;
  return normalize(s);
}

bool FgGroup::is_zero(std::span<const Integer> x) const {
  const auto n = normalize(x);
  return std::all_of(n.begin(), n.end(), [](const Integer& v) { return v == 0; });
}

IntMatrix FgGroup::relation_rows() const {
  IntMatrix R(torsion_.size(), dimension());
  for (std::size_t i = 0; i < torsion_.size(); ++i) R(i, free_rank_ + i) = torsion_[i];
  return R;
}

IntVector FgGroup::to_canonical(std::span<const Integer> original) const {
  if (!presentation_) return normalize(original);
  return normalize(row_times(original, presentation_->to_canonical));
}

FgGroup direct_sum(const FgGroup& a, const FgGroup& b) {
  const std::size_t n = a.dimension() + b.dimension();
  IntMatrix rel(n, n);
  for (std::size_t i = 0; i < a.torsion().size(); ++i)
    rel(a.free_rank() + i, a.free_rank() + i) = a.torsion()[i];
  for (std::size_t i = 0; i < b.torsion().size(); ++i) {
    const std::size_t k = a.dimension() + b.free_rank() + i;
    rel(k, k) = b.torsion()[i];
  }
  return FgGroup::from_relations(rel);
}

std::optional<Integer> element_order(const FgGroup& G, std::span<const Integer> x) {
  const auto v = G.normalize(x);
  for (std::size_t i = 0; i < G.free_rank(); ++i)
    if (v[i] != 0) return std::nullopt;
  Integer order = 1;
  for (std::size_t i = 0; i < G.torsion().size(); ++i) {
    const Integer& d = G.torsion()[i];
    order = lcm(order, Integer(d / gcd(d, v[G.free_rank() + i])));
  }
  return order;
}

Ranks ranks(const FgGroup& G) {
  Ranks r;
  r.rk0 = G.free_rank();
  for (const auto& d : G.torsion())
    for (const auto& p : prime_divisors(d)) ++r.rkp[p];
  return r;
}

std::size_t dim_mod_p(const FgGroup& G, const Integer& p) {
  if (!is_prime(p)) throw InputError("dim_mod_p: " + to_string(p) + " is not prime");
  std::size_t d = G.free_rank();
  for (const auto& t : G.torsion())
    if (t % p == 0) ++d;
  return d;
}

FgSubgroup::FgSubgroup(FgGroup g, std::vector<IntVector> gens) : ambient(std::move(g)) {
  generators.reserve(gens.size());
  for (const auto& x : gens) generators.push_back(ambient.normalize(x));
}

IntMatrix FgSubgroup::lift_basis() const {
  std::vector<IntVector> rows = generators;
  const IntMatrix R = ambient.relation_rows();
  for (std::size_t i = 0; i < R.rows(); ++i) rows.push_back(R.row_vector(i));
  return lattice_basis(rows, ambient.dimension());
}

bool FgSubgroup::contains(std::span<const Integer> x) const {
  return in_lattice(lift_basis(), ambient.normalize(x));
}

bool FgSubgroup::same_as(const FgSubgroup& other) const {
  return ambient == other.ambient && lift_basis() == other.lift_basis();
}

bool FgSubgroup::contained_in(const FgSubgroup& other) const {
  if (!(ambient == other.ambient)) return false;
  const IntMatrix B = other.lift_basis();
  return std::all_of(generators.begin(), generators.end(),
                     [&](const IntVector& g) { return in_lattice(B, g); });
}

FgGroup quotient(const FgSubgroup& H) { return FgGroup::from_relations(H.lift_basis()); }

bool divisible_in(const FgGroup& G, std::span<const Integer> x, const Integer& n) {
  const auto v = G.normalize(x);
  for (std::size_t i = 0; i < G.free_rank(); ++i)
    if (v[i] % n != 0) return false;
  for (std::size_t i = 0; i < G.torsion().size(); ++i)
    if (v[G.free_rank() + i] % gcd(n, G.torsion()[i]) != 0) return false;
  return true;
}

namespace {

IntMatrix scaled_lift(const FgSubgroup& H, const Integer& n) {
  std::vector<IntVector> rows;
  for (const auto& g : H.generators) {
    IntVector s = g;
    for (auto& v : s) v *= n;
    rows.push_back(std::move(s));
  }
  const IntMatrix R = H.ambient.relation_rows();
  for (std::size_t i = 0; i < R.rows(); ++i) rows.push_back(R.row_vector(i));
  return lattice_basis(rows, H.ambient.dimension());
}

// Lift of nG: n Z^dim + relations.
IntMatrix multiple_lattice(const FgGroup& G, const Integer& n) {
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < G.dimension(); ++i) {
    IntVector e(G.dimension());
    e[i] = n;
    rows.push_back(std::move(e));
  }
  const IntMatrix R = G.relation_rows();
  for (std::size_t i = 0; i < R.rows(); ++i) rows.push_back(R.row_vector(i));
  return lattice_basis(rows, G.dimension());
}

std::vector<Integer> purity_moduli(const Integer& exponent) {
  std::vector<Integer> out;
  if (exponent == 1) return out;
  for (const auto& [p, e] : factor(exponent)) {
    Integer q = 1;
    for (unsigned k = 0; k < e; ++k) {
      q *= p;
      out.push_back(q);
    }
  }
  return out;
}

// Index of a full-rank sublattice given by generating rows of Z^dim.
Integer lattice_index(const std::vector<IntVector>& rows, std::size_t dim) {
  const IntMatrix B = lattice_basis(rows, dim);
  if (B.rows() != dim) throw std::logic_error("lattice_index: sublattice not of full rank");
  Integer idx = 1;
  for (std::size_t i = 0; i < dim; ++i) idx *= B(i, i);
  return idx;
}

std::vector<IntVector> rows_of(const IntMatrix& M) {
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < M.rows(); ++i) out.push_back(M.row_vector(i));
  return out;
}

// |H / qH| versus |(H + qG) / qG| for H = L / R, counted via lattice indices.
bool injective_mod(const FgSubgroup& H, const Integer& q) {
  const std::size_t N = H.ambient.dimension();
  const IntMatrix L = H.lift_basis();
  const IntMatrix R = H.ambient.relation_rows();
  const std::size_t l = L.rows();

  // H / qH = L / (qL + R), computed in coordinates of the basis L.
  std::vector<IntVector> sub;
  for (std::size_t i = 0; i < l; ++i) {
    IntVector e(l);
    e[i] = q;
    sub.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < R.rows(); ++i) {
    const auto c = lattice_coordinates(L, R.row(i));
    if (!c) return false;
    sub.push_back(*c);
  }
  const Integer hq = l == 0 ? Integer(1) : lattice_index(sub, l);

  std::vector<IntVector> qG = rows_of(R);
  for (std::size_t i = 0; i < N; ++i) {
    IntVector e(N);
    e[i] = q;
    qG.push_back(std::move(e));
  }
  std::vector<IntVector> hplus = qG;
  for (const auto& r : rows_of(L)) hplus.push_back(r);
  const Integer g_over_qg = N == 0 ? Integer(1) : lattice_index(qG, N);
  const Integer g_over_h = N == 0 ? Integer(1) : lattice_index(hplus, N);
  return hq * g_over_h == g_over_qg;
}

}  // namespace

FgPurityResult is_pure(const FgSubgroup& H) {
  const FgGroup Q = quotient(H);
  const Integer e = Q.torsion_exponent();
  FgPurityCertificate cert{H, e, purity_moduli(e)};
  const IntMatrix L = H.lift_basis();
  for (const auto& q : cert.checked_moduli) {
    const IntMatrix meet = lattice_intersection(multiple_lattice(H.ambient, q), L);
    const IntMatrix qH = scaled_lift(H, q);
    for (std::size_t i = 0; i < meet.rows(); ++i) {
      if (in_lattice(qH, meet.row(i))) continue;
      return FgNonPurityWitness{H, q, H.ambient.normalize(meet.row(i))};
    }
  }
  return cert;
}

bool verify(const FgPurityCertificate& c) {
  try {
    // Recompute the exponent from the determinantal route, not the quotient.
    const auto snf = smith_normal_form(c.subgroup.lift_basis());
    Integer e = 1;
    for (const auto& d : snf.invariant_factors) e = lcm(e, d);
    if (e != c.quotient_exponent) return false;
    if (c.checked_moduli != purity_moduli(e)) return false;
    return std::all_of(c.checked_moduli.begin(), c.checked_moduli.end(),
                       [&](const Integer& q) { return injective_mod(c.subgroup, q); });
  } catch (const std::exception&) {
    return false;
  }
}

bool verify(const FgNonPurityWitness& w) {
  try {
    if (w.n < 1) return false;
    const auto& G = w.subgroup.ambient;
    const IntVector h = G.normalize(w.h);
    if (!w.subgroup.contains(h)) return false;
    if (!divisible_in(G, h, w.n)) return false;
    return !in_lattice(scaled_lift(w.subgroup, w.n), h);
  } catch (const std::exception&) {
    return false;
  }
}

FgSubgroup pure_closure(const std::vector<IntVector>& A, const FgGroup& G, ClosureTrace* trace) {
  if (!G.is_torsion_free())
    throw InputError("pure_closure: ambient has torsion; the staged closure needs a torsion-free group");
  const std::size_t n = G.dimension();
  std::vector<IntVector> current;
  for (const auto& a : A) current.push_back(G.normalize(a));
  IntMatrix basis = lattice_basis(current, n);  // A_1: negations and finite sums
  if (trace) trace->stages.push_back(basis);
  for (;;) {
    // Even step: every h with n h in the current subgroup. The Smith rows
    // d_i * Vinv_i span the subgroup, so each Vinv_i is such an h.
    const auto snf = smith_normal_form(basis);
    std::vector<IntVector> grown = rows_of(basis);
    for (std::size_t i = 0; i < snf.rank(); ++i)
      if (snf.invariant_factors[i] != 1) grown.push_back(snf.Vinv.row_vector(i));
    IntMatrix next = lattice_basis(grown, n);  // odd step
    if (trace) trace->stages.push_back(next);
    if (next == basis) break;
    basis = std::move(next);
  }
  return FgSubgroup(G, rows_of(basis));
}

}  // namespace alab
