#include "alab/galois.hpp"

#include <algorithm>

namespace alab {

// ---------------------------------------------------------------------------
// K^ab
// ---------------------------------------------------------------------------

GaloisTypeAb gtype_ab(std::span<const Integer> a0, const FgSubgroup& G) {
  const FgGroup& H = G.ambient;
  const IntVector a = H.normalize(a0);
  const IntMatrix L = G.lift_basis();
  // The multiples of a landing in the lift lattice form an ideal nZ.
  GaloisTypeAb t;
  if (L.rows() == 0) {
    if (std::all_of(a.begin(), a.end(), [](const Integer& v) { return v == 0; })) {
      t.free = false;
      t.n = 1;
      t.gstar = a;
    }
    return t;
  }
  const auto coeffs = solve_left(to_rational(L), std::vector<Rational>(a.begin(), a.end()));
  if (!coeffs) return t;
  t.free = false;
  t.n = common_denominator(*coeffs);
  t.gstar = H.scale(t.n, a);
  return t;
}

std::optional<AbTypeWitness> ab_type_difference(std::span<const Integer> a, std::span<const Integer> b,
                                                const FgSubgroup& G) {
  const GaloisTypeAb ta = gtype_ab(a, G), tb = gtype_ab(b, G);
  if (ta == tb) return std::nullopt;
  AbTypeWitness w{G, G.ambient.normalize(a), G.ambient.normalize(b), 0};
  if (ta.free) w.k = tb.n;
  else if (tb.free) w.k = ta.n;
  else w.k = std::min(ta.n, tb.n);
  return w;
}

bool verify(const AbTypeWitness& w) {
  try {
    if (w.k < 1) return false;
    const FgGroup& H = w.base.ambient;
    const IntVector ka = H.scale(w.k, w.a), kb = H.scale(w.k, w.b);
    const bool ia = w.base.contains(ka), ib = w.base.contains(kb);
    if (ia != ib) return true;
    return ia && ka != kb;
  } catch (const InputError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// K^tf
// ---------------------------------------------------------------------------

namespace {

bool is_zero_vec(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

bool in_span(const RatMatrix& span, std::span<const Rational> x) {
  if (span.rows() == 0) return is_zero_vec(x);
  return solve_left(span, x).has_value();
}

RatMatrix stack(const RatMatrix& top, std::span<const Rational> v) {
  RatMatrix W(top.rows() + 1, v.size());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) W(i, j) = top(i, j);
  for (std::size_t j = 0; j < v.size(); ++j) W(top.rows(), j) = v[j];
  return W;
}

RatVector plus(std::span<const Rational> x, std::span<const Rational> y) {
  RatVector z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
  return z;
}

/// Some x in (span W1) cap H whose image under t W1 -> t W2 leaves H.
std::optional<RatVector> forward_gap(const CompletelyDecomposable& H, const RatMatrix& W1, const RatMatrix& W2) {
  std::set<Integer> primes = relevant_primes(H, W1);
  for (const auto& p : relevant_primes(H, W2)) primes.insert(p);
  for (const auto& p : primes)
    if (auto t = local_gap(H, W1, W2, p)) return row_times(globalize(W1, *t, p), W1);

  const RatMatrix K1 = generic_kernel(H, W1), K2 = generic_kernel(H, W2);
  for (std::size_t r = 0; r < K1.rows(); ++r) {
    const RatVector k0 = K1.row_vector(r);
    if (in_span(K2, k0)) continue;
    // Clear denominators, then divide by a prime outside every special set
    // that does not divide the offending coordinate of k W2.
    const Integer den = common_denominator(k0);
    RatVector k = k0;
    for (auto& v : k) v *= den;
    const RatVector y = row_times(k, W2);
    Integer target = 0;
    for (std::size_t i = 0; i < H.rank(); ++i)
      if (H.characteristics()[i].default_kind() == CharDefault::zero && y[i] != 0) {
        target = Integer(y[i].get_num());
        break;
      }
    Integer p = 2;
    while (primes.count(p) || target % p == 0) p = next_prime(p);
    for (auto& v : k) v /= p;
    return row_times(globalize(W1, k, p), W1);
  }
  return std::nullopt;
}

bool sample_check(const CompletelyDecomposable& H, const RatMatrix& W1, const RatMatrix& W2) {
  const std::size_t s = W1.rows();
  std::vector<RatVector> ts;
  for (std::size_t i = 0; i < s; ++i) {
    RatVector t(s);
    t[i] = 1;
    ts.push_back(t);
    for (std::size_t j = i + 1; j < s; ++j) {
      RatVector u = t;
      u[j] = 1;
      ts.push_back(u);
      u[j] = -1;
      ts.push_back(u);
    }
  }
  const Integer divisors[] = {1, 2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27};
  for (const auto& t : ts)
    for (const auto& d : divisors) {
      RatVector u = t;
      for (auto& v : u) v /= d;
      if (H.contains(row_times(u, W1)) && !H.contains(row_times(u, W2))) return false;
    }
  return true;
}

bool iso_holds(const CompletelyDecomposable& H, const RatMatrix& W1, const RatMatrix& W2) {
  return !forward_gap(H, W1, W2) && !forward_gap(H, W2, W1);
}

bool well_formed(const CompletelyDecomposable& H, const RatMatrix& span, std::span<const Rational> a,
                 std::span<const Rational> b) {
  if (span.cols() != H.rank() || !H.contains(a) || !H.contains(b)) return false;
  return rank(span) == span.rows();
}

}  // namespace

TfBase tf_base_from_generators(const CompletelyDecomposable& H, const std::vector<RatVector>& gens) {
  const CdPurityResult r = is_pure(H, gens);
  if (const auto* w = std::get_if<CdNonPurityWitness>(&r)) throw BaseNotPure(*w);
  RatMatrix G(gens.size(), H.rank());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < H.rank(); ++j) G(i, j) = gens[i][j];
  TfBase base{H, rref(G).R, {}};
  for (const auto& g : gens)
    if (!is_zero_vec(g)) base.probes.push_back(g);
  return base;
}

TfBase tf_base_summand(const CompletelyDecomposable& H, const std::vector<std::size_t>& coords) {
  TfBase base{H, RatMatrix(coords.size(), H.rank()), {}};
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= H.rank()) throw InputError("tf_base_summand: coordinate out of range");
    base.span(i, coords[i]) = 1;
    base.probes.push_back(base.span.row_vector(i));
  }
  base.span = rref(base.span).R;
  return base;
}

TfTypeResult gtype_eq_tf(std::span<const Rational> a_in, std::span<const Rational> b_in, const TfBase& base,
                         std::size_t rank_bound) {
  const CompletelyDecomposable& H = base.ambient;
  H.require_member(a_in, "gtype_eq_tf: a");
  H.require_member(b_in, "gtype_eq_tf: b");
  const RatVector a(a_in.begin(), a_in.end()), b(b_in.begin(), b_in.end());
  TfTypeResult out;
  auto not_equal = [&](auto detail) {
    out.verdict = TfVerdict::not_equal;
    out.witness = TfTypeWitness{H, base.span, a, b, detail};
    return out;
  };

  if (a == b) {
    out.verdict = TfVerdict::equal;
    out.iso = ClosureIso{H, base.span, a, b};
    return out;
  }
  const bool a_base = in_span(base.span, a), b_base = in_span(base.span, b);
  if (a_base || b_base) return not_equal(BaseWitness{a_base});

  std::vector<RatVector> probes{RatVector(H.rank())};
  probes.insert(probes.end(), base.probes.begin(), base.probes.end());
  for (const auto& g : probes) {
    const RatVector ag = plus(a, g), bg = plus(b, g);
    const Characteristic ca = H.characteristic_of(ag), cb = H.characteristic_of(bg);
    if (ca == cb) continue;
    const Integer p = first_difference(ca, cb);
    return not_equal(HeightWitness{p, g, ca.at(p), cb.at(p)});
  }

  if (base.span.rows() + 1 > rank_bound) return out;  // inconclusive

  const RatMatrix W1 = stack(base.span, a), W2 = stack(base.span, b);
  if (auto x = forward_gap(H, W1, W2)) return not_equal(ElementWitness{*x, true});
  if (auto x = forward_gap(H, W2, W1)) return not_equal(ElementWitness{*x, false});
  out.verdict = TfVerdict::equal;
  out.iso = ClosureIso{H, base.span, a, b};
  return out;
}

bool verify(const ClosureIso& f) {
  try {
    if (!well_formed(f.ambient, f.base_span, f.a, f.b)) return false;
    if (f.a == f.b) return true;
    if (in_span(f.base_span, f.a) || in_span(f.base_span, f.b)) return false;
    const RatMatrix W1 = stack(f.base_span, f.a), W2 = stack(f.base_span, f.b);
    return iso_holds(f.ambient, W1, W2) && sample_check(f.ambient, W1, W2) &&
           sample_check(f.ambient, W2, W1);
  } catch (const InputError&) {
    return false;
  }
}

bool verify(const TfTypeWitness& w) {
  try {
    const auto& H = w.ambient;
    if (!well_formed(H, w.base_span, w.a, w.b) || w.a == w.b) return false;
    if (const auto* bw = std::get_if<BaseWitness>(&w.detail))
      return in_span(w.base_span, bw->a_in_base ? w.a : w.b);
    if (const auto* hw = std::get_if<HeightWitness>(&w.detail)) {
      if (!H.contains(hw->probe) || !in_span(w.base_span, hw->probe) || !is_prime(hw->p)) return false;
      const Height ha = H.p_height(plus(w.a, hw->probe), hw->p);
      const Height hb = H.p_height(plus(w.b, hw->probe), hw->p);
      return ha == hw->ha && hb == hw->hb && ha != hb;
    }
    const auto& ew = std::get<ElementWitness>(w.detail);
    if (in_span(w.base_span, w.a) || in_span(w.base_span, w.b)) return false;
    const RatMatrix W1 = stack(w.base_span, ew.from_a ? w.a : w.b);
    const RatMatrix W2 = stack(w.base_span, ew.from_a ? w.b : w.a);
    if (!H.contains(ew.x)) return false;
    const auto t = solve_left(W1, ew.x);
    if (!t) return false;
    return !H.contains(row_times(*t, W2));
  } catch (const InputError&) {
    return false;
  }
}

std::string to_string(TfVerdict v) {
  switch (v) {
    case TfVerdict::equal: return "equal";
    case TfVerdict::not_equal: return "not-equal";
    case TfVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Closure maps
// ---------------------------------------------------------------------------

namespace {

RatMatrix rows_matrix(const std::vector<RatVector>& rows, std::size_t n) {
  RatMatrix M(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw InputError("closure map: rows of different lengths");
    for (std::size_t j = 0; j < n; ++j) M(i, j) = rows[i][j];
  }
  return M;
}

bool well_defined(const ClosureMap& f) {
  if (f.sources.rows() != f.images.rows()) return false;
  for (const auto& k : left_kernel(f.sources))
    if (!is_zero_vec(row_times(k, f.images))) return false;
  return true;
}

}  // namespace

ClosureMap as_closure_map(const ClosureIso& f) {
  return {stack(f.base_span, f.a), stack(f.base_span, f.b)};
}

ClosureMap reconstruct_linear(const std::vector<RatVector>& a, const std::vector<RatVector>& b) {
  if (a.size() != b.size()) throw InputError("reconstruct_linear: tuples of different lengths");
  const std::size_t n = a.empty() ? 0 : a[0].size();
  return {rows_matrix(a, n), rows_matrix(b, b.empty() ? 0 : b[0].size())};
}

ClosureMap reconstruct_staged(std::size_t n, const std::vector<IntVector>& a, const std::vector<IntVector>& b) {
  if (a.size() != b.size()) throw InputError("reconstruct_staged: tuples of different lengths");
  IntMatrix A(a.size(), n), B(b.size(), n);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != n || b[i].size() != n) throw InputError("reconstruct_staged: wrong vector length");
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = a[i][j];
      B(i, j) = b[i][j];
    }
  }
  // Stage one: the generated subgroup, each basis row an integer combination.
  const HermiteForm hf = hermite_normal_form(A);
  const IntMatrix UB = hf.U * B;
  RatMatrix src(hf.rank, n), img(hf.rank, n);
  for (std::size_t i = 0; i < hf.rank; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      src(i, j) = hf.H(i, j);
      img(i, j) = UB(i, j);
    }
  ClosureTrace trace;
  pure_closure(a, FgGroup(n, {}), &trace);
  for (std::size_t s = 1; s < trace.stages.size(); ++s) {
    const IntMatrix& stage = trace.stages[s];
    RatMatrix nsrc(stage.rows(), n), nimg(stage.rows(), n);
    for (std::size_t i = 0; i < stage.rows(); ++i) {
      const RatVector h(stage.row(i).begin(), stage.row(i).end());
      const auto t = solve_left(src, h);
      if (!t) throw InputError("reconstruct_staged: stage element outside the rational span");
      const Integer m = common_denominator(*t);
      RatVector combo = row_times(*t, img);  // (1/m) * sum (m t_i) image_i
      for (std::size_t j = 0; j < n; ++j) {
        if (Rational(combo[j]).get_den() != 1)
          throw InputError("reconstruct_staged: division by " + to_string(m) + " has no solution");
        nsrc(i, j) = h[j];
        nimg(i, j) = combo[j];
      }
    }
    src = std::move(nsrc);
    img = std::move(nimg);
  }
  return {src, img};
}

RatVector evaluate(const ClosureMap& f, std::span<const Rational> x) {
  if (f.sources.rows() == 0) {
    if (!is_zero_vec(x)) throw InputError("evaluate: point outside the source span");
    return RatVector(f.images.cols());
  }
  const auto t = solve_left(f.sources, x);
  if (!t) throw InputError("evaluate: point outside the source span");
  return row_times(*t, f.images);
}

bool pseudo_universality_check(const ClosureMap& f, const ClosureMap& g) {
  if (!well_defined(f) || !well_defined(g)) throw InputError("pseudo_universality_check: map not well defined");
  if (f.sources.cols() != g.sources.cols()) return false;
  try {
    for (const ClosureMap* m : {&f, &g})
      for (std::size_t i = 0; i < m->sources.rows(); ++i) {
        const RatVector x = m->sources.row_vector(i);
        if (evaluate(f, x) != evaluate(g, x)) return false;
      }
  } catch (const InputError&) {
    return false;  // the two maps live on different spans
  }
  return true;
}

}  // namespace alab
