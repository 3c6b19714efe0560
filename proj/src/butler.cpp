#include "alab/butler.hpp"

#include <algorithm>
#include <stdexcept>

namespace alab {

namespace {

RatMatrix stack(const std::vector<RatVector>& rows, std::size_t width) {
  RatMatrix M(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) M(i, j) = rows[i][j];
  return M;
}

std::vector<RatVector> rows_of(const RatMatrix& M) {
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < M.rows(); ++i) out.push_back(M.row_vector(i));
  return out;
}

bool q_type(const Characteristic& c) { return c == Characteristic::infinity(); }

RatVector scaled(std::span<const Rational> x, const Rational& s) {
  RatVector out(x.begin(), x.end());
  for (auto& v : out) v *= s;
  return out;
}

RatVector joined(std::span<const Rational> x, std::span<const Rational> y) {
  RatVector out(x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

Rational random_member(const RankOneGroup& R, std::mt19937_64& rng) {
  static const int dens[] = {1, 2, 3, 4, 6, 9};
  const long k = static_cast<long>(rng() % 11) - 5;
  const Rational q(Integer(k), Integer(dens[rng() % 6]));
  Rational c = q;
  c.canonicalize();
  return R.contains(c) ? c : Rational(k);
}

RatVector random_element(const CompletelyDecomposable& C, std::mt19937_64& rng) {
  RatVector x(C.rank());
  for (std::size_t j = 0; j < C.rank(); ++j) x[j] = random_member(C.summand(j), rng);
  return x;
}

Rational random_rational(std::mt19937_64& rng) {
  Rational q(Integer(static_cast<long>(rng() % 13) - 6), Integer(static_cast<long>(rng() % 5) + 1));
  q.canonicalize();
  return q;
}

}  // namespace

ButlerWitness purify_in_cd(const std::vector<RatVector>& gens, const CompletelyDecomposable& C) {
  ButlerWitness w{C, gens, cd_closure(C, gens), std::nullopt};
  if (w.closure.z_basis) {
    const auto r = is_pure(C, rows_of(*w.closure.z_basis));
    const auto* cert = std::get_if<CdPurityCertificate>(&r);
    if (!cert) throw std::logic_error("purify_in_cd: closure basis failed the purity check");
    w.certificate = *cert;
  }
  return w;
}

bool verify(const ButlerWitness& w) {
  try {
    const std::size_t n = w.ambient.rank();
    if (w.closure.ambient != w.ambient || w.closure.span.cols() != n) return false;
    for (const auto& g : w.generators)
      if (g.size() != n || !w.ambient.contains(g) || !w.closure.contains(g)) return false;
    if (!same_row_space(stack(w.generators, n), w.closure.span)) return false;
    if (!w.closure.z_basis) return !w.ambient.finite_valued() && !w.certificate;
    if (!w.certificate || w.certificate->ambient != w.ambient || !verify(*w.certificate)) return false;
    // The certified span is the closure's Z-basis and it meets V in full rank.
    if (!same_row_space(w.certificate->basis, *w.closure.z_basis)) return false;
    if (w.closure.z_basis->rows() != w.closure.span.rows()) return false;
    for (std::size_t i = 0; i < w.closure.z_basis->rows(); ++i)
      if (!in_z_span(w.certificate->basis, w.closure.z_basis->row_vector(i))) return false;
    for (std::size_t i = 0; i < w.certificate->basis.rows(); ++i)
      if (!in_z_span(*w.closure.z_basis, w.certificate->basis.row_vector(i))) return false;
    return true;
  } catch (const InputError&) {
    return false;
  }
}

bool verify(const DivisibleImageCertificate& c) {
  if (c.M.cols() != c.ambient.rank()) return false;
  if (rank(c.M) != c.M.rows()) return false;
  for (std::size_t j = 0; j < c.M.cols(); ++j) {
    bool used = false;
    for (std::size_t i = 0; i < c.M.rows(); ++i) used = used || c.M(i, j) != 0;
    if (used && !q_type(c.ambient.characteristics()[j])) return false;
  }
  return true;
}

PushoutGroup::PushoutGroup(CompletelyDecomposable sum, RatMatrix W) : sum_(std::move(sum)) {
  if (W.cols() != sum_.rank()) throw InputError("pushout: relation width mismatch");
  const RowEchelon E = rref(W);
  W_ = E.R;
  pivots_ = E.pivots;
  for (std::size_t i = 0; i < W_.rows(); ++i)
    for (std::size_t j = 0; j < W_.cols(); ++j)
      if (W_(i, j) != 0 && !q_type(sum_.characteristics()[j]))
        throw InputError("pushout: relations must live in Q-type columns");
}

RatVector PushoutGroup::canonical(std::span<const Rational> x) const {
  RatVector y(x.begin(), x.end());
  for (std::size_t i = 0; i < W_.rows(); ++i) {
    const Rational c = y[pivots_[i]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) y[j] -= c * W_(i, j);
  }
  return y;
}

bool PushoutGroup::is_zero(std::span<const Rational> x) const {
  const RatVector y = canonical(x);
  return std::all_of(y.begin(), y.end(), [](const Rational& v) { return v == 0; });
}

bool PushoutGroup::equal(std::span<const Rational> x, std::span<const Rational> y) const {
  return canonical(x) == canonical(y);
}

std::optional<RatVector> PushoutGroup::divide(std::span<const Rational> x, const Integer& n) const {
  if (n == 0) return is_zero(x) ? std::optional<RatVector>(RatVector(x.size())) : std::nullopt;
  // Representatives of y + W differ only in Q-type columns, where every
  // rational is allowed, so x / n itself decides.
  RatVector y = scaled(x, Rational(1) / Rational(n));
  if (!sum_.contains(y)) return std::nullopt;
  return y;
}

PushoutReport amalgamation_pushout(const AmalgamationInput& in, std::mt19937_64& rng, std::size_t samples,
                                   const Integer& bound) {
  for (const auto& a : in.G.atoms()) {
    if (!a.divisible()) throw InputError("amalgamation: G is not divisible (atom " + a.to_string() + ")", "/G");
    if (a.kind != AtomKind::Q) throw InputError("amalgamation: torsion atoms in G are not supported", "/G");
  }
  const std::size_t r = in.G.size(), n1 = in.H1.rank(), n2 = in.H2.rank();
  if (in.M1.rows() != r || in.M2.rows() != r) throw InputError("amalgamation: embedding matrices need one row per summand of G");
  PushoutReport rep;
  rep.purity1 = {in.H1, in.M1};
  rep.purity2 = {in.H2, in.M2};
  if (!verify(rep.purity1)) throw InputError("amalgamation: embedding into H1 is not a certified pure embedding", "/M1");
  if (!verify(rep.purity2)) throw InputError("amalgamation: embedding into H2 is not a certified pure embedding", "/M2");

  RatMatrix W(r, n1 + n2);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n1; ++j) W(i, j) = in.M1(i, j);
    for (std::size_t j = 0; j < n2; ++j) W(i, n1 + j) = -in.M2(i, j);
  }
  rep.H = PushoutGroup(direct_sum(in.H1, in.H2), W);
  const PushoutGroup& H = rep.H;
  auto f1 = [&](std::span<const Rational> x) { return joined(x, RatVector(n2)); };
  auto f2 = [&](std::span<const Rational> x) { return joined(RatVector(n1), x); };
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };
  if (rank(W) != r) fail("relations are dependent");
  rep.samples = samples;

  // Base agreement on a basis of G and on random elements.
  rep.base_agreement = true;
  std::vector<RatVector> gs;
  for (std::size_t i = 0; i < r; ++i) {
    RatVector g(r);
    g[i] = 1;
    gs.push_back(g);
  }
  for (std::size_t s = 0; s < samples && r > 0; ++s) {
    RatVector g(r);
    for (auto& v : g) v = random_rational(rng);
    gs.push_back(g);
  }
  for (const auto& g : gs) {
    const RatVector g1 = row_times(g, in.M1), g2 = row_times(g, in.M2);
    if (!H.equal(f1(g1), f2(g2))) rep.base_agreement = false;
  }
  if (!rep.base_agreement) fail("f1 and f2 disagree on G");

  // Torsion-freeness: m x = 0 forces x = 0.
  rep.torsion_free = true;
  for (std::size_t s = 0; s < samples; ++s) {
    const RatVector x = random_element(H.sum(), rng);
    const bool zero = H.is_zero(x);
    for (Integer m = 1; m <= bound; ++m)
      if (H.is_zero(scaled(x, Rational(m))) && !zero) rep.torsion_free = false;
  }
  if (!rep.torsion_free) fail("torsion found in the pushout");

  // Purity of f1, f2 and of the rank-one summands: f(x) in nH iff x / n in the source.
  auto pure_on = [&](const CompletelyDecomposable& src, auto f, const std::vector<RatVector>& xs) {
    for (const auto& x : xs)
      for (Integer n = 1; n <= bound; ++n)
        if (H.divide(f(x), n).has_value() != src.contains(scaled(x, Rational(1) / Rational(n)))) return false;
    return true;
  };
  std::vector<RatVector> xs1, xs2;
  for (std::size_t s = 0; s < samples; ++s) {
    xs1.push_back(random_element(in.H1, rng));
    xs2.push_back(random_element(in.H2, rng));
  }
  rep.f1_pure = pure_on(in.H1, f1, xs1);
  rep.f2_pure = pure_on(in.H2, f2, xs2);
  if (!rep.f1_pure) fail("f1 is not pure on the sample");
  if (!rep.f2_pure) fail("f2 is not pure on the sample");

  rep.summands_pure = true;
  const CompletelyDecomposable& S = H.sum();
  for (std::size_t j = 0; j < S.rank(); ++j) {
    const RankOneGroup R = S.summand(j);
    for (std::size_t s = 0; s < 4; ++s) {
      RatVector x(S.rank());
      x[j] = random_member(R, rng);
      for (Integer n = 1; n <= bound; ++n)
        if (H.divide(x, n).has_value() != R.contains(x[j] / Rational(n))) rep.summands_pure = false;
    }
  }
  if (!rep.summands_pure) fail("a rank-one summand is not pure in the pushout");

  // E = G* + cl({e_i}): write e = sum t_i e_i + w and split off w in G*.
  rep.claim = true;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t k = 1 + rng() % 3;
    std::vector<RatVector> es;
    for (std::size_t i = 0; i < k; ++i) es.push_back(random_element(S, rng));
    RatVector comb(S.rank());
    for (const auto& e : es) {
      const Integer c = static_cast<long>(rng() % 7) - 3;
      for (std::size_t j = 0; j < S.rank(); ++j) comb[j] += Rational(c) * e[j];
    }
    RatVector w(S.rank());
    for (std::size_t i = 0; i < H.relations().rows(); ++i) {
      const Rational t = random_rational(rng);
      for (std::size_t j = 0; j < S.rank(); ++j) w[j] += t * H.relations()(i, j);
    }
    const Integer m = 1 + static_cast<long>(rng() % 6);
    RatVector e(S.rank());
    for (std::size_t j = 0; j < S.rank(); ++j) e[j] = comb[j] / Rational(m) + w[j];
    if (!S.contains(e))
      for (std::size_t j = 0; j < S.rank(); ++j) e[j] = comb[j] + w[j];

    std::vector<RatVector> rows = es;
    for (std::size_t i = 0; i < H.relations().rows(); ++i) rows.push_back(H.relations().row_vector(i));
    const auto t = solve_left(stack(rows, S.rank()), e);
    if (!t) {
      rep.claim = false;
      continue;
    }
    RatVector w2(S.rank()), t_e(t->begin(), t->begin() + k);
    for (std::size_t i = k; i < t->size(); ++i)
      for (std::size_t j = 0; j < S.rank(); ++j) w2[j] += (*t)[i] * rows[i][j];
    Integer mm = common_denominator(t_e);
    RatVector rest(S.rank());
    for (std::size_t j = 0; j < S.rank(); ++j) rest[j] = e[j] - w2[j];
    // m (e - w) is an integral combination of the e_i and e - w lies in the sum.
    RatVector lhs = scaled(rest, Rational(mm)), rhs(S.rank());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < S.rank(); ++j) rhs[j] += t_e[i] * Rational(mm) * es[i][j];
    if (!S.contains(rest) || lhs != rhs || !H.is_zero(w2)) rep.claim = false;
    if (mm > 1) ++rep.claim_nontrivial;
  }
  if (!rep.claim) fail("an element of E is not in G* + cl({e_i})");
  return rep;
}

AmalgamationInput random_amalgamation(std::mt19937_64& rng) {
  auto random_char = [&]() {
    switch (rng() % 5) {
      case 0: return Characteristic::infinity();
      case 1: return Characteristic::zero();
      case 2: return Characteristic(CharDefault::zero, {{Integer(2), Height::finite(1)}});
      case 3: return Characteristic(CharDefault::zero, {{Integer(3), Height::infinity()}});
      default: return Characteristic(CharDefault::infinity, {{Integer(5), Height::finite(0)}});
    }
  };
  AmalgamationInput in;
  const std::size_t r = rng() % 3;
  in.G = StructuredGroup(std::vector<Atom>(r, Atom::q()));
  auto side = [&](CompletelyDecomposable& H, RatMatrix& M) {
    const std::size_t extra = rng() % 3;
    std::vector<Characteristic> chars;
    std::vector<std::size_t> qcols;
    for (std::size_t j = 0; j < r + extra; ++j) {
      // Keep at least r Q-type columns.
      const bool force = j < r;
      chars.push_back(force ? Characteristic::infinity() : random_char());
      if (q_type(chars.back())) qcols.push_back(j);
    }
    std::vector<std::size_t> perm(chars.size());
    for (std::size_t j = 0; j < perm.size(); ++j) perm[j] = j;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Characteristic> shuffled(chars.size());
    for (std::size_t j = 0; j < chars.size(); ++j) shuffled[perm[j]] = chars[j];
    H = CompletelyDecomposable(shuffled);
    do {
      M = RatMatrix(r, chars.size());
      for (std::size_t i = 0; i < r; ++i)
        for (auto j : qcols) M(i, perm[j]) = random_rational(rng);
    } while (rank(M) != r);
  };
  side(in.H1, in.M1);
  side(in.H2, in.M2);
  return in;
}

InstabilityReport instability_demo(const CompletelyDecomposable& G, const std::vector<Characteristic>& chars,
                                   Exec mode) {
  InstabilityReport rep;
  rep.family = chars;
  const CompletelyDecomposable H = direct_sum(G, CompletelyDecomposable(chars));
  std::vector<std::size_t> coords(G.rank());
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
  const TfBase base = tf_base_summand(H, coords);
  auto a = [&](std::size_t i) {
    RatVector v(H.rank());
    v[G.rank() + i] = 1;
    return v;
  };
  for (std::size_t i = 0; i < chars.size(); ++i)
    for (std::size_t j = i + 1; j < chars.size(); ++j) rep.pairs.push_back({i, j, {}, false});
  for_each_index(
      rep.pairs.size(),
      [&](std::size_t k) {
        PairVerdict& pv = rep.pairs[k];
        pv.result = gtype_eq_tf(a(pv.i), a(pv.j), base, G.rank() + 1);
        if (pv.result.witness) pv.verified = verify(*pv.result.witness);
        else if (pv.result.iso) pv.verified = verify(*pv.result.iso);
      },
      mode);
  for (const auto& pv : rep.pairs) {
    switch (pv.result.verdict) {
      case TfVerdict::equal: ++rep.equal; break;
      case TfVerdict::not_equal: ++rep.not_equal; break;
      case TfVerdict::inconclusive: ++rep.inconclusive; break;
    }
    if (pv.result.verdict != TfVerdict::inconclusive && !pv.verified) ++rep.unverified;
  }
  return rep;
}

InstabilityReport instability_demo(const CompletelyDecomposable& G, std::size_t n, std::uint64_t seed, Exec mode) {
  if (n < 1) throw InputError("instability: n must be >= 1");
  return instability_demo(G, distinct_type_family(n, seed), mode);
}

}  // namespace alab
