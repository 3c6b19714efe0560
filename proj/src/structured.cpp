#include "alab/structured.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace alab {

namespace {

const Rational& scalar(const GroupElement& x, std::size_t i) { return std::get<Rational>(x.components[i]); }
const IntVector& digits(const GroupElement& x, std::size_t i) { return std::get<IntVector>(x.components[i]); }

Rational frac_part(const Rational& v) {
  const Integer fl = floor_div(Integer(v.get_num()), Integer(v.get_den()));
  return v - Rational(fl);
}

bool is_p_power(const Integer& d, const Integer& p) { return split_prime_part(d, p).unit == 1; }

bool in_loc(const Rational& v, const Integer& p) { return Integer(v.get_den()) % p != 0; }

/// A p-integral rational as a residue mod m (a power of p).
Integer residue(const Rational& v, const Integer& m) {
  return mod(Integer(v.get_num()) * inverse_mod(Integer(v.get_den()), m), m);
}

Integer smallest_prime_factor(const Integer& n) { return factor(n).begin()->first; }

Component reduce(const Atom& a, Component c) {
  switch (a.kind) {
    case AtomKind::Z:
    case AtomKind::Q:
    case AtomKind::Loc:
      return c;
    case AtomKind::Zmod:
      return Rational(mod(Integer(std::get<Rational>(c).get_num()), a.n));
    case AtomKind::Pruefer:
      return frac_part(std::get<Rational>(c));
    case AtomKind::Completion: {
      auto v = std::get<IntVector>(std::move(c));
      const Integer m = a.modulus();
      for (auto& d : v) d = mod(d, m);
      return v;
    }
  }
  return c;
}

void check_component(const Atom& a, const Component& c, std::size_t i) {
  auto where = [&] { return "component " + std::to_string(i) + " (" + a.to_string() + ")"; };
  if (a.kind == AtomKind::Completion) {
    const auto* v = std::get_if<IntVector>(&c);
    if (!v) throw InputError(where() + ": expected a residue vector");
    if (v->size() != a.w) throw InputError(where() + ": expected " + std::to_string(a.w) + " residues");
    return;
  }
  const auto* q = std::get_if<Rational>(&c);
  if (!q) throw InputError(where() + ": expected a number");
  switch (a.kind) {
    case AtomKind::Z:
    case AtomKind::Zmod:
      if (q->get_den() != 1) throw InputError(where() + ": expected an integer");
      break;
    case AtomKind::Pruefer:
      if (!is_p_power(Integer(q->get_den()), a.p))
        throw InputError(where() + ": denominator must be a power of " + alab::to_string(a.p));
      break;
    case AtomKind::Loc:
      if (!in_loc(*q, a.p)) throw InputError(where() + ": denominator must be coprime to " + alab::to_string(a.p));
      break;
    default:
      break;
  }
}

template <typename F>
GroupElement componentwise(const StructuredGroup& G, const GroupElement& x, const GroupElement& y, F f) {
  GroupElement out;
  out.components.reserve(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    if (a.kind == AtomKind::Completion) {
      IntVector v(a.w);
      for (std::size_t j = 0; j < a.w; ++j) v[j] = f(Rational(digits(x, i)[j]), Rational(digits(y, i)[j])).get_num();
      out.components.push_back(reduce(a, std::move(v)));
    } else {
      out.components.push_back(reduce(a, f(scalar(x, i), scalar(y, i))));
    }
  }
  return out;
}

void require_shape(const StructuredGroup& G, const GroupElement& x, const char* op) {
  if (x.components.size() != G.size())
    throw InputError(std::string(op) + ": element has " + std::to_string(x.components.size()) +
                     " components, group has " + std::to_string(G.size()));
  for (std::size_t i = 0; i < G.size(); ++i) check_component(G.atom(i), x.components[i], i);
}

}  // namespace

Atom Atom::zmod(const Integer& n) {
  if (n < 2) throw InputError("Zmod atom needs n >= 2");
  Atom a{AtomKind::Zmod};
  a.n = n;
  return a;
}

Atom Atom::pruefer(const Integer& p) {
  if (!is_prime(p)) throw InputError("Pruefer atom needs a prime, got " + alab::to_string(p));
  Atom a{AtomKind::Pruefer};
  a.p = p;
  return a;
}

Atom Atom::loc(const Integer& p) {
  if (!is_prime(p)) throw InputError("Loc atom needs a prime, got " + alab::to_string(p));
  Atom a{AtomKind::Loc};
  a.p = p;
  return a;
}

Atom Atom::completion(const Integer& p, unsigned long K, std::size_t w) {
  if (!is_prime(p)) throw InputError("Completion atom needs a prime, got " + alab::to_string(p));
  if (K < 1) throw InputError("Completion atom needs precision K >= 1");
  if (w < 1) throw InputError("Completion atom needs width w >= 1");
  Atom a{AtomKind::Completion};
  a.p = p;
  a.K = K;
  a.w = w;
  return a;
}

Integer Atom::modulus() const { return pow(p, K); }

std::string Atom::to_string() const {
  switch (kind) {
    case AtomKind::Z: return "Z";
    case AtomKind::Zmod: return "Z/" + alab::to_string(n);
    case AtomKind::Q: return "Q";
    case AtomKind::Pruefer: return "Pruefer(" + alab::to_string(p) + ")";
    case AtomKind::Loc: return "Loc(" + alab::to_string(p) + ")";
    case AtomKind::Completion:
      return "Completion(" + alab::to_string(p) + ",K=" + std::to_string(K) + ",w=" + std::to_string(w) + ")";
  }
  return "?";
}

StructuredGroup::StructuredGroup(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    switch (a.kind) {
      case AtomKind::Zmod:
        if (a.n < 2) throw InputError("Zmod atom needs n >= 2");
        break;
      case AtomKind::Pruefer:
      case AtomKind::Loc:
        if (!is_prime(a.p)) throw InputError(a.to_string() + ": p must be prime");
        break;
      case AtomKind::Completion:
        if (!is_prime(a.p) || a.K < 1 || a.w < 1) throw InputError(a.to_string() + ": invalid parameters");
        break;
      default:
        break;
    }
  }
}

GroupElement StructuredGroup::zero() const {
  GroupElement x;
  for (const auto& a : atoms_) {
    if (a.kind == AtomKind::Completion) x.components.emplace_back(IntVector(a.w));
    else x.components.emplace_back(Rational(0));
  }
  return x;
}

GroupElement StructuredGroup::unit(std::size_t i, std::size_t coord) const {
  GroupElement x = zero();
  const Atom& a = atom(i);
  if (a.kind == AtomKind::Completion) {
    if (coord >= a.w) throw InputError("unit: completion coordinate out of range");
    std::get<IntVector>(x.components[i])[coord] = 1 % a.modulus();
  } else if (a.kind == AtomKind::Pruefer) {
    x.components[i] = Rational(1, a.p);
  } else {
    x.components[i] = Rational(1);
  }
  return x;
}

std::vector<GroupElement> StructuredGroup::units() const {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < size(); ++i) {
    const std::size_t n = atom(i).kind == AtomKind::Completion ? atom(i).w : 1;
    for (std::size_t c = 0; c < n; ++c) out.push_back(unit(i, c));
  }
  return out;
}

GroupElement StructuredGroup::normalize(GroupElement x) const {
  require_shape(*this, x, "normalize");
  for (std::size_t i = 0; i < size(); ++i) x.components[i] = reduce(atom(i), std::move(x.components[i]));
  return x;
}

bool StructuredGroup::contains(const GroupElement& x) const {
  try {
    require_shape(*this, x, "contains");
  } catch (const InputError&) {
    return false;
  }
  return true;
}

bool StructuredGroup::is_torsion_free() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.torsion_free(); });
}

std::string StructuredGroup::to_string() const {
  if (atoms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += (i ? " + " : "") + atoms_[i].to_string();
  return s;
}

StructuredGroup direct_sum(const StructuredGroup& a, const StructuredGroup& b) {
  auto atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return StructuredGroup(std::move(atoms));
}

GroupElement concat(const GroupElement& x, const GroupElement& y) {
  GroupElement z = x;
  z.components.insert(z.components.end(), y.components.begin(), y.components.end());
  return z;
}

StructuredGroup to_structured(const FgGroup& G) {
  std::vector<Atom> atoms(G.free_rank(), Atom::z());
  for (const auto& d : G.torsion()) atoms.push_back(Atom::zmod(d));
  return StructuredGroup(std::move(atoms));
}

GroupElement from_fg(const FgGroup& G, std::span<const Integer> coords) {
  const IntVector v = G.normalize(coords);
  GroupElement x;
  for (const auto& c : v) x.components.emplace_back(Rational(c));
  return x;
}

GroupElement add(const StructuredGroup& G, const GroupElement& x, const GroupElement& y) {
  require_shape(G, x, "add");
  require_shape(G, y, "add");
  return componentwise(G, x, y, [](const Rational& a, const Rational& b) { return Rational(a + b); });
}

GroupElement subtract(const StructuredGroup& G, const GroupElement& x, const GroupElement& y) {
  require_shape(G, x, "subtract");
  require_shape(G, y, "subtract");
  return componentwise(G, x, y, [](const Rational& a, const Rational& b) { return Rational(a - b); });
}

GroupElement negate(const StructuredGroup& G, const GroupElement& x) { return subtract(G, G.zero(), x); }

GroupElement scalar_mul(const StructuredGroup& G, const Integer& k, const GroupElement& x) {
  require_shape(G, x, "scalar_mul");
  const Rational kq(k);
  return componentwise(G, x, x, [&](const Rational& a, const Rational&) { return Rational(kq * a); });
}

bool is_zero(const StructuredGroup& G, const GroupElement& x) { return G.normalize(x) == G.zero(); }

std::optional<GroupElement> divide(const StructuredGroup& G, const GroupElement& y0, const Integer& n) {
  if (n < 1) throw InputError("divide: n must be >= 1");
  const GroupElement y = G.normalize(y0);
  GroupElement x = G.zero();
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    if (const auto* q = std::get_if<Rational>(&y.components[i]); q && *q == 0) continue;
    switch (a.kind) {
      case AtomKind::Z: {
        const Integer v(scalar(y, i).get_num());
        if (v % n != 0) return std::nullopt;
        x.components[i] = Rational(v / n);
        break;
      }
      case AtomKind::Q:
        x.components[i] = scalar(y, i) / Rational(n);
        break;
      case AtomKind::Loc: {
        const Rational q = scalar(y, i) / Rational(n);
        if (!in_loc(q, a.p)) return std::nullopt;
        x.components[i] = q;
        break;
      }
      case AtomKind::Zmod: {
        const Integer v(scalar(y, i).get_num());
        const Integer g = gcd(n, a.n);
        if (v % g != 0) return std::nullopt;
        const Integer m = a.n / g;
        x.components[i] = Rational(m == 1 ? Integer(0) : mod((v / g) * inverse_mod(n / g, m), m));
        break;
      }
      case AtomKind::Pruefer: {
        const Rational& q = scalar(y, i);
        const Integer num(q.get_num()), den(q.get_den());
        const PrimePart np = split_prime_part(n, a.p);
        const Integer b0 = den == 1 ? Integer(0) : mod(num * inverse_mod(np.unit, den), den);
        x.components[i] = ratio(b0, den * pow(a.p, np.k));
        break;
      }
      case AtomKind::Completion: {
        const Integer M = a.modulus();
        const PrimePart np = split_prime_part(n, a.p);
        IntVector out(a.w);
        for (std::size_t j = 0; j < a.w; ++j) {
          const Integer& v = digits(y, i)[j];
          if (np.k >= a.K) {
            if (v != 0) return std::nullopt;
            continue;
          }
          const Integer pe = pow(a.p, np.k);
          if (v % pe != 0) return std::nullopt;
          const Integer m = M / pe;
          out[j] = mod((v / pe) * inverse_mod(np.unit, M), m);
        }
        x.components[i] = std::move(out);
        break;
      }
    }
  }
  return x;
}

Height p_height(const StructuredGroup& G, const GroupElement& x0, const Integer& p) {
  if (!is_prime(p)) throw InputError("p_height: " + to_string(p) + " is not prime");
  const GroupElement x = G.normalize(x0);
  Height best = Height::infinity();
  auto use = [&](std::uint64_t v) { best = std::min(best, Height::finite(v)); };
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    switch (a.kind) {
      case AtomKind::Z:
        if (scalar(x, i) != 0) use(static_cast<std::uint64_t>(valuation(Integer(scalar(x, i).get_num()), p)));
        break;
      case AtomKind::Zmod: {
        const Integer v(scalar(x, i).get_num());
        if (v == 0 || a.n % p != 0) break;
        const long vx = valuation(v, p);
        if (vx < valuation(a.n, p)) use(static_cast<std::uint64_t>(vx));
        break;
      }
      case AtomKind::Loc:
        if (a.p == p && scalar(x, i) != 0) use(static_cast<std::uint64_t>(valuation(scalar(x, i), p)));
        break;
      case AtomKind::Completion:
        if (a.p != p) break;
        for (const auto& d : digits(x, i))
          if (d != 0) use(static_cast<std::uint64_t>(valuation(d, p)));
        break;
      case AtomKind::Q:
      case AtomKind::Pruefer:
        break;
    }
  }
  return best;
}

Characteristic characteristic_of(const StructuredGroup& G, const GroupElement& x0) {
  const GroupElement x = G.normalize(x0);
  if (x == G.zero()) throw InputError("characteristic_of: zero element has no characteristic here");
  bool default_zero = false;
  std::set<Integer> primes;
  auto add_primes = [&](const Integer& v) {
    if (abs(v) > 1)
      for (const auto& q : prime_divisors(v)) primes.insert(q);
  };
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    switch (a.kind) {
      case AtomKind::Z:
        if (scalar(x, i) != 0) {
          default_zero = true;
          add_primes(Integer(scalar(x, i).get_num()));
        }
        break;
      case AtomKind::Zmod: add_primes(a.n); break;
      case AtomKind::Loc:
      case AtomKind::Completion: primes.insert(a.p); break;
      default: break;
    }
  }
  std::map<Integer, Height> ex;
  for (const auto& q : primes) ex[q] = p_height(G, x, q);
  return Characteristic(default_zero ? CharDefault::zero : CharDefault::infinity, std::move(ex));
}

DivisibilityVerdict is_divisible_group(const StructuredGroup& G, const Integer& bound) {
  if (bound < 2) throw InputError("is_divisible_group: bound must be >= 2");
  DivisibilityVerdict out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    if (a.divisible()) continue;
    out.divisible = false;
    out.witness = G.unit(i);
    switch (a.kind) {
      case AtomKind::Z: out.witness_n = 2; break;
      case AtomKind::Zmod: out.witness_n = smallest_prime_factor(a.n); break;
      default: out.witness_n = a.p; break;
    }
    return out;
  }
  out.divisible = true;
  // Spot re-verification: a direct sum is divisible iff each summand is, so
  // each distinct atom is checked once, on its generator, for n <= bound.
  std::vector<Atom> seen;
  for (const auto& a : G.atoms()) {
    if (std::find(seen.begin(), seen.end(), a) != seen.end()) continue;
    seen.push_back(a);
    const StructuredGroup A({a});
    const GroupElement u = A.unit(0);
    for (Integer n = 1; n <= bound; ++n) {
      const auto x = divide(A, u, n);
      if (!x || scalar_mul(A, n, *x) != u)
        throw std::logic_error("is_divisible_group: spot check failed for a divisible atom");
      ++out.spot_checks;
    }
  }
  return out;
}

DivisibleForm canonical_divisible_form(const StructuredGroup& G) {
  DivisibleForm f;
  for (const auto& a : G.atoms()) {
    if (a.kind == AtomKind::Q) ++f.rk0;
    else if (a.kind == AtomKind::Pruefer) ++f.rkp[a.p];
    else throw InputError("canonical_divisible_form: atom " + a.to_string() + " is not divisible");
  }
  return f;
}

CompactInvariants compact_invariants(const StructuredGroup& G) {
  CompactInvariants c;
  for (const auto& a : G.atoms()) {
    switch (a.kind) {
      case AtomKind::Q: ++c.delta; break;
      case AtomKind::Loc: ++c.beta[a.p]; break;
      case AtomKind::Completion: c.beta[a.p] += a.w; break;
      default: throw InputError("compact_invariants: unsupported atom " + a.to_string());
    }
  }
  return c;
}

std::size_t dim_mod_p(const StructuredGroup& G, const Integer& p) {
  if (!is_prime(p)) throw InputError("dim_mod_p: " + to_string(p) + " is not prime");
  std::size_t d = 0;
  for (const auto& a : G.atoms()) {
    switch (a.kind) {
      case AtomKind::Z: ++d; break;
      case AtomKind::Zmod: if (a.n % p == 0) ++d; break;
      case AtomKind::Loc: if (a.p == p) ++d; break;
      case AtomKind::Completion: if (a.p == p) d += a.w; break;
      default: break;
    }
  }
  return d;
}

IntVector mod_p_image(const StructuredGroup& G, const GroupElement& x0, const Integer& p) {
  const GroupElement x = G.normalize(x0);
  IntVector out;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    switch (a.kind) {
      case AtomKind::Z: out.push_back(mod(Integer(scalar(x, i).get_num()), p)); break;
      case AtomKind::Zmod: if (a.n % p == 0) out.push_back(mod(Integer(scalar(x, i).get_num()), p)); break;
      case AtomKind::Loc: if (a.p == p) out.push_back(residue(scalar(x, i), p)); break;
      case AtomKind::Completion:
        if (a.p == p)
          for (const auto& d : digits(x, i)) out.push_back(mod(d, p));
        break;
      default: break;
    }
  }
  return out;
}

std::optional<CompletelyDecomposable> as_completely_decomposable(const StructuredGroup& G) {
  std::vector<Characteristic> chars;
  for (const auto& a : G.atoms()) {
    switch (a.kind) {
      case AtomKind::Z: chars.push_back(Characteristic::zero()); break;
      case AtomKind::Q: chars.push_back(Characteristic::infinity()); break;
      case AtomKind::Loc: chars.emplace_back(CharDefault::infinity, std::map<Integer, Height>{{a.p, Height::finite(0)}}); break;
      default: return std::nullopt;
    }
  }
  return CompletelyDecomposable(std::move(chars));
}

RatVector to_rational_vector(const StructuredGroup& G, const GroupElement& x0) {
  const GroupElement x = G.normalize(x0);
  RatVector v;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (!G.atom(i).torsion_free() || G.atom(i).kind == AtomKind::Completion)
      throw InputError("to_rational_vector: atom " + G.atom(i).to_string() + " is not a subgroup of Q");
    v.push_back(scalar(x, i));
  }
  return v;
}

GroupElement from_rational_vector(const StructuredGroup& G, std::span<const Rational> v) {
  GroupElement x;
  for (const auto& q : v) x.components.emplace_back(q);
  return G.normalize(std::move(x));
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

namespace {

void check_pair(const Atom& s, const Atom& t, const AtomTarget& tg, std::size_t src) {
  const std::string where = "map of summand " + std::to_string(src) + " (" + s.to_string() + " -> " +
                            t.to_string() + ")";
  const Rational& c = tg.coefficient;
  if (c == 0) throw InputError(where + ": zero coefficient");
  const bool integral = c.get_den() == 1;
  bool ok = false;
  switch (s.kind) {
    case AtomKind::Z:
      switch (t.kind) {
        case AtomKind::Z:
        case AtomKind::Zmod: ok = integral; break;
        case AtomKind::Q: ok = true; break;
        case AtomKind::Pruefer: ok = is_p_power(Integer(c.get_den()), t.p); break;
        case AtomKind::Loc:
        case AtomKind::Completion: ok = in_loc(c, t.p); break;
      }
      break;
    case AtomKind::Zmod:
      if (t.kind == AtomKind::Zmod) ok = integral && Integer(c.get_num() * s.n) % t.n == 0;
      if (t.kind == AtomKind::Pruefer)
        ok = is_p_power(Integer(c.get_den()), t.p) && Rational(c * Rational(s.n)).get_den() == 1;
      break;
    case AtomKind::Q: ok = t.kind == AtomKind::Q; break;
    case AtomKind::Pruefer: ok = t.kind == AtomKind::Pruefer && t.p == s.p && integral; break;
    case AtomKind::Loc:
      if (t.kind == AtomKind::Q) ok = true;
      if ((t.kind == AtomKind::Loc || t.kind == AtomKind::Completion) && t.p == s.p) ok = in_loc(c, s.p);
      break;
    case AtomKind::Completion: ok = t == s && integral; break;
  }
  if (!ok) throw InputError(where + ": not a well-defined homomorphism");
  if (t.kind == AtomKind::Completion && s.kind != AtomKind::Completion && tg.coord >= t.w)
    throw InputError(where + ": completion coordinate out of range");
}

/// Order of c (times a generator of order n) inside the target atom, for
/// torsion sources.
Integer image_order(const Atom& t, const Rational& c) {
  if (t.kind == AtomKind::Zmod) {
    const Integer v = mod(Integer(c.get_num()), t.n);
    return t.n / gcd(v, t.n);
  }
  return Integer(frac_part(c).get_den());  // Pruefer
}

}  // namespace

void Embedding::validate() const {
  if (maps.size() != domain.size()) throw InputError("embedding: need one summand map per domain summand");
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const AtomMap& m = maps[i];
    if (m.source != i) throw InputError("embedding: summand maps must be listed in domain order");
    for (const auto& tg : m.targets) {
      if (tg.target >= codomain.size()) throw InputError("embedding: target summand out of range");
      const Atom& t = codomain.atom(tg.target);
      check_pair(domain.atom(i), t, tg, i);
      const std::size_t coord = t.kind == AtomKind::Completion && domain.atom(i).kind != AtomKind::Completion
                                    ? tg.coord + 1
                                    : 0;
      // A whole completion atom conflicts with each of its coordinates.
      if (used.count({tg.target, coord}) || (coord && used.count({tg.target, 0})))
        throw InputError("embedding: two summands share target " + std::to_string(tg.target));
      used.insert({tg.target, coord});
    }
  }
  for (const auto& [t, c] : used)
    if (c == 0 && codomain.atom(t).kind == AtomKind::Completion)
      for (const auto& [t2, c2] : used)
        if (t2 == t && c2 != 0) throw InputError("embedding: two summands share target " + std::to_string(t));
}

GroupElement Embedding::apply(const GroupElement& x0) const {
  const GroupElement x = domain.normalize(x0);
  GroupElement y = codomain.zero();
  for (const auto& m : maps) {
    const Atom& s = domain.atom(m.source);
    for (const auto& tg : m.targets) {
      const Atom& t = codomain.atom(tg.target);
      auto& comp = y.components[tg.target];
      if (s.kind == AtomKind::Completion) {
        auto& v = std::get<IntVector>(comp);
        for (std::size_t j = 0; j < t.w; ++j)
          v[j] = mod(v[j] + Integer(tg.coefficient.get_num()) * digits(x, m.source)[j], t.modulus());
        continue;
      }
      const Rational val = tg.coefficient * scalar(x, m.source);
      if (t.kind == AtomKind::Completion) {
        auto& v = std::get<IntVector>(comp);
        v[tg.coord] = mod(v[tg.coord] + residue(val, t.modulus()), t.modulus());
      } else {
        comp = reduce(t, Rational(std::get<Rational>(comp) + val));
      }
    }
  }
  return y;
}

bool Embedding::injective() const {
  validate();
  for (const auto& m : maps) {
    const Atom& s = domain.atom(m.source);
    if (m.targets.empty()) return false;
    switch (s.kind) {
      case AtomKind::Z:
      case AtomKind::Q:
      case AtomKind::Loc: {
        const bool ok = std::any_of(m.targets.begin(), m.targets.end(), [&](const AtomTarget& tg) {
          const Atom& t = codomain.atom(tg.target);
          if (t.kind == AtomKind::Completion) return residue(tg.coefficient, t.modulus()) != 0;
          return t.torsion_free();
        });
        if (!ok) return false;
        break;
      }
      case AtomKind::Zmod: {
        Integer order = 1;
        for (const auto& tg : m.targets) order = lcm(order, image_order(codomain.atom(tg.target), tg.coefficient));
        if (order != s.n) return false;
        break;
      }
      case AtomKind::Pruefer: {
        const bool ok = std::any_of(m.targets.begin(), m.targets.end(), [&](const AtomTarget& tg) {
          return Integer(tg.coefficient.get_num()) % s.p != 0;
        });
        if (!ok) return false;
        break;
      }
      case AtomKind::Completion: {
        const bool ok = std::any_of(m.targets.begin(), m.targets.end(), [&](const AtomTarget& tg) {
          return Integer(tg.coefficient.get_num()) % s.p != 0;
        });
        if (!ok) return false;
        break;
      }
    }
  }
  return true;
}

Embedding summand_inclusion(const StructuredGroup& G, const StructuredGroup& codomain, std::size_t offset) {
  Embedding e{G, codomain, {}};
  for (std::size_t i = 0; i < G.size(); ++i) e.maps.push_back({i, {{offset + i, 0, 1}}});
  e.validate();
  return e;
}

namespace {

struct AtomVerdict {
  bool decided = false;
  std::optional<std::pair<Integer, Integer>> failure;  // (n, multiple of the source unit)
};

/// Exact verdict for a single summand sent to a single target summand.
AtomVerdict atom_purity(const Atom& s, const Atom& t, const Rational& c) {
  AtomVerdict v;
  v.decided = true;
  auto fail = [&](const Integer& n, const Integer& k = 1) { v.failure = std::make_pair(n, k); };
  if (s.kind == t.kind && s.kind != AtomKind::Completion) {
    switch (s.kind) {
      case AtomKind::Z:
        if (abs(Integer(c.get_num())) != 1) fail(smallest_prime_factor(Integer(c.get_num())));
        break;
      case AtomKind::Loc:
        if (valuation(c, s.p) != 0) fail(s.p);
        break;
      case AtomKind::Zmod: {
        const FgGroup T(0, {t.n});
        const FgSubgroup H(T, {IntVector{Integer(c.get_num())}});
        const FgPurityResult r = is_pure(H);
        if (const auto* w = std::get_if<FgNonPurityWitness>(&r)) {
          const Integer cn = mod(Integer(c.get_num()), t.n);
          const Integer g = gcd(cn, t.n);
          const Integer m = t.n / g;
          const Integer k = m == 1 ? Integer(0) : mod((w->h[0] / g) * inverse_mod(cn / g, m), m);
          fail(w->n, mod(k, s.n));
        }
        break;
      }
      default:  // Q, Pruefer: the image is the whole target
        break;
    }
    return v;
  }
  if (s.kind == AtomKind::Z && t.kind == AtomKind::Q) fail(2);
  else if (s.kind == AtomKind::Z && t.kind == AtomKind::Loc) fail(t.p == 2 ? Integer(3) : Integer(2));
  else if (s.kind == AtomKind::Loc && t.kind == AtomKind::Q) fail(s.p);
  else if (s.kind == AtomKind::Zmod && t.kind == AtomKind::Pruefer) fail(t.p);
  else v.decided = false;
  return v;
}

std::vector<GroupElement> purity_samples(const StructuredGroup& G) {
  std::vector<GroupElement> out = G.units();
  if (!out.empty()) {
    GroupElement s = G.zero();
    for (const auto& u : out) s = add(G, s, u);
    out.push_back(s);
  }
  return out;
}

std::optional<EmbeddingNonPurityWitness> bounded_search(const Embedding& e, const Integer& bound) {
  for (const auto& x : purity_samples(e.domain)) {
    const GroupElement ex = e.apply(x);
    for (Integer n = 2; n <= bound; ++n)
      if (divide(e.codomain, ex, n) && !divide(e.domain, x, n)) return EmbeddingNonPurityWitness{e, n, x};
  }
  return std::nullopt;
}

bool block_shaped(const Embedding& e) {
  for (const auto& m : e.maps) {
    if (m.targets.size() != 1) return false;
    if (e.codomain.atom(m.targets[0].target).kind == AtomKind::Completion) return false;
  }
  return true;
}

}  // namespace

EmbeddingPurityResult is_pure_embedding(const Embedding& e, const Integer& bound) {
  if (!e.injective()) throw InputError("is_pure_embedding: map is not injective");
  if (block_shaped(e)) {
    bool all_decided = true;
    for (const auto& m : e.maps) {
      const AtomVerdict v = atom_purity(e.domain.atom(m.source), e.codomain.atom(m.targets[0].target),
                                        m.targets[0].coefficient);
      if (!v.decided) {
        all_decided = false;
        continue;
      }
      if (v.failure) {
        const GroupElement x = scalar_mul(e.domain, v.failure->second, e.domain.unit(m.source));
        return EmbeddingNonPurityWitness{e, v.failure->first, x};
      }
    }
    if (all_decided) return EmbeddingPurityCertificate{e, PurityStrength::exact, 0};
  }
  if (auto w = bounded_search(e, bound)) return *w;
  return EmbeddingPurityCertificate{e, PurityStrength::bounded, bound};
}

bool verify(const EmbeddingPurityCertificate& c) {
  try {
    if (!c.embedding.injective()) return false;
    if (c.strength == PurityStrength::exact) {
      if (!block_shaped(c.embedding)) return false;
      for (const auto& m : c.embedding.maps) {
        const AtomVerdict v = atom_purity(c.embedding.domain.atom(m.source),
                                          c.embedding.codomain.atom(m.targets[0].target), m.targets[0].coefficient);
        if (!v.decided || v.failure) return false;
      }
      // Independent spot check of the exact claim.
      return !bounded_search(c.embedding, 12).has_value();
    }
    if (c.bound < 2) return false;
    return !bounded_search(c.embedding, c.bound).has_value();
  } catch (const InputError&) {
    return false;
  }
}

bool verify(const EmbeddingNonPurityWitness& w) {
  try {
    if (w.n < 2 || !w.embedding.injective() || !w.embedding.domain.contains(w.x)) return false;
    return divide(w.embedding.codomain, w.embedding.apply(w.x), w.n).has_value() &&
           !divide(w.embedding.domain, w.x, w.n).has_value();
  } catch (const InputError&) {
    return false;
  }
}

Hull divisible_hull(const StructuredGroup& G) {
  std::vector<Atom> atoms;
  Embedding e{G, {}, {}};
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    AtomMap m{i, {}};
    switch (a.kind) {
      case AtomKind::Z:
      case AtomKind::Q:
      case AtomKind::Loc:
        m.targets.push_back({atoms.size(), 0, 1});
        atoms.push_back(Atom::q());
        break;
      case AtomKind::Pruefer:
        m.targets.push_back({atoms.size(), 0, 1});
        atoms.push_back(a);
        break;
      case AtomKind::Zmod:
        // One Pruefer copy per prime power p^k exactly dividing n, 1 -> 1/p^k.
        for (const auto& [p, k] : factor(a.n)) {
          m.targets.push_back({atoms.size(), 0, Rational(1, pow(p, k))});
          atoms.push_back(Atom::pruefer(p));
        }
        break;
      case AtomKind::Completion:
        throw InputError("divisible_hull: completion atoms are not supported");
    }
    e.maps.push_back(std::move(m));
  }
  e.codomain = StructuredGroup(std::move(atoms));
  e.validate();
  return Hull{e.codomain, e};
}

Hull divisible_hull(const FgGroup& G) { return divisible_hull(to_structured(G)); }

}  // namespace alab
