#include "alab/characteristic.hpp"

#include <algorithm>
#include <random>

namespace alab {

Characteristic::Characteristic(CharDefault d, std::map<Integer, Height> exceptions)
    : default_(d), exceptions_(std::move(exceptions)) {
  for (const auto& [p, h] : exceptions_)
    if (!is_prime(p)) throw InputError("characteristic exception at non-prime " + to_string(p));
  normalize();
}

void Characteristic::normalize() {
  const Height d = default_height();
  std::erase_if(exceptions_, [&](const auto& kv) { return kv.second == d; });
}

Height Characteristic::at(const Integer& p) const {
  const auto it = exceptions_.find(p);
  return it == exceptions_.end() ? default_height() : it->second;
}

Characteristic Characteristic::shifted(const Integer& p, long by) const {
  Characteristic c = *this;
  c.exceptions_[p] = at(p).plus(by);
  c.normalize();
  return c;
}

Characteristic pointwise_min(const Characteristic& a, const Characteristic& b) {
  const CharDefault d = (a.default_ == CharDefault::zero || b.default_ == CharDefault::zero)
                            ? CharDefault::zero
                            : CharDefault::infinity;
  std::map<Integer, Height> ex;
  for (const auto& [p, h] : a.exceptions_) ex[p] = std::min(h, b.at(p));
  for (const auto& [p, h] : b.exceptions_) ex[p] = std::min(h, a.at(p));
  return Characteristic(d, std::move(ex));
}

bool type_equiv(const Characteristic& s, const Characteristic& t) {
  if (s.default_kind() != t.default_kind()) return false;
  std::set<Integer> primes;
  for (const auto& kv : s.exceptions()) primes.insert(kv.first);
  for (const auto& kv : t.exceptions()) primes.insert(kv.first);
  for (const auto& p : primes) {
    const Height a = s.at(p), b = t.at(p);
    if (a != b && (a.is_infinite() || b.is_infinite())) return false;
  }
  return true;
}

Integer first_difference(const Characteristic& s, const Characteristic& t) {
  std::set<Integer> primes;
  for (const auto& kv : s.exceptions()) primes.insert(kv.first);
  for (const auto& kv : t.exceptions()) primes.insert(kv.first);
  for (const auto& p : primes)
    if (s.at(p) != t.at(p)) return p;
  if (s.default_kind() == t.default_kind()) throw std::logic_error("first_difference: equal");
  Integer p = 2;
  while (primes.count(p)) p = next_prime(p);
  return p;
}

bool RankOneGroup::contains(const Rational& q) const {
  if (q == 0) return true;
  const Integer den(q.get_den());
  if (den == 1) return true;
  for (const auto& [p, e] : factor(den)) {
    const Height c = chi_.at(p);
    if (c.is_finite() && static_cast<std::uint64_t>(e) > c.value()) return false;
  }
  return true;
}

Height RankOneGroup::p_height(const Rational& a, const Integer& p) const {
  if (!contains(a)) throw InputError("p_height: element " + to_string(a) + " is not in the group");
  if (a == 0) return Height::infinity();
  const Height c = chi_.at(p);
  if (c.is_infinite()) return c;
  return c.plus(valuation(a, p));
}

Characteristic RankOneGroup::characteristic_of(const Rational& a) const {
  if (a == 0) throw InputError("characteristic_of: zero element has no characteristic here");
  if (!contains(a)) throw InputError("characteristic_of: element " + to_string(a) + " is not in the group");
  std::set<Integer> primes;
  for (const auto& kv : chi_.exceptions()) primes.insert(kv.first);
  if (a.get_num() != 1 && a.get_num() != -1)
    for (const auto& p : prime_divisors(Integer(a.get_num()))) primes.insert(p);
  if (a.get_den() != 1)
    for (const auto& p : prime_divisors(Integer(a.get_den()))) primes.insert(p);
  std::map<Integer, Height> ex;
  for (const auto& p : primes) ex[p] = p_height(a, p);
  return Characteristic(chi_.default_kind(), std::move(ex));
}

bool member(const Rational& q, const RankOneGroup& G) { return G.contains(q); }

Height p_height(const FgGroup& G, std::span<const Integer> a, const Integer& p) {
  const IntVector v = G.normalize(a);
  Height best = Height::infinity();
  for (std::size_t i = 0; i < G.free_rank(); ++i)
    if (v[i] != 0) best = std::min(best, Height::finite(static_cast<std::uint64_t>(valuation(v[i], p))));
  // Torsion coordinate x in Z/d: p^k | x iff gcd(p^k, d) | x.
  for (std::size_t i = 0; i < G.torsion().size(); ++i) {
    const Integer& x = v[G.free_rank() + i];
    if (x == 0) continue;
    const Integer& d = G.torsion()[i];
    const long vd = d % p == 0 ? valuation(d, p) : 0;
    const long vx = valuation(x, p);
    if (vx >= vd) continue;  // divisible by every power of p
    best = std::min(best, Height::finite(static_cast<std::uint64_t>(vx)));
  }
  return best;
}

Characteristic characteristic_of(const FgGroup& G, std::span<const Integer> a) {
  const IntVector v = G.normalize(a);
  if (G.is_zero(v)) throw InputError("characteristic_of: zero element has no characteristic here");
  bool free_part = false;
  std::set<Integer> primes;
  for (std::size_t i = 0; i < G.free_rank(); ++i)
    if (v[i] != 0) {
      free_part = true;
      if (abs(v[i]) != 1)
        for (const auto& p : prime_divisors(v[i])) primes.insert(p);
    }
  for (const auto& d : G.torsion())
    for (const auto& p : prime_divisors(d)) primes.insert(p);
  std::map<Integer, Height> ex;
  for (const auto& p : primes) ex[p] = p_height(G, v, p);
  return Characteristic(free_part ? CharDefault::zero : CharDefault::infinity, std::move(ex));
}

std::vector<Characteristic> distinct_type_family(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InputError("distinct_type_family: n must be >= 1");
  // Distinct nonempty subsets of the first `width` primes, drawn without
  // replacement; two different supports of infinities are never equivalent.
  std::size_t width = 1;
  while ((std::size_t{1} << width) - 1 < 2 * n) ++width;
  const auto primes = first_primes(width);
  std::mt19937_64 rng(seed);
  std::set<std::uint64_t> used;
  std::vector<Characteristic> out;
  const std::uint64_t space = (std::uint64_t{1} << width) - 1;
  while (out.size() < n) {
    const std::uint64_t mask = 1 + rng() % space;
    if (!used.insert(mask).second) continue;
    std::map<Integer, Height> ex;
    for (std::size_t b = 0; b < width; ++b)
      if (mask >> b & 1) ex[primes[b]] = Height::infinity();
    out.emplace_back(CharDefault::zero, std::move(ex));
  }
  return out;
}

}  // namespace alab
