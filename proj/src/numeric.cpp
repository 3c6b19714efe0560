#include "alab/numeric.hpp"

#include <algorithm>

namespace alab {

Height Height::plus(std::int64_t k) const {
  if (infinite_) return *this;
  const auto v = static_cast<std::int64_t>(value_) + k;
  if (v < 0) throw std::logic_error("negative height");
  return Height::finite(static_cast<std::uint64_t>(v));
}

std::string Height::to_string() const {
  return infinite_ ? std::string("inf") : std::to_string(value_);
}

Integer parse_integer(const std::string& s) {
  if (s.empty()) throw InputError("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw InputError("malformed integer literal '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw InputError("malformed integer literal '" + s + "'");
  Integer z;
  z.set_str(s[0] == '+' ? s.substr(1) : s, 10);
  return z;
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s));
  const Integer num = parse_integer(s.substr(0, slash));
  const Integer den = parse_integer(s.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + s + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(10); }
std::string to_string(const Rational& q) { return q.get_str(10); }

Integer abs(const Integer& z) { return z < 0 ? Integer(-z) : z; }

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer mod(const Integer& a, const Integer& m) {
  if (m <= 0) throw std::logic_error("mod: nonpositive modulus");
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  if (m == 1) return 0;
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::logic_error("inverse_mod: not a unit");
  return r;
}

ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Integer next_prime(const Integer& n) {
  Integer r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::vector<Integer> first_primes(std::size_t count) {
  std::vector<Integer> out;
  out.reserve(count);
  Integer p = 1;
  while (out.size() < count) {
    p = next_prime(p);
    out.push_back(p);
  }
  return out;
}

std::vector<Integer> primes_up_to(const Integer& bound) {
  std::vector<Integer> out;
  for (Integer p = 2; p <= bound; p = next_prime(p)) out.push_back(p);
  return out;
}

namespace {

Integer pollard_brent(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](const Integer& v) { return mod(v * v + c, n); };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mod(q * abs(Integer(x - y)), n);
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(Integer(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(Integer n, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::map<Integer, unsigned> factor(const Integer& n) {
  if (n == 0) throw std::logic_error("factor(0)");
  std::map<Integer, unsigned> out;
  Integer m = abs(n);
  for (unsigned long p = 2; p < 1000 && m > 1; ++p) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      ++out[Integer(p)];
      m /= p;
    }
  }
  factor_into(m, out);
  return out;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  for (const auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

long valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw std::logic_error("valuation of zero");
  Integer rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Rational& q, const Integer& p) {
  if (q == 0) throw std::logic_error("valuation of zero");
  long v = valuation(Integer(q.get_num()), p);
  if (q.get_den() != 1) v -= valuation(Integer(q.get_den()), p);
  return v;
}

PrimePart split_prime_part(const Integer& n, const Integer& p) {
  if (n == 0) throw std::logic_error("split_prime_part of zero");
  PrimePart r;
  r.k = mpz_remove(r.unit.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  return r;
}

}  // namespace alab
