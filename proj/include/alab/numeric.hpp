#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace alab {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised for malformed or out-of-contract inputs. `path` locates the
/// offending field when the input came from a JSON document.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what, std::string path = {})
      : std::invalid_argument(what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Natural number or infinity. Infinity compares above every finite value.
class Height {
 public:
  constexpr Height() = default;
  static constexpr Height finite(std::uint64_t n) { return Height(false, n); }
  static constexpr Height infinity() { return Height(true, 0); }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  std::uint64_t value() const {
    if (infinite_) throw std::logic_error("Height::value on infinity");
    return value_;
  }

  /// Adds a finite shift; infinity absorbs.
  Height plus(std::int64_t k) const;

  friend constexpr bool operator==(const Height&, const Height&) = default;
  friend constexpr std::strong_ordering operator<=>(const Height& a, const Height& b) {
    if (a.infinite_ != b.infinite_) return a.infinite_ ? std::strong_ordering::greater
                                                       : std::strong_ordering::less;
    if (a.infinite_) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const;

 private:
  constexpr Height(bool inf, std::uint64_t v) : infinite_(inf), value_(v) {}
  bool infinite_ = false;
  std::uint64_t value_ = 0;
};

// Integer helpers.
Integer parse_integer(const std::string& s);
Rational parse_rational(const std::string& s);  // "a", "a/b"
std::string to_string(const Integer& z);
std::string to_string(const Rational& q);

/// n / d in lowest terms.
inline Rational ratio(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Integer abs(const Integer& z);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
/// Least nonnegative residue of a mod m (m > 0).
Integer mod(const Integer& a, const Integer& m);
/// Floor division.
Integer floor_div(const Integer& a, const Integer& b);
Integer pow(const Integer& base, unsigned long e);
/// Inverse of a modulo m; a must be a unit mod m.
Integer inverse_mod(const Integer& a, const Integer& m);

struct ExtendedGcd {
  Integer g, s, t;  // s*a + t*b = g >= 0
};
ExtendedGcd extended_gcd(const Integer& a, const Integer& b);

bool is_prime(const Integer& n);
Integer next_prime(const Integer& n);  // smallest prime > n
/// The first `count` primes in increasing order.
std::vector<Integer> first_primes(std::size_t count);
/// Primes p <= bound.
std::vector<Integer> primes_up_to(const Integer& bound);

/// Prime factorization of |n| (n != 0), ordered by prime.
std::map<Integer, unsigned> factor(const Integer& n);
std::vector<Integer> prime_divisors(const Integer& n);

/// p-adic valuation of a nonzero integer or rational.
long valuation(const Integer& n, const Integer& p);
long valuation(const Rational& q, const Integer& p);

/// n = p^k * u with p not dividing u.
struct PrimePart {
  unsigned long k;
  Integer unit;
};
PrimePart split_prime_part(const Integer& n, const Integer& p);

}  // namespace alab
