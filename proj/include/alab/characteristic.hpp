#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "alab/fg_group.hpp"
#include "alab/numeric.hpp"

namespace alab {

enum class CharDefault { zero, infinity };

/// Height sequence over the primes that equals a constant default (0 or
/// infinity) at all but finitely many primes. Primes are stored explicitly.
class Characteristic {
 public:
  Characteristic() = default;
  explicit Characteristic(CharDefault d, std::map<Integer, Height> exceptions = {});

  static Characteristic zero() { return Characteristic(CharDefault::zero); }
  static Characteristic infinity() { return Characteristic(CharDefault::infinity); }

  CharDefault default_kind() const noexcept { return default_; }
  Height default_height() const noexcept {
    return default_ == CharDefault::zero ? Height::finite(0) : Height::infinity();
  }
  const std::map<Integer, Height>& exceptions() const noexcept { return exceptions_; }
  Height at(const Integer& p) const;

  /// Characteristic of p * a given the characteristic of a.
  Characteristic shifted(const Integer& p, long by) const;
  /// Pointwise minimum (the characteristic of a sum over direct summands).
  friend Characteristic pointwise_min(const Characteristic& a, const Characteristic& b);

  friend bool operator==(const Characteristic&, const Characteristic&) = default;

 private:
  void normalize();
  CharDefault default_ = CharDefault::zero;
  std::map<Integer, Height> exceptions_;
};

/// Equivalence: finitely many differences, each between two finite values.
bool type_equiv(const Characteristic& s, const Characteristic& t);

/// A prime where s and t differ; exists whenever s != t.
Integer first_difference(const Characteristic& s, const Characteristic& t);

class TypeClass {
 public:
  explicit TypeClass(Characteristic rep) : rep_(std::move(rep)) {}
  const Characteristic& representative() const noexcept { return rep_; }
  friend bool operator==(const TypeClass& a, const TypeClass& b) {
    return type_equiv(a.rep_, b.rep_);
  }

 private:
  Characteristic rep_;
};

/// G_chi = { q in Q : v_p(q) >= -chi(p) for every prime p }.
class RankOneGroup {
 public:
  RankOneGroup() = default;
  explicit RankOneGroup(Characteristic chi) : chi_(std::move(chi)) {}
  const Characteristic& chi() const noexcept { return chi_; }

  bool contains(const Rational& q) const;
  Height p_height(const Rational& a, const Integer& p) const;
  /// Characteristic of a nonzero element.
  Characteristic characteristic_of(const Rational& a) const;

  friend bool operator==(const RankOneGroup&, const RankOneGroup&) = default;

 private:
  Characteristic chi_;
};

bool member(const Rational& q, const RankOneGroup& G);

/// p-height and characteristic for FgGroup elements in canonical coordinates.
Height p_height(const FgGroup& G, std::span<const Integer> a, const Integer& p);
Characteristic characteristic_of(const FgGroup& G, std::span<const Integer> a);

/// n pairwise type-inequivalent characteristics: 0/infinity patterns on
/// distinct nonempty prime supports. Deterministic in seed.
std::vector<Characteristic> distinct_type_family(std::size_t n, std::uint64_t seed);

}  // namespace alab
