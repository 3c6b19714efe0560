#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alab/cd_group.hpp"
#include "alab/characteristic.hpp"
#include "alab/fg_group.hpp"

namespace alab {

enum class AtomKind { Z, Zmod, Q, Pruefer, Loc, Completion };

/// One direct summand. Loc(p) is Z localized at p; Completion(p, K, w)
/// models w coordinates of the p-adic completion, each kept mod p^K.
struct Atom {
  AtomKind kind = AtomKind::Z;
  Integer n = 0;     // Zmod modulus
  Integer p = 0;     // Pruefer, Loc, Completion prime
  unsigned long K = 0;
  std::size_t w = 0;

  static Atom z() { return {AtomKind::Z}; }
  static Atom zmod(const Integer& n);
  static Atom q() { return {AtomKind::Q}; }
  static Atom pruefer(const Integer& p);
  static Atom loc(const Integer& p);
  static Atom completion(const Integer& p, unsigned long K, std::size_t w);

  bool torsion_free() const noexcept { return kind != AtomKind::Zmod && kind != AtomKind::Pruefer; }
  bool divisible() const noexcept { return kind == AtomKind::Q || kind == AtomKind::Pruefer; }
  /// p^K for a completion atom.
  Integer modulus() const;
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Scalar components are rationals (integers for Z, residues for Zmod,
/// fractions in [0, 1) for Pruefer); completion components are residue vectors.
using Component = std::variant<Rational, IntVector>;

struct GroupElement {
  std::vector<Component> components;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

class StructuredGroup {
 public:
  StructuredGroup() = default;
  explicit StructuredGroup(std::vector<Atom> atoms);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  GroupElement zero() const;
  /// The canonical generator of summand i (coordinate `coord` for completions).
  GroupElement unit(std::size_t i, std::size_t coord = 0) const;
  /// All such generators in summand order.
  std::vector<GroupElement> units() const;

  /// Validates component shapes and atom constraints, then reduces to the
  /// canonical representative. Throws InputError on violation.
  GroupElement normalize(GroupElement x) const;
  bool contains(const GroupElement& x) const;

  bool is_torsion_free() const;
  std::string to_string() const;

  friend bool operator==(const StructuredGroup&, const StructuredGroup&) = default;

 private:
  std::vector<Atom> atoms_;
};

StructuredGroup direct_sum(const StructuredGroup& a, const StructuredGroup& b);
/// Concatenates components of elements of a and b.
GroupElement concat(const GroupElement& x, const GroupElement& y);

/// Z^f + Z/d_1 + ... in canonical order, and element conversion.
StructuredGroup to_structured(const FgGroup& G);
GroupElement from_fg(const FgGroup& G, std::span<const Integer> coords);

GroupElement add(const StructuredGroup& G, const GroupElement& x, const GroupElement& y);
GroupElement negate(const StructuredGroup& G, const GroupElement& x);
GroupElement scalar_mul(const StructuredGroup& G, const Integer& k, const GroupElement& x);
GroupElement subtract(const StructuredGroup& G, const GroupElement& x, const GroupElement& y);
bool is_zero(const StructuredGroup& G, const GroupElement& x);

/// Some x with n x = y, or nullopt when none exists. The returned solution
/// is the least nonnegative representative in each torsion-bearing summand.
std::optional<GroupElement> divide(const StructuredGroup& G, const GroupElement& y, const Integer& n);

Height p_height(const StructuredGroup& G, const GroupElement& x, const Integer& p);
Characteristic characteristic_of(const StructuredGroup& G, const GroupElement& x);

struct DivisibilityVerdict {
  bool divisible = false;
  std::optional<GroupElement> witness;  // an element not divisible by witness_n
  Integer witness_n = 0;
  std::size_t spot_checks = 0;          // divisions re-verified n x = y
};

/// Structural decision; the bound drives spot re-verification of divisions.
DivisibilityVerdict is_divisible_group(const StructuredGroup& G, const Integer& bound);

struct DivisibleForm {
  std::size_t rk0 = 0;
  std::map<Integer, std::size_t> rkp;
  friend bool operator==(const DivisibleForm&, const DivisibleForm&) = default;
};
DivisibleForm canonical_divisible_form(const StructuredGroup& G);

struct CompactInvariants {
  std::size_t delta = 0;
  std::map<Integer, std::size_t> beta;
  friend bool operator==(const CompactInvariants&, const CompactInvariants&) = default;
};
CompactInvariants compact_invariants(const StructuredGroup& G);

std::size_t dim_mod_p(const StructuredGroup& G, const Integer& p);
/// Coordinates of the image of x in G / pG over F_p.
IntVector mod_p_image(const StructuredGroup& G, const GroupElement& x, const Integer& p);

/// Torsion-free groups built from Z, Q and Loc atoms as completely
/// decomposable groups (Z -> type 0, Q -> type infinity, Loc(p) -> infinity off p).
std::optional<CompletelyDecomposable> as_completely_decomposable(const StructuredGroup& G);
RatVector to_rational_vector(const StructuredGroup& G, const GroupElement& x);
GroupElement from_rational_vector(const StructuredGroup& G, std::span<const Rational> v);

// ---------------------------------------------------------------------------
// Homomorphisms defined summand by summand
// ---------------------------------------------------------------------------

struct AtomTarget {
  std::size_t target = 0;
  std::size_t coord = 0;   // completion coordinate, ignored otherwise
  Rational coefficient = 1;
  friend bool operator==(const AtomTarget&, const AtomTarget&) = default;
};

/// Summand `source` of the domain maps to the sum of coefficient * x placed
/// in each target summand.
struct AtomMap {
  std::size_t source = 0;
  std::vector<AtomTarget> targets;
  friend bool operator==(const AtomMap&, const AtomMap&) = default;
};

struct Embedding {
  StructuredGroup domain;
  StructuredGroup codomain;
  std::vector<AtomMap> maps;  // one per domain summand, in order

  /// Throws InputError when some summand map is not a homomorphism or
  /// when two summands share a target.
  void validate() const;
  GroupElement apply(const GroupElement& x) const;
  bool injective() const;

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

/// Summand i of G goes identically to summand offset + i of the codomain.
Embedding summand_inclusion(const StructuredGroup& G, const StructuredGroup& codomain, std::size_t offset);

enum class PurityStrength { exact, bounded };

struct EmbeddingPurityCertificate {
  Embedding embedding;
  PurityStrength strength = PurityStrength::exact;
  Integer bound = 0;  // n range covered when bounded
};

/// e(x) is divisible by n in the codomain while x is not divisible by n.
struct EmbeddingNonPurityWitness {
  Embedding embedding;
  Integer n;
  GroupElement x;
};

using EmbeddingPurityResult = std::variant<EmbeddingPurityCertificate, EmbeddingNonPurityWitness>;

EmbeddingPurityResult is_pure_embedding(const Embedding& e, const Integer& bound);
bool verify(const EmbeddingPurityCertificate& c);
bool verify(const EmbeddingNonPurityWitness& w);

struct Hull {
  StructuredGroup group;
  Embedding embedding;
};
Hull divisible_hull(const FgGroup& G);
Hull divisible_hull(const StructuredGroup& G);

}  // namespace alab
