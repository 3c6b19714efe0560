#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "alab/linalg.hpp"

namespace alab {

/// Change of basis recorded when a group is built from relations. Original
/// generators live in Z^n; canonical coordinates are (free..., torsion...).
struct Presentation {
  IntMatrix relations;
  IntMatrix to_canonical;    // n x dim: original row vector -> canonical coordinates
  IntMatrix from_canonical;  // dim x n: canonical generator -> original vector
};

/// Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dk with
/// d1 | d2 | ... | dk, all >= 2. Equality ignores the presentation.
class FgGroup {
 public:
  FgGroup() = default;
  FgGroup(std::size_t free_rank, IntVector torsion);

  /// Cokernel of the row-relation matrix A: Z^cols / rowspace(A).
  static FgGroup from_relations(const IntMatrix& A);

  std::size_t free_rank() const noexcept { return free_rank_; }
  const IntVector& torsion() const noexcept { return torsion_; }
  std::size_t dimension() const noexcept { return free_rank_ + torsion_.size(); }
  bool is_torsion_free() const noexcept { return torsion_.empty(); }
  bool is_trivial() const noexcept { return free_rank_ == 0 && torsion_.empty(); }
  const std::optional<Presentation>& presentation() const noexcept { return presentation_; }

  /// Number of torsion elements, the product of the invariant factors.
  Integer torsion_order() const;
  /// Exponent of the torsion subgroup (1 when torsion-free).
  Integer torsion_exponent() const;

  /// Validates the length and reduces torsion coordinates into [0, d_i).
  IntVector normalize(std::span<const Integer> x) const;
  IntVector zero() const { return IntVector(dimension()); }
  IntVector add(std::span<const Integer> x, std::span<const Integer> y) const;
  IntVector scale(const Integer& k, std::span<const Integer> x) const;
  bool is_zero(std::span<const Integer> x) const;

  /// Relation lattice of the canonical coordinates (rows d_i e_{free+i}).
  IntMatrix relation_rows() const;

  /// Image of an original-generator vector in canonical coordinates.
  IntVector to_canonical(std::span<const Integer> original) const;

  friend bool operator==(const FgGroup& a, const FgGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }

 private:
  std::size_t free_rank_ = 0;
  IntVector torsion_;
  std::optional<Presentation> presentation_;
};

/// G + H with coordinates concatenated (re-canonicalized).
FgGroup direct_sum(const FgGroup& a, const FgGroup& b);

/// Least n >= 1 with n x = 0, or nullopt for infinite order.
std::optional<Integer> element_order(const FgGroup& G, std::span<const Integer> x);

struct Ranks {
  std::size_t rk0 = 0;
  std::map<Integer, std::size_t> rkp;  // only primes with nonzero rank
};
Ranks ranks(const FgGroup& G);

/// dim over F_p of G / pG.
std::size_t dim_mod_p(const FgGroup& G, const Integer& p);

/// Subgroup of an FgGroup given by generators in canonical coordinates.
struct FgSubgroup {
  FgGroup ambient;
  std::vector<IntVector> generators;

  FgSubgroup() = default;
  FgSubgroup(FgGroup g, std::vector<IntVector> gens);

  /// HNF basis of generators + relations, the preimage lattice in Z^dim.
  IntMatrix lift_basis() const;
  bool contains(std::span<const Integer> x) const;
  /// Same subgroup of the same ambient.
  bool same_as(const FgSubgroup& other) const;
  bool contained_in(const FgSubgroup& other) const;
};

/// The quotient ambient / H in canonical form.
FgGroup quotient(const FgSubgroup& H);

/// Evidence that nG intersected with H equals nH for every n. The checked
/// moduli are the prime powers p^k with p^k dividing the exponent of the
/// torsion of G/H; beyond them purity is automatic.
struct FgPurityCertificate {
  FgSubgroup subgroup;
  Integer quotient_exponent;
  std::vector<Integer> checked_moduli;
};

/// h lies in nG and in H but not in nH.
struct FgNonPurityWitness {
  FgSubgroup subgroup;
  Integer n;
  IntVector h;
};

using FgPurityResult = std::variant<FgPurityCertificate, FgNonPurityWitness>;

FgPurityResult is_pure(const FgSubgroup& H);

bool verify(const FgPurityCertificate& c);
bool verify(const FgNonPurityWitness& w);

/// x is divisible by n inside G.
bool divisible_in(const FgGroup& G, std::span<const Integer> x, const Integer& n);

/// Stage record of the alternating closure construction.
struct ClosureTrace {
  std::vector<IntMatrix> stages;  // HNF basis after each step, starting with A_1
};

/// Smallest pure subgroup of a torsion-free G containing A, built by
/// alternating "generated subgroup" and "adjoin every h with nh in the
/// current set" until the subgroup stabilizes.
FgSubgroup pure_closure(const std::vector<IntVector>& A, const FgGroup& G,
                        ClosureTrace* trace = nullptr);

}  // namespace alab
