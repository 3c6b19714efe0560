#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "alab/characteristic.hpp"
#include "alab/linalg.hpp"

namespace alab {

/// Finite direct sum of rank-one groups G_chi_1 + ... + G_chi_n inside Q^n.
class CompletelyDecomposable {
 public:
  CompletelyDecomposable() = default;
  explicit CompletelyDecomposable(std::vector<Characteristic> chars) : chars_(std::move(chars)) {}
  static CompletelyDecomposable free(std::size_t n) {
    return CompletelyDecomposable(std::vector<Characteristic>(n, Characteristic::zero()));
  }

  std::size_t rank() const noexcept { return chars_.size(); }
  const std::vector<Characteristic>& characteristics() const noexcept { return chars_; }
  RankOneGroup summand(std::size_t i) const { return RankOneGroup(chars_.at(i)); }

  bool contains(std::span<const Rational> x) const;
  /// Throws InputError if x has the wrong length or lies outside the group.
  void require_member(std::span<const Rational> x, const std::string& what) const;
  Height p_height(std::span<const Rational> x, const Integer& p) const;
  Characteristic characteristic_of(std::span<const Rational> x) const;

  /// Every characteristic has default zero and finite exceptions, so the
  /// group is (1/N_1)Z + ... + (1/N_n)Z with the scales below.
  bool finite_valued() const;
  IntVector scales() const;
  std::set<Integer> exception_primes() const;

  friend bool operator==(const CompletelyDecomposable&, const CompletelyDecomposable&) = default;

 private:
  std::vector<Characteristic> chars_;
};

CompletelyDecomposable direct_sum(const CompletelyDecomposable& a, const CompletelyDecomposable& b);

/// Z-basis (as rational rows) of the Z-span of rational vectors.
RatMatrix z_span_basis(const std::vector<RatVector>& gens, std::size_t dim);
/// x lies in the Z-span of the rows of a basis produced by z_span_basis.
bool in_z_span(const RatMatrix& basis, std::span<const Rational> x);

/// All local conditions of a Z-span are satisfied at the listed primes and
/// the generic rank condition holds; every other prime is automatic.
struct CdPurityCertificate {
  CompletelyDecomposable ambient;
  RatMatrix basis;
  std::vector<Integer> checked_primes;
};

/// h lies in the span S and h / n lies in the ambient, but h / n is not in S.
struct CdNonPurityWitness {
  CompletelyDecomposable ambient;
  RatMatrix basis;
  Integer n;
  RatVector h;
};

using CdPurityResult = std::variant<CdPurityCertificate, CdNonPurityWitness>;

/// Exact purity of the Z-span of gens (which must lie in C).
CdPurityResult is_pure(const CompletelyDecomposable& C, const std::vector<RatVector>& gens);
bool verify(const CdPurityCertificate& c);
bool verify(const CdNonPurityWitness& w);

/// Pure subgroup V cap C, determined by the rational subspace V.
struct CdClosure {
  CompletelyDecomposable ambient;
  RatMatrix span;                  // RREF basis of V
  std::optional<RatMatrix> z_basis;  // present when the ambient is finite-valued

  bool contains(std::span<const Rational> x) const;
  std::size_t rank() const noexcept { return span.rows(); }
};

CdClosure cd_closure(const CompletelyDecomposable& C, const std::vector<RatVector>& gens);
CdClosure cd_closure_of_span(const CompletelyDecomposable& C, const RatMatrix& span);

// ---------------------------------------------------------------------------
// Preimage modules M(W) = { t in Q^s : t W in C } for a rational s x n matrix
// W. They are compared prime by prime; only finitely many primes matter.
// ---------------------------------------------------------------------------

/// Primes at which M(W) can differ from the generic local shape.
std::set<Integer> relevant_primes(const CompletelyDecomposable& C, const RatMatrix& W);

/// Z_(p)-generators of the localization M(W)_(p): `lattice` rows generate a
/// full-rank sublattice of the non-line part, `lines` span the Q-subspace
/// contained in M(W)_(p).
struct LocalModule {
  std::vector<RatVector> lattice;
  std::vector<RatVector> lines;
};
LocalModule local_module(const CompletelyDecomposable& C, const RatMatrix& W, const Integer& p);

/// Whether x satisfies every local condition of C at p.
bool locally_in(const CompletelyDecomposable& C, std::span<const Rational> x, const Integer& p);

/// Left kernel over Q of W restricted to the default-zero columns.
RatMatrix generic_kernel(const CompletelyDecomposable& C, const RatMatrix& W);

/// Some element of M(W1)_(p) not in M(W2)_(p), if M(W1)_(p) is not contained.
std::optional<RatVector> local_gap(const CompletelyDecomposable& C, const RatMatrix& W1,
                                   const RatMatrix& W2, const Integer& p);

/// Scale t by an integer coprime to p so that t W lies in C globally.
RatVector globalize(const RatMatrix& W, RatVector t, const Integer& p);

}  // namespace alab
