#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alab/cd_group.hpp"
#include "alab/fg_group.hpp"

namespace alab {

// ---------------------------------------------------------------------------
// Abelian groups with the subgroup relation
// ---------------------------------------------------------------------------

/// Free: a + G has infinite order in H / G. Torsioned: n is the order of
/// a + G and gstar = n a, an element of G.
struct GaloisTypeAb {
  bool free = true;
  Integer n = 0;
  IntVector gstar;
  friend bool operator==(const GaloisTypeAb&, const GaloisTypeAb&) = default;
};

/// a in the ambient of G, coordinates canonical.
GaloisTypeAb gtype_ab(std::span<const Integer> a, const FgSubgroup& G);

/// k a and k b disagree over G: exactly one lies in G, or both do and differ.
struct AbTypeWitness {
  FgSubgroup base;
  IntVector a, b;
  Integer k;
};

/// Distinguishing multiple when the types differ, nullopt when they agree.
std::optional<AbTypeWitness> ab_type_difference(std::span<const Integer> a, std::span<const Integer> b,
                                                const FgSubgroup& G);
bool verify(const AbTypeWitness& w);

// ---------------------------------------------------------------------------
// Torsion-free groups with pure embeddings, ambient completely decomposable
// ---------------------------------------------------------------------------

/// Pure subgroup V cap H of the ambient together with the probe elements
/// used for relative heights.
struct TfBase {
  CompletelyDecomposable ambient;
  RatMatrix span;
  std::vector<RatVector> probes;
};

class BaseNotPure : public InputError {
 public:
  explicit BaseNotPure(CdNonPurityWitness w)
      : InputError("base subgroup is not pure in the ambient"), witness_(std::move(w)) {}
  const CdNonPurityWitness& witness() const noexcept { return witness_; }

 private:
  CdNonPurityWitness witness_;
};

/// Z-span of gens; throws BaseNotPure (carrying the witness) when not pure.
TfBase tf_base_from_generators(const CompletelyDecomposable& H, const std::vector<RatVector>& gens);
/// The direct summand on the listed coordinates.
TfBase tf_base_summand(const CompletelyDecomposable& H, const std::vector<std::size_t>& coords);

/// The Q-linear map fixing the base span and sending a to b; as a claim it
/// says this map restricts to an isomorphism of the pure closures.
struct ClosureIso {
  CompletelyDecomposable ambient;
  RatMatrix base_span;
  RatVector a, b;
};

struct HeightWitness {
  Integer p;
  RatVector probe;  // g; compares heights of a + g and b + g
  Height ha, hb;
};

/// x lies in the closure on the `from_a` side, and its forced image does
/// not lie in the ambient.
struct ElementWitness {
  RatVector x;
  bool from_a = true;
};

/// One of a, b lies in the base (and so must be fixed) while a != b.
struct BaseWitness {
  bool a_in_base = true;
};

struct TfTypeWitness {
  CompletelyDecomposable ambient;
  RatMatrix base_span;
  RatVector a, b;
  std::variant<HeightWitness, ElementWitness, BaseWitness> detail;
};

enum class TfVerdict { equal, not_equal, inconclusive };

struct TfTypeResult {
  TfVerdict verdict = TfVerdict::inconclusive;
  std::optional<ClosureIso> iso;
  std::optional<TfTypeWitness> witness;
};

TfTypeResult gtype_eq_tf(std::span<const Rational> a, std::span<const Rational> b, const TfBase& base,
                         std::size_t rank_bound);

bool verify(const ClosureIso& f);
bool verify(const TfTypeWitness& w);

std::string to_string(TfVerdict v);

// ---------------------------------------------------------------------------
// Reconstructed closure maps
// ---------------------------------------------------------------------------

/// A map given on a spanning set of its (torsion-free) source closure.
struct ClosureMap {
  RatMatrix sources;
  RatMatrix images;
};

ClosureMap as_closure_map(const ClosureIso& f);
/// Q-linear extension of a_i -> b_i.
ClosureMap reconstruct_linear(const std::vector<RatVector>& a, const std::vector<RatVector>& b);
/// Follows the closure construction in Z^n stage by stage, defining the image
/// of each newly adjoined h (with m h a combination of earlier elements) as
/// the unique m-th part of the combined image. Throws InputError when a
/// required division does not exist.
ClosureMap reconstruct_staged(std::size_t n, const std::vector<IntVector>& a, const std::vector<IntVector>& b);

/// Image of x under a closure map; throws InputError if x is outside the span.
RatVector evaluate(const ClosureMap& f, std::span<const Rational> x);

/// Both maps well defined and equal on every source vector of either map.
bool pseudo_universality_check(const ClosureMap& f, const ClosureMap& g);

}  // namespace alab
