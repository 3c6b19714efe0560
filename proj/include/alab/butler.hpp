#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alab/cd_group.hpp"
#include "alab/galois.hpp"
#include "alab/parallel.hpp"
#include "alab/structured.hpp"

namespace alab {

/// A finite-rank group given with its pure embedding into a completely
/// decomposable ambient. The certificate is present when the ambient is
/// finite-valued (so the closure has a finite Z-basis).
struct ButlerWitness {
  CompletelyDecomposable ambient;
  std::vector<RatVector> generators;
  CdClosure closure;
  std::optional<CdPurityCertificate> certificate;
};

ButlerWitness purify_in_cd(const std::vector<RatVector>& gens, const CompletelyDecomposable& C);
bool verify(const ButlerWitness& w);

/// g |-> g M embeds Q^r into H; the image lies in the Q-type columns, so it
/// is divisible and hence pure.
struct DivisibleImageCertificate {
  CompletelyDecomposable ambient;
  RatMatrix M;
};
bool verify(const DivisibleImageCertificate& c);

/// (H1 + H2) / W with W the rational row space of [M1 | -M2].
class PushoutGroup {
 public:
  PushoutGroup() = default;
  PushoutGroup(CompletelyDecomposable sum, RatMatrix W);

  const CompletelyDecomposable& sum() const noexcept { return sum_; }
  const RatMatrix& relations() const noexcept { return W_; }
  std::size_t rank() const noexcept { return sum_.rank() - W_.rows(); }

  /// Coset representative with zeros at the pivot columns of W.
  RatVector canonical(std::span<const Rational> x) const;
  bool contains(std::span<const Rational> x) const { return sum_.contains(x); }
  bool is_zero(std::span<const Rational> x) const;
  bool equal(std::span<const Rational> x, std::span<const Rational> y) const;
  /// Some y in the sum with n y = x modulo W, when it exists.
  std::optional<RatVector> divide(std::span<const Rational> x, const Integer& n) const;

 private:
  CompletelyDecomposable sum_;
  RatMatrix W_;
  std::vector<std::size_t> pivots_;
};

struct AmalgamationInput {
  StructuredGroup G;
  CompletelyDecomposable H1, H2;
  RatMatrix M1, M2;  // r x n_i
};

struct PushoutReport {
  PushoutGroup H;
  DivisibleImageCertificate purity1, purity2;
  std::size_t samples = 0;
  bool torsion_free = false;
  bool f1_pure = false, f2_pure = false;
  bool base_agreement = false;
  bool summands_pure = false;
  bool claim = false;
  std::size_t claim_nontrivial = 0;  // claim samples with m > 1
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Throws InputError when G is not divisible or an embedding is not a
/// certified pure embedding.
PushoutReport amalgamation_pushout(const AmalgamationInput& in, std::mt19937_64& rng, std::size_t samples = 20,
                                   const Integer& bound = 50);

/// Random admissible instance: G = Q^r embedded into Q-type columns.
AmalgamationInput random_amalgamation(std::mt19937_64& rng);

struct PairVerdict {
  std::size_t i = 0, j = 0;
  TfTypeResult result;
  bool verified = false;
};

struct InstabilityReport {
  std::vector<Characteristic> family;
  std::vector<PairVerdict> pairs;
  std::size_t not_equal = 0, equal = 0, inconclusive = 0, unverified = 0;
};

/// H = G + G_chi_1 + ... with a_i the generator of G_chi_i, compared pairwise
/// over G.
InstabilityReport instability_demo(const CompletelyDecomposable& G, const std::vector<Characteristic>& chars,
                                   Exec mode = Exec::parallel);
InstabilityReport instability_demo(const CompletelyDecomposable& G, std::size_t n, std::uint64_t seed,
                                   Exec mode = Exec::parallel);

}  // namespace alab
