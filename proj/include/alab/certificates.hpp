#pragma once

#include <string>
#include <variant>

#include "alab/io.hpp"

namespace alab {

/// A x = b has no integer solution.
struct IntegerSolveCertificate {
  IntMatrix A;
  IntVector b;
  SolveObstruction obstruction;
};

/// A linear system over a structured group has no solution.
struct SystemObstructionCertificate {
  StructuredGroup group;
  LinearSystem system;
  ModulusObstruction obstruction;
};

/// x is not divisible by n in G, so G is not divisible.
struct DivisibilityFailure {
  StructuredGroup group;
  GroupElement x;
  Integer n;
};
bool verify(const DivisibilityFailure& d);

using Certificate =
    std::variant<FgPurityCertificate, FgNonPurityWitness, CdPurityCertificate, CdNonPurityWitness,
                 IntegerSolveCertificate, SystemObstructionCertificate, NonSolvabilityCertificate, AbTypeWitness,
                 TfTypeWitness, ClosureIso, EmbeddingPurityCertificate, EmbeddingNonPurityWitness,
                 DivisibilityFailure, DivisibleImageCertificate, ButlerWitness>;

std::string certificate_kind(const Certificate& c);

/// {"kind", "context", "data"}; context is carried but never trusted.
Json serialize(const Certificate& c, const Json& context = Json::object());
Certificate deserialize(const Json& envelope);

/// Independent re-check of the claim the certificate makes.
bool verify_any(const Certificate& c);

}  // namespace alab
