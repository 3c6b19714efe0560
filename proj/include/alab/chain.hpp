#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "alab/equations.hpp"
#include "alab/parallel.hpp"
#include "alab/structured.hpp"

namespace alab {

enum class ChainClass { Kab, Ktf };
enum class Cofinality { omega, uncountable_proxy };

struct ChainSpec {
  ChainClass cls = ChainClass::Ktf;
  StructuredGroup base;
  std::size_t steps = 1;
  std::size_t m = 1;
  Integer P = 2;
  Cofinality cofinality = Cofinality::omega;
};

/// rk0 counts torsion-free dimensions, rkp the p-torsion summands; both
/// agree with canonical_divisible_form on divisible stages.
struct StageInvariants {
  std::size_t rk0 = 0;
  std::map<Integer, std::size_t> rkp;
  std::map<Integer, std::size_t> dim_mod_p;  // p <= P
  friend bool operator==(const StageInvariants&, const StageInvariants&) = default;
};

StageInvariants stage_invariants(const StructuredGroup& G, const Integer& P);

/// Summands adjoined at one step, as indices in the new stage.
struct FreshSummands {
  std::vector<std::size_t> q;
  std::map<Integer, std::vector<std::size_t>> local;  // Loc(p) for Ktf, Pruefer(p) for Kab
};

struct ChainState {
  ChainSpec spec;
  std::vector<StructuredGroup> groups;            // G_0 .. G_k
  std::vector<Embedding> embeddings;              // G_i -> G_{i+1}
  std::vector<EmbeddingPurityCertificate> purity; // Ktf only
  std::vector<FreshSummands> fresh;               // fresh[i] lives in G_{i+1}
  std::vector<StageInvariants> log;
};

ChainState build_chain(const ChainSpec& spec, Exec mode = Exec::parallel);

/// Image of x in G_i under the embeddings up to stage j.
GroupElement push_forward(const ChainState& c, std::size_t i, std::size_t j, GroupElement x);

struct UnionReport {
  ChainClass cls = ChainClass::Ktf;
  std::size_t stage = 0;
  // Kab
  std::optional<DivisibilityVerdict> divisibility;
  std::optional<DivisibleForm> form, predicted_form;
  // Ktf
  std::map<Integer, std::size_t> dim_mod_p, predicted_dim;
  std::map<Integer, std::vector<std::size_t>> independence_rank;  // per stage 1..k
  std::vector<std::string> failures;
  bool ok() const noexcept { return failures.empty(); }
};

/// Checks the closed-form predictions at stage `stage` (default: last).
UnionReport union_invariants(const ChainState& c, std::optional<std::size_t> stage = std::nullopt,
                             const Integer& spot_bound = 50);

struct UniversalityResult {
  bool representable = false;
  std::optional<Embedding> embedding;  // G_i + A -> G_{i+1}, extending the stage map
  std::optional<EmbeddingPurityCertificate> certificate;
  std::vector<std::string> unmet;
};

UniversalityResult universality_probe(const ChainState& c, std::size_t i, const StructuredGroup& A);

struct OmegaDemo {
  Integer p;
  SystemStream stream;  // over G_k
  std::vector<std::size_t> prefix_stage;  // prefix N is solved inside G_{prefix_stage[N-1]}
  NonSolvabilityCertificate certificate;
};

/// Ktf chain with omega cofinality and at least 2 steps.
OmegaDemo omega_noncompactness_demo(const ChainState& c, const Integer& p = 2);

struct CompletionContrast {
  StructuredGroup group;
  SystemStream stream;
  ProbeResult result;
};

/// The same shift stream over Completion(p, K, w) with e_n = n-th coordinate.
CompletionContrast completion_contrast(const Integer& p, unsigned long K, std::size_t w);

std::string to_string(ChainClass c);

}  // namespace alab
