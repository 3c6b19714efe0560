#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alab/structured.hpp"

namespace alab {

/// sum_j coefficients[j] * x_j = constant.
struct Equation {
  std::map<std::size_t, Integer> coefficients;
  GroupElement constant;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct LinearSystem {
  std::vector<std::string> variables;
  std::vector<Equation> equations;
};

using Assignment = std::vector<GroupElement>;

/// combination . C = modulus * reduced_row while combination . constants
/// (= value) is not divisible by modulus in the group (modulus 0: value != 0).
struct ModulusObstruction {
  IntVector combination;
  Integer modulus;
  IntVector reduced_row;
  GroupElement value;
};

using FiniteSolveResult = std::variant<Assignment, ModulusObstruction>;

/// Exact decision over any structured group via the Smith form of the
/// coefficient matrix and per-row division in the group.
FiniteSolveResult solve_finite(const StructuredGroup& G, const LinearSystem& sys);
FiniteSolveResult solve_finite(const FgGroup& G, const LinearSystem& sys);

GroupElement evaluate_lhs(const StructuredGroup& G, const Equation& e, const Assignment& x);
bool satisfies(const StructuredGroup& G, const LinearSystem& sys, const Assignment& x);
bool check_obstruction(const StructuredGroup& G, const LinearSystem& sys, const ModulusObstruction& o);

enum class StreamFamily { shift_recurrence, height_ladder, explicit_list };
enum class ConstantRule { basis, triangular, listed };

/// Countable system given by a rule. shift_recurrence: equation n is
/// x_n - p x_{n+1} = c_n. height_ladder: equation n (n >= 0) is
/// x - p^{n+1} y_{n+1} = c_{n+1}, i.e. p^{n+1} divides x - c_{n+1}.
/// explicit_list: the listed equations, then 0 = 0.
struct SystemStream {
  StreamFamily family = StreamFamily::shift_recurrence;
  Integer p = 2;
  ConstantRule rule = ConstantRule::basis;
  std::vector<GroupElement> constants;  // listed rule
  std::size_t summand = 0;              // triangular rule: c = digits * unit(summand)
  std::vector<Equation> equations;      // explicit_list

  friend bool operator==(const SystemStream&, const SystemStream&) = default;
};

/// Triangular digit positions k(k+1)/2 below the bound (gaps strictly grow).
std::vector<unsigned long> triangular_positions(unsigned long bound);

GroupElement stream_constant(const StructuredGroup& G, const SystemStream& s, std::size_t n);
Equation stream_equation(const StructuredGroup& G, const SystemStream& s, std::size_t i);
/// The first N equations over the variables they mention.
LinearSystem stream_prefix(const StructuredGroup& G, const SystemStream& s, std::size_t N);

FiniteSolveResult prefix_solvable(const StructuredGroup& G, const SystemStream& s, std::size_t N);

enum class CertificateKind { support_growth, height_demand, modulus_obstruction };

struct NonSolvabilityCertificate {
  CertificateKind kind = CertificateKind::support_growth;
  StructuredGroup group;
  SystemStream stream;
  std::size_t N = 0;
  // support_growth: constant c_n is the generator of summand summands[n] and
  // every prefix solution has coordinate summands[n] of x_0 congruent to
  // forced[n] = p^n modulo p^N.
  std::vector<std::size_t> summands;
  std::vector<Integer> forced;
  // height_demand: digit positions of the p-adic target below N.
  std::vector<unsigned long> digit_positions;
  // Prefix solution demonstrating finite solvability of the first N equations.
  Assignment prefix_solution;
  // modulus_obstruction
  std::optional<ModulusObstruction> obstruction;
};

bool verify_certificate(const NonSolvabilityCertificate& c);
bool verify_certificate(const NonSolvabilityCertificate& c, const StructuredGroup& G, const SystemStream& s);

enum class ProbeVerdict { not_finitely_solvable, full_solution, non_compactness_evidence, bounded };

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::bounded;
  std::size_t N = 0;  // failing prefix length, or the checked range
  std::optional<Assignment> assignment;
  std::optional<NonSolvabilityCertificate> certificate;
  std::string note;
};

ProbeResult compactness_probe(const StructuredGroup& G, const SystemStream& s, std::size_t N_max);

std::string to_string(ProbeVerdict v);
std::string to_string(CertificateKind k);

}  // namespace alab
