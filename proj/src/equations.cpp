#include "alab/equations.hpp"

#include <algorithm>
#include <set>

namespace alab {

namespace {

IntMatrix coefficient_matrix(const LinearSystem& sys) {
  IntMatrix C(sys.equations.size(), sys.variables.size());
  for (std::size_t i = 0; i < sys.equations.size(); ++i)
    for (const auto& [j, c] : sys.equations[i].coefficients) {
      if (j >= sys.variables.size())
        throw InputError("equation " + std::to_string(i) + " mentions unknown variable " + std::to_string(j));
      C(i, j) = c;
    }
  return C;
}

GroupElement combine(const StructuredGroup& G, std::span<const Integer> coeffs, const std::vector<GroupElement>& xs) {
  GroupElement acc = G.zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) acc = add(G, acc, scalar_mul(G, coeffs[i], xs[i]));
  return acc;
}

std::vector<GroupElement> constants_of(const StructuredGroup& G, const LinearSystem& sys) {
  std::vector<GroupElement> c;
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    try {
      c.push_back(G.normalize(sys.equations[i].constant));
    } catch (const InputError& e) {
      throw InputError("equation " + std::to_string(i) + " constant: " + e.what(), e.path());
    }
  }
  return c;
}

/// The triangular target sum_{T_k < n} p^{T_k}.
Integer triangular_value(const Integer& p, unsigned long n) {
  Integer v = 0;
  for (auto t : triangular_positions(n)) v += pow(p, t);
  return v;
}

NonSolvabilityCertificate new_certificate(CertificateKind k, const StructuredGroup& G, const SystemStream& s,
                                          std::size_t N) {
  NonSolvabilityCertificate c;
  c.kind = k;
  c.group = G;
  c.stream = s;
  c.N = N;
  return c;
}

bool p_adic_bounded(const Atom& a, const Integer& p) {
  return a.kind == AtomKind::Z || (a.kind == AtomKind::Loc && a.p == p);
}

bool uniquely_p_divisible(const Atom& a, const Integer& p) {
  switch (a.kind) {
    case AtomKind::Q: return true;
    case AtomKind::Loc:
    case AtomKind::Completion: return a.p != p;
    default: return false;
  }
}

}  // namespace

FiniteSolveResult solve_finite(const StructuredGroup& G, const LinearSystem& sys) {
  const IntMatrix C = coefficient_matrix(sys);
  const std::vector<GroupElement> c = constants_of(G, sys);
  const SmithForm S = smith_normal_form(C);
  const std::size_t e = sys.equations.size(), v = sys.variables.size();
  std::vector<GroupElement> y(v, G.zero());
  for (std::size_t i = 0; i < e; ++i) {
    const IntVector u = S.U.row_vector(i);
    const GroupElement t = combine(G, u, c);
    if (i < S.rank()) {
      const Integer& d = S.invariant_factors[i];
      if (auto q = divide(G, t, d)) {
        y[i] = *q;
        continue;
      }
      return ModulusObstruction{u, d, S.Vinv.row_vector(i), t};
    }
    if (!is_zero(G, t)) return ModulusObstruction{u, 0, IntVector(v), t};
  }
  Assignment x(v, G.zero());
  for (std::size_t k = 0; k < v; ++k) x[k] = combine(G, S.V.row(k), y);
  return x;
}

FiniteSolveResult solve_finite(const FgGroup& G, const LinearSystem& sys) { return solve_finite(to_structured(G), sys); }

GroupElement evaluate_lhs(const StructuredGroup& G, const Equation& e, const Assignment& x) {
  GroupElement acc = G.zero();
  for (const auto& [j, c] : e.coefficients) {
    if (j >= x.size()) throw InputError("assignment is missing variable " + std::to_string(j));
    acc = add(G, acc, scalar_mul(G, c, x[j]));
  }
  return acc;
}

bool satisfies(const StructuredGroup& G, const LinearSystem& sys, const Assignment& x) {
  if (x.size() < sys.variables.size()) return false;
  for (const auto& e : sys.equations)
    if (evaluate_lhs(G, e, x) != G.normalize(e.constant)) return false;
  return true;
}

bool check_obstruction(const StructuredGroup& G, const LinearSystem& sys, const ModulusObstruction& o) {
  try {
    const IntMatrix C = coefficient_matrix(sys);
    if (o.combination.size() != C.rows() || o.reduced_row.size() != C.cols() || o.modulus < 0) return false;
    const IntVector uc = row_times(o.combination, C);
    for (std::size_t j = 0; j < C.cols(); ++j)
      if (uc[j] != o.modulus * o.reduced_row[j]) return false;
    const GroupElement value = combine(G, o.combination, constants_of(G, sys));
    if (value != G.normalize(o.value)) return false;
    if (o.modulus == 0) return !is_zero(G, value);
    return !divide(G, value, o.modulus).has_value();
  } catch (const InputError&) {
    return false;
  }
}

std::vector<unsigned long> triangular_positions(unsigned long bound) {
  std::vector<unsigned long> out;
  for (unsigned long k = 0;; ++k) {
    const unsigned long t = k * (k + 1) / 2;
    if (t >= bound) break;
    out.push_back(t);
  }
  return out;
}

GroupElement stream_constant(const StructuredGroup& G, const SystemStream& s, std::size_t n) {
  switch (s.rule) {
    case ConstantRule::basis: {
      const auto units = G.units();
      return n < units.size() ? units[n] : G.zero();
    }
    case ConstantRule::listed:
      return n < s.constants.size() ? G.normalize(s.constants[n]) : G.zero();
    case ConstantRule::triangular:
      if (s.summand >= G.size()) throw InputError("stream: constant summand out of range");
      return scalar_mul(G, triangular_value(s.p, n), G.unit(s.summand));
  }
  return G.zero();
}

Equation stream_equation(const StructuredGroup& G, const SystemStream& s, std::size_t i) {
  switch (s.family) {
    case StreamFamily::shift_recurrence:
      return {{{i, Integer(1)}, {i + 1, Integer(-s.p)}}, stream_constant(G, s, i)};
    case StreamFamily::height_ladder:
      return {{{0, Integer(1)}, {i + 1, -pow(s.p, i + 1)}}, stream_constant(G, s, i + 1)};
    case StreamFamily::explicit_list:
      if (i < s.equations.size()) return {s.equations[i].coefficients, G.normalize(s.equations[i].constant)};
      return {{}, G.zero()};
  }
  return {{}, G.zero()};
}

LinearSystem stream_prefix(const StructuredGroup& G, const SystemStream& s, std::size_t N) {
  if (s.family != StreamFamily::explicit_list && !is_prime(s.p))
    throw InputError("stream: p must be prime, got " + to_string(s.p));
  LinearSystem sys;
  std::size_t vars = 0;
  for (std::size_t i = 0; i < N; ++i) {
    sys.equations.push_back(stream_equation(G, s, i));
    for (const auto& kv : sys.equations.back().coefficients) vars = std::max(vars, kv.first + 1);
  }
  if (s.family != StreamFamily::explicit_list) vars = N + 1;
  for (std::size_t j = 0; j < vars; ++j) {
    if (s.family == StreamFamily::height_ladder) sys.variables.push_back(j == 0 ? "x" : "y" + std::to_string(j));
    else sys.variables.push_back("x" + std::to_string(j));
  }
  return sys;
}

FiniteSolveResult prefix_solvable(const StructuredGroup& G, const SystemStream& s, std::size_t N) {
  if (N < 1) throw InputError("prefix_solvable: N must be >= 1");
  return solve_finite(G, stream_prefix(G, s, N));
}

namespace {

/// Summand index of c when c is exactly the generator of a p-adically
/// bounded summand (Z or Loc(p)).
std::optional<std::size_t> unit_summand(const StructuredGroup& G, const GroupElement& c, const Integer& p) {
  for (std::size_t i = 0; i < G.size(); ++i)
    if (p_adic_bounded(G.atom(i), p) && c == G.unit(i)) return i;
  return std::nullopt;
}

Assignment shift_prefix_solution(const StructuredGroup& G, const SystemStream& s, std::size_t N) {
  Assignment x(N + 1, G.zero());
  for (std::size_t n = N; n-- > 0;)
    x[n] = add(G, stream_constant(G, s, n), scalar_mul(G, s.p, x[n + 1]));
  return x;
}

std::optional<NonSolvabilityCertificate> support_growth(const StructuredGroup& G, const SystemStream& s,
                                                        std::size_t N) {
  NonSolvabilityCertificate c = new_certificate(CertificateKind::support_growth, G, s, N);
  std::set<std::size_t> seen;
  for (std::size_t n = 0; n < N; ++n) {
    const auto idx = unit_summand(G, stream_constant(G, s, n), s.p);
    if (!idx || !seen.insert(*idx).second) return std::nullopt;
    c.summands.push_back(*idx);
    c.forced.push_back(pow(s.p, n));
  }
  c.prefix_solution = shift_prefix_solution(G, s, N);
  return c;
}

std::optional<Assignment> completion_shift_solution(const StructuredGroup& G, const SystemStream& s,
                                                    std::size_t N_max) {
  unsigned long K = 0;
  for (const auto& a : G.atoms())
    if (a.kind == AtomKind::Completion && a.p == s.p) K = std::max(K, a.K);
  if (K == 0) return std::nullopt;
  // Constants must vanish outside the Completion(p) atoms.
  auto inside = [&](const GroupElement& c) {
    for (std::size_t i = 0; i < G.size(); ++i) {
      const Atom& a = G.atom(i);
      if (a.kind == AtomKind::Completion && a.p == s.p) continue;
      if (c.components[i] != G.zero().components[i]) return false;
    }
    return true;
  };
  std::vector<GroupElement> cs;
  for (std::size_t j = 0; j < N_max + K + 1; ++j) {
    cs.push_back(stream_constant(G, s, j));
    if (!inside(cs.back())) return std::nullopt;
  }
  // x_m = sum_{j=m}^{m+K-1} p^{j-m} c_j; the tail is zero mod p^K.
  Assignment x(N_max + 1, G.zero());
  for (std::size_t m = 0; m <= N_max; ++m)
    for (std::size_t j = m; j < m + K; ++j) x[m] = add(G, x[m], scalar_mul(G, pow(s.p, j - m), cs[j]));
  return x;
}

std::optional<Assignment> ladder_solution(const StructuredGroup& G, const SystemStream& s, std::size_t N_max) {
  if (s.rule != ConstantRule::triangular || s.summand >= G.size()) return std::nullopt;
  const Atom& a = G.atom(s.summand);
  GroupElement x;
  if (a.kind == AtomKind::Completion && a.p == s.p) x = stream_constant(G, s, a.K);
  else if (uniquely_p_divisible(a, s.p)) x = G.zero();
  else return std::nullopt;
  Assignment out{x};
  for (std::size_t n = 1; n <= N_max; ++n) {
    const auto y = divide(G, subtract(G, x, stream_constant(G, s, n)), pow(s.p, n));
    if (!y) return std::nullopt;
    out.push_back(*y);
  }
  return out;
}

std::optional<NonSolvabilityCertificate> height_demand(const StructuredGroup& G, const SystemStream& s,
                                                       std::size_t N) {
  if (s.rule != ConstantRule::triangular || s.summand >= G.size()) return std::nullopt;
  if (!p_adic_bounded(G.atom(s.summand), s.p)) return std::nullopt;
  NonSolvabilityCertificate c = new_certificate(CertificateKind::height_demand, G, s, N);
  c.digit_positions = triangular_positions(N + 1);
  const GroupElement x = stream_constant(G, s, N + 1);
  c.prefix_solution = {x};
  for (std::size_t n = 1; n <= N; ++n)
    c.prefix_solution.push_back(*divide(G, subtract(G, x, stream_constant(G, s, n)), pow(s.p, n)));
  return c;
}

}  // namespace

bool verify_certificate(const NonSolvabilityCertificate& c) {
  try {
    const StructuredGroup& G = c.group;
    const SystemStream& s = c.stream;
    if (c.N < 1) return false;
    const LinearSystem prefix = stream_prefix(G, s, c.N);
    switch (c.kind) {
      case CertificateKind::modulus_obstruction:
        return c.obstruction && check_obstruction(G, prefix, *c.obstruction);

      case CertificateKind::support_growth: {
        if (s.family != StreamFamily::shift_recurrence) return false;
        if (c.summands.size() != c.N || c.forced.size() != c.N) return false;
        std::set<std::size_t> seen;
        for (std::size_t n = 0; n < c.N; ++n) {
          const std::size_t i = c.summands[n];
          // Each constant is a fresh generator of a summand in which nonzero
          // elements have finite p-height; any solution of the prefix has
          // x_0 = sum_{n<N} p^n c_n + p^N x_N.
          if (i >= G.size() || !p_adic_bounded(G.atom(i), s.p) || !seen.insert(i).second) return false;
          if (stream_constant(G, s, n) != G.unit(i)) return false;
          if (c.forced[n] != pow(s.p, n)) return false;
        }
        if (c.prefix_solution.size() != c.N + 1 || !satisfies(G, prefix, c.prefix_solution)) return false;
        const Integer pN = pow(s.p, c.N);
        const GroupElement& x0 = c.prefix_solution[0];
        for (std::size_t n = 0; n < c.N; ++n) {
          const Rational& v = std::get<Rational>(x0.components[c.summands[n]]);
          // v - p^n lies in p^N times the summand, so v has valuation n < N.
          const Rational diff = (v - Rational(c.forced[n])) / Rational(pN);
          if (Integer(diff.get_den()) % s.p == 0) return false;
          if (v == 0 || valuation(v, s.p) != static_cast<long>(n)) return false;
        }
        return true;
      }

      case CertificateKind::height_demand: {
        if (s.family != StreamFamily::height_ladder || s.rule != ConstantRule::triangular) return false;
        if (s.summand >= G.size() || !p_adic_bounded(G.atom(s.summand), s.p)) return false;
        if (c.digit_positions != triangular_positions(c.N + 1)) return false;
        // Gaps between digit positions strictly increase, so the p-adic
        // target is not eventually periodic and not rational.
        for (std::size_t k = 2; k < c.digit_positions.size(); ++k)
          if (c.digit_positions[k] - c.digit_positions[k - 1] <= c.digit_positions[k - 1] - c.digit_positions[k - 2])
            return false;
        Integer target = 0;
        for (auto t : c.digit_positions) target += pow(s.p, t);
        if (stream_constant(G, s, c.N + 1) != scalar_mul(G, target, G.unit(s.summand))) return false;
        return c.prefix_solution.size() == c.N + 1 && satisfies(G, prefix, c.prefix_solution);
      }
    }
  } catch (const InputError&) {
    return false;
  } catch (const std::bad_variant_access&) {
    return false;
  }
  return false;
}

bool verify_certificate(const NonSolvabilityCertificate& c, const StructuredGroup& G, const SystemStream& s) {
  return c.group == G && c.stream == s && verify_certificate(c);
}

ProbeResult compactness_probe(const StructuredGroup& G, const SystemStream& s, std::size_t N_max) {
  if (N_max < 2) throw InputError("compactness_probe: N_max must be >= 2");
  ProbeResult out;
  for (std::size_t N = 1; N <= N_max; ++N) {
    const FiniteSolveResult r = prefix_solvable(G, s, N);
    if (const auto* o = std::get_if<ModulusObstruction>(&r)) {
      out.verdict = ProbeVerdict::not_finitely_solvable;
      out.N = N;
      NonSolvabilityCertificate c = new_certificate(CertificateKind::modulus_obstruction, G, s, N);
      c.obstruction = *o;
      out.certificate = std::move(c);
      return out;
    }
  }
  out.N = N_max;
  const LinearSystem full = stream_prefix(G, s, N_max);
  auto accept_full = [&](std::optional<Assignment> x, const char* note) {
    if (!x || !satisfies(G, full, *x)) return false;
    out.verdict = ProbeVerdict::full_solution;
    out.assignment = std::move(x);
    out.note = note;
    return true;
  };
  if (s.family == StreamFamily::shift_recurrence) {
    if (accept_full(completion_shift_solution(G, s, N_max),
                    "x_m = sum_{j>=m} p^(j-m) c_j converges in the completion coordinates"))
      return out;
    if (auto c = support_growth(G, s, N_max)) {
      out.verdict = ProbeVerdict::non_compactness_evidence;
      out.certificate = std::move(c);
      out.note = "any solution would need x_0 with unbounded support";
      return out;
    }
  } else if (s.family == StreamFamily::height_ladder) {
    if (accept_full(ladder_solution(G, s, N_max), "x fixed, y_n = (x - c_n) / p^n for every n")) return out;
    if (auto c = height_demand(G, s, N_max)) {
      out.verdict = ProbeVerdict::non_compactness_evidence;
      out.certificate = std::move(c);
      out.note = "any solution would be a rational with non-periodic p-adic digits";
      return out;
    }
  }
  out.verdict = ProbeVerdict::bounded;
  out.note = "every prefix up to N_max is solvable; no certificate family applies";
  return out;
}

std::string to_string(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::not_finitely_solvable: return "not-finitely-solvable";
    case ProbeVerdict::full_solution: return "full-solution";
    case ProbeVerdict::non_compactness_evidence: return "non-compactness-evidence";
    case ProbeVerdict::bounded: return "bounded";
  }
  return "?";
}

std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::support_growth: return "support-growth";
    case CertificateKind::height_demand: return "height-demand";
    case CertificateKind::modulus_obstruction: return "modulus-obstruction";
  }
  return "?";
}

}  // namespace alab
