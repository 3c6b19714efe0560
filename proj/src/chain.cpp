#include "alab/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace alab {

namespace {

constexpr long kPurityBound = 12;

std::vector<Integer> chain_primes(const ChainSpec& s) { return primes_up_to(s.P); }

RatMatrix rows_of(const std::vector<IntVector>& rows, std::size_t width) {
  RatMatrix M(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) M(i, j) = rows[i][j];
  return M;
}

}  // namespace

StageInvariants stage_invariants(const StructuredGroup& G, const Integer& P) {
  StageInvariants s;
  for (const auto& a : G.atoms()) {
    switch (a.kind) {
      case AtomKind::Z:
      case AtomKind::Q:
      case AtomKind::Loc: ++s.rk0; break;
      case AtomKind::Completion: s.rk0 += a.w; break;
      case AtomKind::Zmod:
        for (const auto& q : prime_divisors(a.n)) ++s.rkp[q];
        break;
      case AtomKind::Pruefer: ++s.rkp[a.p]; break;
    }
  }
  for (const auto& p : primes_up_to(P)) s.dim_mod_p[p] = dim_mod_p(G, p);
  return s;
}

ChainState build_chain(const ChainSpec& spec, Exec mode) {
  if (spec.steps < 1) throw InputError("chain: steps must be >= 1", "/steps");
  if (spec.m < 1) throw InputError("chain: m must be >= 1", "/m");
  if (spec.P < 2) throw InputError("chain: prime bound must be >= 2", "/P");
  if (spec.cls == ChainClass::Ktf && !spec.base.is_torsion_free())
    throw InputError("chain: Ktf needs a torsion-free base", "/base");
  const auto primes = chain_primes(spec);

  ChainState c;
  c.spec = spec;
  c.groups.push_back(spec.base);
  for (std::size_t step = 0; step < spec.steps; ++step) {
    const StructuredGroup& Gi = c.groups.back();
    std::vector<Atom> atoms;
    Embedding e;
    if (spec.cls == ChainClass::Kab) {
      Hull h = divisible_hull(Gi);
      atoms = h.group.atoms();
      e = std::move(h.embedding);
    } else {
      atoms = Gi.atoms();
    }
    FreshSummands fr;
    for (std::size_t j = 0; j < spec.m; ++j) {
      fr.q.push_back(atoms.size());
      atoms.push_back(Atom::q());
    }
    for (const auto& p : primes)
      for (std::size_t j = 0; j < spec.m; ++j) {
        fr.local[p].push_back(atoms.size());
        atoms.push_back(spec.cls == ChainClass::Kab ? Atom::pruefer(p) : Atom::loc(p));
      }
    StructuredGroup next(std::move(atoms));
    if (spec.cls == ChainClass::Kab) {
      e.codomain = next;
      e.validate();
      if (!e.injective()) throw std::logic_error("chain: hull embedding is not injective");
    } else {
      e = summand_inclusion(Gi, next, 0);
      const auto r = is_pure_embedding(e, kPurityBound);
      const auto* cert = std::get_if<EmbeddingPurityCertificate>(&r);
      if (!cert || !verify(*cert)) throw std::logic_error("chain: stage inclusion failed its purity check");
      c.purity.push_back(*cert);
    }
    c.embeddings.push_back(std::move(e));
    c.fresh.push_back(std::move(fr));
    c.groups.push_back(std::move(next));
  }
  c.log = map_indices<StageInvariants>(
      c.groups.size(), [&](std::size_t i) { return stage_invariants(c.groups[i], spec.P); }, mode);
  return c;
}

GroupElement push_forward(const ChainState& c, std::size_t i, std::size_t j, GroupElement x) {
  if (i > j || j >= c.groups.size()) throw InputError("push_forward: stage out of range");
  for (std::size_t t = i; t < j; ++t) x = c.embeddings[t].apply(x);
  return x;
}

UnionReport union_invariants(const ChainState& c, std::optional<std::size_t> stage, const Integer& spot_bound) {
  const std::size_t s = stage.value_or(c.groups.size() - 1);
  if (s >= c.groups.size()) throw InputError("union_invariants: stage out of range");
  const StructuredGroup& G = c.groups[s];
  const auto primes = chain_primes(c.spec);
  const std::size_t growth = c.spec.m * s;
  UnionReport r;
  r.cls = c.spec.cls;
  r.stage = s;

  if (c.spec.cls == ChainClass::Kab) {
    r.divisibility = is_divisible_group(G, spot_bound);
    if (!r.divisibility->divisible) {
      r.failures.push_back("stage " + std::to_string(s) + " is not divisible");
      return r;
    }
    r.form = canonical_divisible_form(G);
    DivisibleForm pred = canonical_divisible_form(divisible_hull(c.groups[0]).group);
    pred.rk0 += growth;
    for (const auto& p : primes) pred.rkp[p] += growth;
    r.predicted_form = pred;
    if (*r.form != pred) r.failures.push_back("divisible form differs from the prediction");
    return r;
  }

  for (const auto& p : primes) {
    r.dim_mod_p[p] = dim_mod_p(G, p);
    r.predicted_dim[p] = dim_mod_p(c.groups[0], p) + growth;
    if (r.dim_mod_p[p] != r.predicted_dim[p])
      r.failures.push_back("dim mod " + to_string(p) + " differs from the prediction");
    // Images of the adjoined Loc(p) generators in G_j / p G_j.
    for (std::size_t j = 1; j <= s; ++j) {
      std::vector<IntVector> rows;
      for (std::size_t t = 0; t < j; ++t)
        for (auto idx : c.fresh[t].local.at(p))
          rows.push_back(mod_p_image(c.groups[j], push_forward(c, t + 1, j, c.groups[t + 1].unit(idx)), p));
      const std::size_t width = rows.empty() ? 0 : rows[0].size();
      const std::size_t rk = rank_mod_p(rows_of(rows, width), p);
      r.independence_rank[p].push_back(rk);
      if (rk != c.spec.m * j)
        r.failures.push_back("adjoined Loc(" + to_string(p) + ") generators dependent mod p at stage " +
                             std::to_string(j));
    }
  }
  return r;
}

UniversalityResult universality_probe(const ChainState& c, std::size_t i, const StructuredGroup& A) {
  if (i + 1 >= c.groups.size()) throw InputError("universality_probe: stage out of range");
  const StructuredGroup& Gi = c.groups[i];
  const StructuredGroup& G1 = c.groups[i + 1];
  const FreshSummands& fr = c.fresh[i];
  const bool ktf = c.spec.cls == ChainClass::Ktf;

  std::size_t next_q = 0;
  std::map<Integer, std::size_t> next_local;
  UniversalityResult out;
  Embedding e{direct_sum(Gi, A), G1, c.embeddings[i].maps};

  auto take_q = [&]() -> std::optional<std::size_t> {
    if (next_q < fr.q.size()) return fr.q[next_q++];
    return std::nullopt;
  };
  auto take_local = [&](const Integer& p) -> std::optional<std::size_t> {
    auto it = fr.local.find(p);
    if (it == fr.local.end()) return std::nullopt;
    std::size_t& k = next_local[p];
    if (k < it->second.size()) return it->second[k++];
    return std::nullopt;
  };
  const std::string local_name = ktf ? "Loc(" : "Pruefer(";

  for (std::size_t j = 0; j < A.size(); ++j) {
    const Atom& a = A.atom(j);
    AtomMap m{Gi.size() + j, {}};
    auto need_q = [&]() {
      if (auto t = take_q()) m.targets.push_back({*t, 0, 1});
      else out.unmet.push_back(a.to_string() + ": fresh Q supply exhausted");
    };
    auto need_local = [&](const Integer& p, const Rational& coeff) {
      if (p > c.spec.P) {
        out.unmet.push_back(a.to_string() + ": needs " + local_name + to_string(p) + "), p > prime_bound");
      } else if (auto t = take_local(p)) {
        m.targets.push_back({*t, 0, coeff});
      } else {
        out.unmet.push_back(a.to_string() + ": fresh " + local_name + to_string(p) + ") supply exhausted");
      }
    };
    switch (a.kind) {
      case AtomKind::Q: need_q(); break;
      case AtomKind::Z:
        if (ktf) out.unmet.push_back("Z: no fresh summand receives Z purely");
        else need_q();
        break;
      case AtomKind::Loc:
        if (ktf) need_local(a.p, 1);
        else need_q();
        break;
      case AtomKind::Zmod:
        if (ktf) {
          out.unmet.push_back(a.to_string() + ": torsion atom outside the Ktf menu");
        } else {
          for (const auto& [p, k] : factor(a.n)) need_local(p, Rational(1, pow(p, k)));
        }
        break;
      case AtomKind::Pruefer:
        if (ktf) out.unmet.push_back(a.to_string() + ": torsion atom outside the Ktf menu");
        else need_local(a.p, 1);
        break;
      case AtomKind::Completion: out.unmet.push_back(a.to_string() + ": not in the atom menu"); break;
    }
    e.maps.push_back(std::move(m));
  }
  if (!out.unmet.empty()) return out;

  e.validate();
  if (!e.injective()) throw std::logic_error("universality_probe: built map is not injective");
  for (std::size_t j = 0; j < Gi.size(); ++j) {
    const GroupElement u = Gi.unit(j);
    if (e.apply(concat(u, A.zero())) != c.embeddings[i].apply(u))
      throw std::logic_error("universality_probe: extension moves the base");
  }
  if (ktf) {
    const auto r = is_pure_embedding(e, kPurityBound);
    const auto* cert = std::get_if<EmbeddingPurityCertificate>(&r);
    if (!cert || !verify(*cert)) throw std::logic_error("universality_probe: extension is not pure");
    out.certificate = *cert;
  }
  out.representable = true;
  out.embedding = std::move(e);
  return out;
}

OmegaDemo omega_noncompactness_demo(const ChainState& c, const Integer& p) {
  if (c.spec.cls != ChainClass::Ktf) throw InputError("omega demo: needs a Ktf chain");
  if (c.spec.cofinality != Cofinality::omega) throw InputError("omega demo: chain is tagged uncountable-proxy");
  if (!is_prime(p) || p > c.spec.P) throw InputError("omega demo: p must be a prime <= prime_bound");
  const std::size_t k = c.spec.steps;
  if (k < 2) throw InputError("omega demo: chain too short for a prefix of depth 1");
  const std::size_t N = k - 1;

  auto constants_in = [&](std::size_t stage, std::size_t count) {
    std::vector<GroupElement> cs;
    for (std::size_t n = 0; n < count; ++n)
      cs.push_back(push_forward(c, n + 1, stage, c.groups[n + 1].unit(c.fresh[n].local.at(p).front())));
    return cs;
  };
  OmegaDemo demo;
  demo.p = p;
  demo.stream.family = StreamFamily::shift_recurrence;
  demo.stream.p = p;
  demo.stream.rule = ConstantRule::listed;
  demo.stream.constants = constants_in(k, N);

  // Prefix n only mentions e_0 .. e_{n-1}, all present in G_n.
  for (std::size_t n = 1; n <= N; ++n) {
    SystemStream local = demo.stream;
    local.constants = constants_in(n, n);
    const FiniteSolveResult r = prefix_solvable(c.groups[n], local, n);
    const auto* x = std::get_if<Assignment>(&r);
    if (!x || !satisfies(c.groups[n], stream_prefix(c.groups[n], local, n), *x))
      throw std::logic_error("omega demo: prefix " + std::to_string(n) + " not solvable in its stage");
    demo.prefix_stage.push_back(n);
  }

  const ProbeResult probe = compactness_probe(c.groups[k], demo.stream, N);
  if (probe.verdict != ProbeVerdict::non_compactness_evidence || !probe.certificate ||
      !verify_certificate(*probe.certificate, c.groups[k], demo.stream))
    throw std::logic_error("omega demo: no verified support-growth certificate");
  demo.certificate = *probe.certificate;
  return demo;
}

CompletionContrast completion_contrast(const Integer& p, unsigned long K, std::size_t w) {
  if (w < 2) throw InputError("completion contrast: width must be >= 2");
  CompletionContrast out;
  out.group = StructuredGroup({Atom::completion(p, K, w)});
  out.stream.family = StreamFamily::shift_recurrence;
  out.stream.p = p;
  out.stream.rule = ConstantRule::listed;
  for (std::size_t n = 0; n < w; ++n) out.stream.constants.push_back(out.group.unit(0, n));
  out.result = compactness_probe(out.group, out.stream, w);
  return out;
}

std::string to_string(ChainClass c) { return c == ChainClass::Kab ? "kab" : "ktf"; }

}  // namespace alab
