#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "alab/certificates.hpp"

using namespace alab;

namespace {

struct Options {
  std::string in, ambient, gens, base, cls = "ktf", cofinality = "omega", cert_out;
  bool json = false, demo = false;
  std::uint64_t seed = 0;
  long prime_bound = 7, precision = 16, bound = 50;
  std::size_t steps = 1, m = 1, n = 0;
  long P = 2;
};

struct Report {
  Json j = Json::object();
  std::vector<std::string> lines;
  int code = 0;
  std::optional<Certificate> cert;
  void line(const std::string& s) { lines.push_back(s); }
};

template <class V>
std::string tuple(const V& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + to_string(v[i]);
  return s + ")";
}

std::string tuple_sizes(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

std::string element_string(const StructuredGroup& G, const GroupElement& x) { return to_json(G, x).dump(); }

/// Loads --in, checking and removing the optional top-level version.
Json require_input(const Options& o) {
  if (o.in.empty()) throw InputError("--in is required for this subcommand");
  Json j = load_json_file(o.in);
  if (j.is_object() && j.contains("version")) {
    if (JsonIn(j["version"], "/version").count() != 1) JsonIn(j["version"], "/version").fail("unsupported version");
    j.erase("version");
  }
  return j;
}

/// Top-level scenario object: the listed keys plus an optional version.
JsonIn scenario(const Json& j, std::initializer_list<std::string_view> keys) {
  const JsonIn in(j);
  if (!in.is_object()) in.fail("expected a scenario object");
  std::vector<std::string_view> all(keys);
  for (const auto& item : j.items()) {
    if (std::find(all.begin(), all.end(), item.key()) == all.end())
      JsonIn(item.value(), "/" + item.key()).fail("unknown field");
  }
  return in;
}

Json ambient_json(const Options& o, const Json* scen) {
  if (!o.ambient.empty()) return load_json_file(o.ambient);
  if (scen && scen->contains("ambient")) return (*scen)["ambient"];
  throw InputError("an ambient group is required (--ambient or \"ambient\" in --in)");
}

Json gens_json(const Options& o, const Json* scen) {
  if (!o.gens.empty()) return parse_json(o.gens, "--gens");
  if (scen && scen->contains("generators")) return (*scen)["generators"];
  return Json::array();
}

enum class AmbientKind { fg, cd, structured };

AmbientKind kind_of(const Json& a) {
  if (a.is_array() || (a.is_object() && a.contains("characteristics"))) return AmbientKind::cd;
  if (a.is_object() && a.contains("atoms")) return AmbientKind::structured;
  return AmbientKind::fg;
}

std::vector<RatVector> rat_rows(const JsonIn& in) {
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < in.size(); ++i) out.push_back(read_rat_vector(in.at(i)));
  return out;
}

/// Scenario for ambient-plus-generators commands, from --in or flags.
std::optional<Json> optional_input(const Options& o) {
  if (o.in.empty()) return std::nullopt;
  Json j = require_input(o);
  scenario(j, {"ambient", "generators"});
  return j;
}

// ---------------------------------------------------------------------------

Report cmd_snf(const Options& o) {
  const Json j = require_input(o);
  const IntMatrix A = j.is_array() ? read_int_matrix(JsonIn(j)) : read_int_matrix(scenario(j, {"matrix"}).at("matrix"));
  const SmithForm S = smith_normal_form(A);
  Report r;
  r.j = {{"invariant_factors", to_json(S.invariant_factors)}, {"rank", S.rank()},
         {"U", to_json(S.U)}, {"D", to_json(S.D)}, {"V", to_json(S.V)}};
  r.line("invariant factors: " + tuple(S.invariant_factors));
  r.line("rank: " + std::to_string(S.rank()));
  return r;
}

Report cmd_group(const Options& o) {
  const Json j = require_input(o);
  const FgGroup G = read_fg_group(JsonIn(j));
  const Ranks rk = ranks(G);
  Report r;
  Json rkp = Json::object(), dims = Json::object();
  for (const auto& [p, k] : rk.rkp) rkp[to_string(p)] = k;
  std::string dim_line = "dim_mod_p:";
  for (const auto& p : primes_up_to(o.prime_bound)) {
    dims[to_string(p)] = dim_mod_p(G, p);
    dim_line += " " + to_string(p) + "->" + std::to_string(dim_mod_p(G, p));
  }
  r.j = {{"group", to_json(G)}, {"rk0", rk.rk0}, {"rkp", rkp}, {"torsion_order", to_json(G.torsion_order())},
         {"dim_mod_p", dims}};
  r.line("free rank: " + std::to_string(G.free_rank()));
  r.line("invariant factors: " + tuple(G.torsion()));
  std::string rk_line = "rk0 = " + std::to_string(rk.rk0);
  for (const auto& [p, k] : rk.rkp) rk_line += ", rk" + to_string(p) + " = " + std::to_string(k);
  r.line(rk_line);
  r.line(dim_line);
  return r;
}

Report cmd_purity(const Options& o) {
  const auto scen = optional_input(o);
  const Json amb = ambient_json(o, scen ? &*scen : nullptr);
  const Json gj = gens_json(o, scen ? &*scen : nullptr);
  Report r;
  auto emit = [&](bool pure, Certificate c, const std::string& text) {
    r.j["pure"] = pure;
    r.line(text);
    r.cert = std::move(c);
    r.code = pure ? 0 : 1;
  };
  if (kind_of(amb) == AmbientKind::cd) {
    const CompletelyDecomposable C = read_cd(JsonIn(amb, "/ambient"));
    const auto res = is_pure(C, rat_rows(JsonIn(gj, "/generators")));
    if (const auto* c = std::get_if<CdPurityCertificate>(&res))
      emit(true, *c, "pure (checked primes " + tuple(c->checked_primes) + ")");
    else {
      const auto& w = std::get<CdNonPurityWitness>(res);
      emit(false, w, "not pure: n = " + to_string(w.n) + ", h = " + tuple(w.h));
    }
    return r;
  }
  const FgGroup G = read_fg_group(JsonIn(amb, "/ambient"));
  const FgSubgroup H(G, read_fg_elements(G, JsonIn(gj, "/generators")));
  const auto res = is_pure(H);
  if (const auto* c = std::get_if<FgPurityCertificate>(&res))
    emit(true, *c, "pure (checked moduli " + tuple(c->checked_moduli) + ")");
  else {
    const auto& w = std::get<FgNonPurityWitness>(res);
    emit(false, w, "not pure: n = " + to_string(w.n) + ", h = " + tuple(w.h));
  }
  return r;
}

Report cmd_closure(const Options& o) {
  const auto scen = optional_input(o);
  const Json amb = ambient_json(o, scen ? &*scen : nullptr);
  const Json gj = gens_json(o, scen ? &*scen : nullptr);
  Report r;
  if (kind_of(amb) == AmbientKind::cd) {
    const CompletelyDecomposable C = read_cd(JsonIn(amb, "/ambient"));
    const ButlerWitness w = purify_in_cd(rat_rows(JsonIn(gj, "/generators")), C);
    r.j["rank"] = w.closure.rank();
    r.j["span"] = to_json(w.closure.span);
    if (w.closure.z_basis) r.j["basis"] = to_json(*w.closure.z_basis);
    r.line("closure rank: " + std::to_string(w.closure.rank()));
    if (w.closure.z_basis)
      for (std::size_t i = 0; i < w.closure.z_basis->rows(); ++i)
        r.line("basis: " + tuple(w.closure.z_basis->row_vector(i)));
    else
      for (std::size_t i = 0; i < w.closure.span.rows(); ++i)
        r.line("span: " + tuple(w.closure.span.row_vector(i)));
    r.cert = w;
    return r;
  }
  const FgGroup G = read_fg_group(JsonIn(amb, "/ambient"));
  ClosureTrace trace;
  const FgSubgroup cl = pure_closure(read_fg_elements(G, JsonIn(gj, "/generators")), G, &trace);
  const IntMatrix B = cl.lift_basis();
  r.j["basis"] = to_json(B);
  r.j["stages"] = trace.stages.size();
  r.line("closure rank: " + std::to_string(B.rows()));
  for (std::size_t i = 0; i < B.rows(); ++i) r.line("basis: " + tuple(B.row_vector(i)));
  r.line("stages: " + std::to_string(trace.stages.size()));
  const auto pur = is_pure(cl);
  if (const auto* c = std::get_if<FgPurityCertificate>(&pur)) r.cert = *c;
  return r;
}

Json char_json(const Characteristic& c) { return to_json(c); }

std::string char_text(const Characteristic& c) {
  std::string s = std::string("default ") + (c.default_kind() == CharDefault::zero ? "0" : "inf");
  for (const auto& [p, h] : c.exceptions()) s += ", " + to_string(p) + "->" + h.to_string();
  return s;
}

Report cmd_heights(const Options& o) {
  const auto scen = optional_input(o);
  const Json amb = ambient_json(o, scen ? &*scen : nullptr);
  const Json gj = gens_json(o, scen ? &*scen : nullptr);
  const JsonIn gin(gj, "/generators");
  const auto primes = primes_up_to(o.prime_bound);
  Report r;
  Json out = Json::array();
  auto record = [&](const std::string& label, const std::vector<Height>& hs, const Characteristic& c) {
    Json h = Json::object();
    std::string s = label + ":";
    for (std::size_t i = 0; i < primes.size(); ++i) {
      h[to_string(primes[i])] = to_json(hs[i]);
      s += " h" + to_string(primes[i]) + "=" + hs[i].to_string();
    }
    out.push_back({{"element", label}, {"heights", h}, {"characteristic", char_json(c)}});
    r.line(s + "; characteristic " + char_text(c));
  };
  switch (kind_of(amb)) {
    case AmbientKind::cd: {
      const CompletelyDecomposable C = read_cd(JsonIn(amb, "/ambient"));
      for (std::size_t i = 0; i < gin.size(); ++i) {
        const RatVector x = read_rat_vector(gin.at(i));
        C.require_member(x, "element " + std::to_string(i));
        std::vector<Height> hs;
        for (const auto& p : primes) hs.push_back(C.p_height(x, p));
        record(tuple(x), hs, C.characteristic_of(x));
      }
      break;
    }
    case AmbientKind::structured: {
      const StructuredGroup G = read_structured(JsonIn(amb, "/ambient"));
      for (std::size_t i = 0; i < gin.size(); ++i) {
        const GroupElement x = read_element(G, gin.at(i));
        std::vector<Height> hs;
        for (const auto& p : primes) hs.push_back(p_height(G, x, p));
        record(element_string(G, x), hs, characteristic_of(G, x));
      }
      break;
    }
    case AmbientKind::fg: {
      const FgGroup G = read_fg_group(JsonIn(amb, "/ambient"));
      for (const auto& x : read_fg_elements(G, gin)) {
        std::vector<Height> hs;
        for (const auto& p : primes) hs.push_back(p_height(G, x, p));
        record(tuple(x), hs, characteristic_of(G, x));
      }
      break;
    }
  }
  r.j["elements"] = out;
  return r;
}

Report cmd_type_eq(const Options& o) {
  const Json j = require_input(o);
  const JsonIn in = scenario(j, {"ambient", "base", "base_summand", "a", "b", "rank_bound"});
  const CompletelyDecomposable H = read_cd(in.at("ambient"));
  TfBase base;
  if (auto s = in.get("base_summand")) {
    if (in.has("base")) s->fail("give either base or base_summand");
    std::vector<std::size_t> coords;
    for (std::size_t i = 0; i < s->size(); ++i) coords.push_back(s->at(i).count());
    base = tf_base_summand(H, coords);
  } else {
    base = tf_base_from_generators(H, in.has("base") ? rat_rows(in.at("base")) : std::vector<RatVector>{});
  }
  const RatVector a = read_rat_vector(in.at("a")), b = read_rat_vector(in.at("b"));
  const std::size_t bound = in.has("rank_bound") ? in.at("rank_bound").count() : H.rank();
  const TfTypeResult res = gtype_eq_tf(a, b, base, bound);
  Report r;
  r.j["verdict"] = to_string(res.verdict);
  r.line("verdict: " + to_string(res.verdict));
  if (res.witness) {
    r.cert = *res.witness;
    if (const auto* h = std::get_if<HeightWitness>(&res.witness->detail))
      r.line("witness: " + to_string(h->p) + "-heights " + h->ha.to_string() + " vs " + h->hb.to_string() +
             " after adding " + tuple(h->probe));
    else if (const auto* e = std::get_if<ElementWitness>(&res.witness->detail))
      r.line("witness: closure element " + tuple(e->x) + " has no image in the ambient");
    else
      r.line("witness: exactly one of a, b lies in the base");
  }
  if (res.iso) r.cert = *res.iso;
  r.code = res.verdict == TfVerdict::not_equal ? 1 : 0;
  return r;
}

Report cmd_gtype(const Options& o) {
  const Json j = require_input(o);
  const JsonIn in = scenario(j, {"base", "a", "b"});
  const FgSubgroup G = read_fg_subgroup(in.at("base"));
  auto elem = [&](const JsonIn& x) {
    Json wrap = Json::array({x.raw()});
    return read_fg_elements(G.ambient, JsonIn(wrap, x.path())).front();
  };
  auto describe = [](const GaloisTypeAb& t) {
    return t.free ? std::string("free") : "torsioned (n = " + to_string(t.n) + ", g* = " + tuple(t.gstar) + ")";
  };
  auto type_json = [](const GaloisTypeAb& t) {
    Json x{{"free", t.free}};
    if (!t.free) x["n"] = to_json(t.n), x["gstar"] = to_json(t.gstar);
    return x;
  };
  Report r;
  const IntVector a = elem(in.at("a"));
  const GaloisTypeAb ta = gtype_ab(a, G);
  r.j["type_a"] = type_json(ta);
  r.line("type of a: " + describe(ta));
  if (auto bj = in.get("b")) {
    const IntVector b = elem(*bj);
    const GaloisTypeAb tb = gtype_ab(b, G);
    r.j["type_b"] = type_json(tb);
    r.line("type of b: " + describe(tb));
    const auto w = ab_type_difference(a, b, G);
    r.j["verdict"] = w ? "not-equal" : "equal";
    r.line(std::string("verdict: ") + (w ? "not-equal" : "equal"));
    if (w) {
      r.line("witness: k = " + to_string(w->k));
      r.cert = *w;
      r.code = 1;
    }
  }
  return r;
}

Report cmd_divhull(const Options& o) {
  const Json j = require_input(o);
  const StructuredGroup G = read_structured(JsonIn(j));
  const Hull h = divisible_hull(G);
  const DivisibilityVerdict dv = is_divisible_group(h.group, o.bound);
  const DivisibilityVerdict din = is_divisible_group(G, o.bound);
  Report r;
  r.j = {{"hull", to_json(h.group)}, {"embedding", to_json(h.embedding)}, {"hull_divisible", dv.divisible},
         {"spot_checks", dv.spot_checks}, {"input_divisible", din.divisible}};
  r.line("hull: " + h.group.to_string());
  for (std::size_t i = 0; i < G.size(); ++i)
    r.line("generator " + std::to_string(i) + " -> " + element_string(h.group, h.embedding.apply(G.unit(i))));
  r.line(std::string("hull divisible: ") + (dv.divisible ? "yes" : "no") + " (" + std::to_string(dv.spot_checks) +
         " spot divisions, n <= " + std::to_string(o.bound) + ")");
  r.line(std::string("input divisible: ") + (din.divisible ? "yes" : "no"));
  if (!din.divisible) r.cert = DivisibilityFailure{G, *din.witness, din.witness_n};
  return r;
}

Report cmd_solve(const Options& o) {
  const Json j = require_input(o);
  Report r;
  if (j.contains("A")) {
    const JsonIn in = scenario(j, {"A", "b"});
    const IntMatrix A = read_int_matrix(in.at("A"));
    const IntVector b = read_int_vector(in.at("b"));
    if (b.size() != A.rows()) in.at("b").fail("length must match the rows of A");
    const SolveResult res = solve_integer_system(A, b);
    if (const auto* s = std::get_if<SolutionSet>(&res)) {
      Json hom = Json::array();
      for (const auto& h : s->homogeneous) hom.push_back(to_json(h));
      r.j = {{"solvable", true}, {"particular", to_json(s->particular)}, {"homogeneous", hom}};
      r.line("solvable: x = " + tuple(s->particular) + " + span of " + std::to_string(hom.size()) + " vectors");
    } else {
      const auto& ob = std::get<SolveObstruction>(res);
      r.j = {{"solvable", false}};
      r.line("no integer solution: combination " + tuple(ob.combination) + " gives " + to_string(ob.value) +
             (ob.modulus == 0 ? " = 0" : " not divisible by " + to_string(ob.modulus)));
      r.cert = IntegerSolveCertificate{A, b, ob};
      r.code = 1;
    }
    return r;
  }
  const JsonIn in = scenario(j, {"group", "system"});
  const StructuredGroup G = read_structured(in.at("group"));
  const LinearSystem sys = read_system(G, in.at("system"));
  const FiniteSolveResult res = solve_finite(G, sys);
  if (const auto* x = std::get_if<Assignment>(&res)) {
    Json a = Json::array();
    for (std::size_t i = 0; i < x->size(); ++i) {
      a.push_back(to_json(G, (*x)[i]));
      r.line(sys.variables[i] + " = " + element_string(G, (*x)[i]));
    }
    r.j = {{"solvable", true}, {"assignment", a}};
  } else {
    const auto& ob = std::get<ModulusObstruction>(res);
    r.j = {{"solvable", false}};
    r.line("no solution: combination " + tuple(ob.combination) + " gives " + element_string(G, ob.value) +
           (ob.modulus == 0 ? " != 0" : " not divisible by " + to_string(ob.modulus)));
    r.cert = SystemObstructionCertificate{G, sys, ob};
    r.code = 1;
  }
  return r;
}

Report cmd_probe(const Options& o) {
  const Json j = require_input(o);
  const JsonIn in = scenario(j, {"group", "stream", "N"});
  const StructuredGroup G = read_structured(in.at("group"));
  const SystemStream s = read_stream(G, in.at("stream"));
  const std::size_t N = in.has("N") ? in.at("N").count() : static_cast<std::size_t>(o.bound);
  const ProbeResult pr = compactness_probe(G, s, N);
  Report r;
  r.j = {{"verdict", to_string(pr.verdict)}, {"N", pr.N}, {"note", pr.note}};
  r.line("verdict: " + to_string(pr.verdict) + " (N = " + std::to_string(pr.N) + ")");
  r.line("note: " + pr.note);
  if (pr.assignment) {
    Json a = Json::array();
    for (const auto& x : *pr.assignment) a.push_back(to_json(G, x));
    r.j["assignment"] = a;
    r.line("x_0 = " + element_string(G, pr.assignment->front()));
  }
  if (pr.certificate) {
    r.line("obstruction: " + to_string(pr.certificate->kind));
    r.cert = *pr.certificate;
  }
  r.code = pr.verdict == ProbeVerdict::not_finitely_solvable || pr.verdict == ProbeVerdict::non_compactness_evidence
               ? 1
               : 0;
  return r;
}

Report cmd_chain(const Options& o) {
  ChainSpec spec;
  if (!o.in.empty()) {
    const Json j = require_input(o);
    spec = read_chain_spec(JsonIn(j));
  } else {
    if (o.base.empty()) throw InputError("chain needs --in or --base");
    if (o.cls == "kab") spec.cls = ChainClass::Kab;
    else if (o.cls == "ktf") spec.cls = ChainClass::Ktf;
    else throw InputError("--class must be kab or ktf");
    spec.base = read_structured(JsonIn(load_json_file(o.base)));
    spec.steps = o.steps;
    spec.m = o.m;
    spec.P = o.P;
    if (o.cofinality == "omega") spec.cofinality = Cofinality::omega;
    else if (o.cofinality == "uncountable-proxy") spec.cofinality = Cofinality::uncountable_proxy;
    else throw InputError("--cofinality must be omega or uncountable-proxy");
  }
  const ChainState c = build_chain(spec);
  const UnionReport u = union_invariants(c, std::nullopt, o.bound);
  Report r;
  Json log = Json::array();
  for (std::size_t i = 0; i < c.log.size(); ++i) {
    const auto& s = c.log[i];
    Json rkp = Json::object(), dims = Json::object();
    for (const auto& [p, k] : s.rkp) rkp[to_string(p)] = k;
    for (const auto& [p, k] : s.dim_mod_p) dims[to_string(p)] = k;
    log.push_back({{"stage", i}, {"rk0", s.rk0}, {"rkp", rkp}, {"dim_mod_p", dims}});
  }
  r.j = {{"spec", to_json(spec)}, {"log", log}, {"stage_group", c.groups.back().to_string()}, {"ok", u.ok()},
         {"failures", u.failures}};
  r.line("class " + to_string(spec.cls) + ", " + std::to_string(spec.steps) + " steps, m = " +
         std::to_string(spec.m) + ", P = " + to_string(spec.P));
  for (const auto& p : primes_up_to(spec.P)) {
    std::vector<std::size_t> dims;
    for (const auto& s : c.log) dims.push_back(s.dim_mod_p.at(p));
    r.line("dim_mod_" + to_string(p) + " log: " + tuple_sizes(dims));
  }
  std::vector<std::size_t> rk0s;
  for (const auto& s : c.log) rk0s.push_back(s.rk0);
  r.line("rk0 log: " + tuple_sizes(rk0s));
  if (spec.cls == ChainClass::Kab && u.form) {
    r.j["divisible"] = u.divisibility->divisible;
    r.j["rk0"] = u.form->rk0;
    r.line(std::string("stage ") + std::to_string(u.stage) + " divisible: " +
           (u.divisibility->divisible ? "yes" : "no") + ", rk0 = " + std::to_string(u.form->rk0) +
           " (predicted " + std::to_string(u.predicted_form->rk0) + ")");
  }
  if (spec.cls == ChainClass::Ktf)
    for (const auto& [p, ranks] : u.independence_rank)
      r.line("adjoined Loc(" + to_string(p) + ") ranks mod p per stage: " + tuple_sizes(ranks));
  for (const auto& f : u.failures) r.line("FAIL: " + f);
  if (o.demo && spec.cls == ChainClass::Ktf) {
    if (spec.cofinality == Cofinality::omega) {
      const OmegaDemo d = omega_noncompactness_demo(c);
      r.j["omega_demo"] = {{"prefixes_solved", d.prefix_stage.size()}};
      r.line("omega demo: prefixes 1.." + std::to_string(d.prefix_stage.size()) +
             " solvable in their stages; support-growth certificate at N = " + std::to_string(d.certificate.N));
      r.cert = d.certificate;
    } else {
      const CompletionContrast cc =
          completion_contrast(2, static_cast<unsigned long>(o.precision), std::max<std::size_t>(2, spec.steps));
      r.j["completion_contrast"] = to_string(cc.result.verdict);
      r.line("completion contrast over " + cc.group.to_string() + ": " + to_string(cc.result.verdict));
    }
  }
  r.code = u.ok() ? 0 : 1;
  return r;
}

Report cmd_amalgamate(const Options& o) {
  const Json j = require_input(o);
  const AmalgamationInput in = read_amalgamation(scenario(j, {"G", "H1", "H2", "M1", "M2"}));
  std::mt19937_64 rng(o.seed);
  const PushoutReport p = amalgamation_pushout(in, rng, 20, o.bound);
  Report r;
  r.j = {{"rank", p.H.rank()},          {"relations", to_json(p.H.relations())},
         {"torsion_free", p.torsion_free}, {"f1_pure", p.f1_pure},
         {"f2_pure", p.f2_pure},          {"base_agreement", p.base_agreement},
         {"summands_pure", p.summands_pure}, {"claim", p.claim},
         {"failures", p.failures}};
  r.line("pushout rank: " + std::to_string(p.H.rank()));
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  r.line(std::string("torsion-free on samples: ") + yn(p.torsion_free));
  r.line(std::string("f1 pure: ") + yn(p.f1_pure) + ", f2 pure: " + yn(p.f2_pure));
  r.line(std::string("f1 and f2 agree on G: ") + yn(p.base_agreement));
  r.line(std::string("rank-one summands pure: ") + yn(p.summands_pure));
  r.line(std::string("E = G* + cl sample check: ") + yn(p.claim));
  r.cert = p.purity1;
  r.code = p.ok() ? 0 : 1;
  return r;
}

Report cmd_instability(const Options& o) {
  CompletelyDecomposable G = CompletelyDecomposable::free(1);
  std::vector<Characteristic> chars;
  if (!o.in.empty()) {
    const Json j = require_input(o);
    const JsonIn in = scenario(j, {"G", "characteristics"});
    if (auto g = in.get("G")) G = read_cd(*g);
    const JsonIn cs = in.at("characteristics");
    for (std::size_t i = 0; i < cs.size(); ++i) chars.push_back(read_characteristic(cs.at(i)));
  } else {
    if (o.n < 1) throw InputError("instability needs --in or --n >= 1");
    chars = distinct_type_family(o.n, o.seed);
  }
  const InstabilityReport rep = instability_demo(G, chars);
  Report r;
  Json pairs = Json::array();
  for (const auto& pv : rep.pairs) {
    Json x{{"i", pv.i}, {"j", pv.j}, {"verdict", to_string(pv.result.verdict)}, {"verified", pv.verified}};
    if (pv.result.witness)
      if (const auto* h = std::get_if<HeightWitness>(&pv.result.witness->detail)) x["prime"] = to_json(h->p);
    pairs.push_back(x);
  }
  r.j = {{"n", chars.size()}, {"pairs", pairs}, {"not_equal", rep.not_equal}, {"equal", rep.equal},
         {"inconclusive", rep.inconclusive}, {"unverified", rep.unverified}};
  r.line(std::to_string(chars.size()) + " characteristics, " + std::to_string(rep.pairs.size()) + " pairs");
  r.line("not-equal: " + std::to_string(rep.not_equal) + ", equal: " + std::to_string(rep.equal) +
         ", inconclusive: " + std::to_string(rep.inconclusive) + ", unverified: " + std::to_string(rep.unverified));
  if (!rep.pairs.empty() && rep.pairs[0].result.witness) {
    r.cert = *rep.pairs[0].result.witness;
    if (const auto* h = std::get_if<HeightWitness>(&rep.pairs[0].result.witness->detail))
      r.line("pair (0, 1): prime-" + to_string(h->p) + " height witness");
  }
  const bool ok = rep.not_equal == rep.pairs.size() && rep.unverified == 0;
  r.code = ok ? 0 : 1;
  return r;
}

Report cmd_verify(const Options& o) {
  const Json j = require_input(o);
  const Certificate c = deserialize(j);
  const bool ok = verify_any(c);
  Report r;
  r.j = {{"kind", certificate_kind(c)}, {"valid", ok}};
  r.line(certificate_kind(c) + ": " + (ok ? "valid" : "invalid"));
  r.code = ok ? 0 : 1;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with abelian groups, purity and Galois types"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* s) {
    s->add_option("--in", o.in, "scenario or input JSON file");
    s->add_flag("--json", o.json, "machine-readable output");
    s->add_option("--seed", o.seed, "random seed");
    s->add_option("--prime-bound", o.prime_bound, "largest prime reported");
    s->add_option("--precision", o.precision, "completion precision K");
    s->add_option("--bound", o.bound, "search or spot-check bound");
    s->add_option("--cert", o.cert_out, "write the emitted certificate to this file");
  };
  struct Sub {
    const char* name;
    const char* help;
    Report (*run)(const Options&);
  };
  const Sub subs[] = {
      {"snf", "Smith normal form of an integer matrix", cmd_snf},
      {"group", "canonical form and invariants of an fg group", cmd_group},
      {"purity", "decide purity of a subgroup with a certificate", cmd_purity},
      {"closure", "pure closure of a generating set", cmd_closure},
      {"heights", "p-heights and characteristics of elements", cmd_heights},
      {"type-eq", "compare Galois types in a completely decomposable ambient", cmd_type_eq},
      {"gtype", "Galois types over an fg subgroup", cmd_gtype},
      {"divhull", "divisible hull and divisibility check", cmd_divhull},
      {"solve", "solve a linear system over Z or a structured group", cmd_solve},
      {"probe", "finite-solvability probe of a countable system", cmd_probe},
      {"chain", "build a chain and check its invariants", cmd_chain},
      {"amalgamate", "pushout over a divisible base", cmd_amalgamate},
      {"instability", "pairwise type comparisons of a distinct-type family", cmd_instability},
      {"verify", "re-check a serialized certificate", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    const std::string n = s.name;
    if (n == "purity" || n == "closure" || n == "heights") {
      sub->add_option("--ambient", o.ambient, "ambient group JSON file");
      sub->add_option("--gens", o.gens, "generators as a JSON array");
    }
    if (n == "chain") {
      sub->add_option("--class", o.cls, "kab or ktf");
      sub->add_option("--base", o.base, "base group JSON file");
      sub->add_option("--steps", o.steps, "number of steps");
      sub->add_option("--m", o.m, "per-step multiplicity");
      sub->add_option("--P", o.P, "prime bound for adjoined summands");
      sub->add_option("--cofinality", o.cofinality, "omega or uncountable-proxy");
      sub->add_flag("--demo", o.demo, "run the omega demo or completion contrast");
    }
    if (n == "instability") sub->add_option("--n", o.n, "family size");
    registered.emplace_back(sub, &s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (const auto& [sub, s] : registered) {
    if (!sub->parsed()) continue;
    try {
      Report r = s->run(o);
      if (r.cert) {
        const Json env = serialize(*r.cert, Json{{"command", s->name}});
        const bool ok = verify_any(*r.cert);
        r.j["certificate"] = env;
        r.j["certificate_valid"] = ok;
        r.line("certificate: " + certificate_kind(*r.cert) + (ok ? " (verified)" : " (FAILED verification)"));
        if (!o.cert_out.empty()) {
          std::ofstream f(o.cert_out);
          if (!f) throw InputError("cannot write " + o.cert_out);
          f << env.dump(2) << "\n";
        }
        if (!ok) r.code = 1;
      }
      if (o.json) std::cout << r.j.dump(2) << "\n";
      else
        for (const auto& l : r.lines) std::cout << l << "\n";
      return r.code;
    } catch (const InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
