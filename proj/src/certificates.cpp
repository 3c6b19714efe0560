#include "alab/certificates.hpp"

namespace alab {

bool verify(const DivisibilityFailure& d) {
  try {
    if (d.n < 2 || !d.group.contains(d.x)) return false;
    return !divide(d.group, d.x, d.n).has_value();
  } catch (const InputError&) {
    return false;
  }
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json rat_vectors(const std::vector<RatVector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

Json elements_json(const StructuredGroup& G, const std::vector<GroupElement>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(G, x));
  return a;
}

std::vector<RatVector> read_rat_vectors(const JsonIn& in) {
  std::vector<RatVector> out;
  for (std::size_t i = 0; i < in.size(); ++i) out.push_back(read_rat_vector(in.at(i)));
  return out;
}

Json integer_list(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

std::string kind_name(CertificateKind k) { return to_string(k); }

CertificateKind read_kind(const JsonIn& in) {
  const std::string s = in.string();
  if (s == "support-growth") return CertificateKind::support_growth;
  if (s == "height-demand") return CertificateKind::height_demand;
  if (s == "modulus-obstruction") return CertificateKind::modulus_obstruction;
  in.fail("unknown non-solvability type");
}

Json modulus_obstruction_json(const StructuredGroup& G, const ModulusObstruction& o) {
  return Json{{"combination", to_json(o.combination)},
              {"modulus", to_json(o.modulus)},
              {"reduced_row", to_json(o.reduced_row)},
              {"value", to_json(G, o.value)}};
}

ModulusObstruction read_modulus_obstruction(const StructuredGroup& G, const JsonIn& in) {
  in.allow({"combination", "modulus", "reduced_row", "value"});
  return {read_int_vector(in.at("combination")), in.at("modulus").integer(), read_int_vector(in.at("reduced_row")),
          read_element(G, in.at("value"))};
}

Json closure_fields(const CompletelyDecomposable& H, const RatMatrix& span, const RatVector& a,
                    const RatVector& b) {
  return Json{{"ambient", to_json(H)}, {"base_span", to_json(span)}, {"a", to_json(a)}, {"b", to_json(b)}};
}

Json data_of(const Certificate& c) {
  return std::visit(
      overloaded{
          [](const FgPurityCertificate& x) {
            return Json{{"subgroup", to_json(x.subgroup)},
                        {"quotient_exponent", to_json(x.quotient_exponent)},
                        {"checked_moduli", integer_list(x.checked_moduli)}};
          },
          [](const FgNonPurityWitness& x) {
            return Json{{"subgroup", to_json(x.subgroup)}, {"n", to_json(x.n)}, {"h", to_json(x.h)}};
          },
          [](const CdPurityCertificate& x) {
            return Json{{"ambient", to_json(x.ambient)},
                        {"basis", to_json(x.basis)},
                        {"checked_primes", integer_list(x.checked_primes)}};
          },
          [](const CdNonPurityWitness& x) {
            return Json{{"ambient", to_json(x.ambient)},
                        {"basis", to_json(x.basis)},
                        {"n", to_json(x.n)},
                        {"h", to_json(x.h)}};
          },
          [](const IntegerSolveCertificate& x) {
            const auto& o = x.obstruction;
            return Json{{"A", to_json(x.A)},
                        {"b", to_json(x.b)},
                        {"obstruction",
                         {{"row", o.row},
                          {"modulus", to_json(o.modulus)},
                          {"value", to_json(o.value)},
                          {"combination", to_json(o.combination)},
                          {"reduced_row", to_json(o.reduced_row)}}}};
          },
          [](const SystemObstructionCertificate& x) {
            return Json{{"group", to_json(x.group)},
                        {"system", to_json(x.group, x.system)},
                        {"obstruction", modulus_obstruction_json(x.group, x.obstruction)}};
          },
          [](const NonSolvabilityCertificate& x) {
            Json j{{"type", kind_name(x.kind)},
                   {"group", to_json(x.group)},
                   {"stream", to_json(x.group, x.stream)},
                   {"N", x.N},
                   {"summands", x.summands},
                   {"forced", integer_list(x.forced)},
                   {"digit_positions", x.digit_positions},
                   {"prefix_solution", elements_json(x.group, x.prefix_solution)}};
            if (x.obstruction) j["obstruction"] = modulus_obstruction_json(x.group, *x.obstruction);
            return j;
          },
          [](const AbTypeWitness& x) {
            return Json{{"base", to_json(x.base)}, {"a", to_json(x.a)}, {"b", to_json(x.b)}, {"k", to_json(x.k)}};
          },
          [](const TfTypeWitness& x) {
            Json j = closure_fields(x.ambient, x.base_span, x.a, x.b);
            j["detail"] = std::visit(
                overloaded{[](const HeightWitness& h) {
                             return Json{{"kind", "height"},
                                         {"p", to_json(h.p)},
                                         {"probe", to_json(h.probe)},
                                         {"ha", to_json(h.ha)},
                                         {"hb", to_json(h.hb)}};
                           },
                           [](const ElementWitness& e) {
                             return Json{{"kind", "element"}, {"x", to_json(e.x)}, {"from_a", e.from_a}};
                           },
                           [](const BaseWitness& b) { return Json{{"kind", "base"}, {"a_in_base", b.a_in_base}}; }},
                x.detail);
            return j;
          },
          [](const ClosureIso& x) { return closure_fields(x.ambient, x.base_span, x.a, x.b); },
          [](const EmbeddingPurityCertificate& x) {
            return Json{{"embedding", to_json(x.embedding)},
                        {"strength", x.strength == PurityStrength::exact ? "exact" : "bounded"},
                        {"bound", to_json(x.bound)}};
          },
          [](const EmbeddingNonPurityWitness& x) {
            return Json{{"embedding", to_json(x.embedding)},
                        {"n", to_json(x.n)},
                        {"x", to_json(x.embedding.domain, x.x)}};
          },
          [](const DivisibilityFailure& x) {
            return Json{{"group", to_json(x.group)}, {"x", to_json(x.group, x.x)}, {"n", to_json(x.n)}};
          },
          [](const DivisibleImageCertificate& x) {
            return Json{{"ambient", to_json(x.ambient)}, {"M", to_json(x.M)}};
          },
          [](const ButlerWitness& x) {
            Json j{{"ambient", to_json(x.ambient)},
                   {"generators", rat_vectors(x.generators)},
                   {"span", to_json(x.closure.span)}};
            if (x.closure.z_basis) j["z_basis"] = to_json(*x.closure.z_basis);
            if (x.certificate)
              j["certificate"] = Json{{"basis", to_json(x.certificate->basis)},
                                      {"checked_primes", integer_list(x.certificate->checked_primes)}};
            return j;
          },
      },
      c);
}

}  // namespace

std::string certificate_kind(const Certificate& c) {
  return std::visit(overloaded{
                        [](const FgPurityCertificate&) { return "fg-purity"; },
                        [](const FgNonPurityWitness&) { return "fg-non-purity"; },
                        [](const CdPurityCertificate&) { return "cd-purity"; },
                        [](const CdNonPurityWitness&) { return "cd-non-purity"; },
                        [](const IntegerSolveCertificate&) { return "solve-obstruction"; },
                        [](const SystemObstructionCertificate&) { return "system-obstruction"; },
                        [](const NonSolvabilityCertificate&) { return "non-solvability"; },
                        [](const AbTypeWitness&) { return "ab-type-difference"; },
                        [](const TfTypeWitness&) { return "tf-type-witness"; },
                        [](const ClosureIso&) { return "closure-iso"; },
                        [](const EmbeddingPurityCertificate&) { return "embedding-purity"; },
                        [](const EmbeddingNonPurityWitness&) { return "embedding-non-purity"; },
                        [](const DivisibilityFailure&) { return "divisibility-failure"; },
                        [](const DivisibleImageCertificate&) { return "divisible-image"; },
                        [](const ButlerWitness&) { return "butler-witness"; },
                    },
                    c);
}

Json serialize(const Certificate& c, const Json& context) {
  return Json{{"kind", certificate_kind(c)}, {"context", context}, {"data", data_of(c)}};
}

Certificate deserialize(const Json& envelope) {
  const JsonIn root(envelope);
  root.allow({"kind", "context", "data"});
  const std::string kind = root.at("kind").string();
  const JsonIn d = root.at("data");
  if (auto ctx = root.get("context"); ctx && !ctx->is_object()) ctx->fail("expected an object");

  if (kind == "fg-purity") {
    d.allow({"subgroup", "quotient_exponent", "checked_moduli"});
    return FgPurityCertificate{read_fg_subgroup(d.at("subgroup")), d.at("quotient_exponent").integer(),
                               read_integer_list(d.at("checked_moduli"))};
  }
  if (kind == "fg-non-purity") {
    d.allow({"subgroup", "n", "h"});
    return FgNonPurityWitness{read_fg_subgroup(d.at("subgroup")), d.at("n").integer(), read_int_vector(d.at("h"))};
  }
  if (kind == "cd-purity") {
    d.allow({"ambient", "basis", "checked_primes"});
    CompletelyDecomposable C = read_cd(d.at("ambient"));
    RatMatrix B = read_rat_matrix(d.at("basis"), C.rank());
    return CdPurityCertificate{std::move(C), std::move(B), read_integer_list(d.at("checked_primes"))};
  }
  if (kind == "cd-non-purity") {
    d.allow({"ambient", "basis", "n", "h"});
    CompletelyDecomposable C = read_cd(d.at("ambient"));
    RatMatrix B = read_rat_matrix(d.at("basis"), C.rank());
    return CdNonPurityWitness{std::move(C), std::move(B), d.at("n").integer(), read_rat_vector(d.at("h"))};
  }
  if (kind == "solve-obstruction") {
    d.allow({"A", "b", "obstruction"});
    const JsonIn o = d.at("obstruction");
    o.allow({"row", "modulus", "value", "combination", "reduced_row"});
    return IntegerSolveCertificate{read_int_matrix(d.at("A")), read_int_vector(d.at("b")),
                                   SolveObstruction{o.at("row").count(), o.at("modulus").integer(),
                                                    o.at("value").integer(), read_int_vector(o.at("combination")),
                                                    read_int_vector(o.at("reduced_row"))}};
  }
  if (kind == "system-obstruction") {
    d.allow({"group", "system", "obstruction"});
    StructuredGroup G = read_structured(d.at("group"));
    LinearSystem s = read_system(G, d.at("system"));
    ModulusObstruction o = read_modulus_obstruction(G, d.at("obstruction"));
    return SystemObstructionCertificate{std::move(G), std::move(s), std::move(o)};
  }
  if (kind == "non-solvability") {
    d.allow({"type", "group", "stream", "N", "summands", "forced", "digit_positions", "prefix_solution",
             "obstruction"});
    NonSolvabilityCertificate c;
    c.kind = read_kind(d.at("type"));
    c.group = read_structured(d.at("group"));
    c.stream = read_stream(c.group, d.at("stream"));
    c.N = d.at("N").count();
    const JsonIn s = d.at("summands");
    for (std::size_t i = 0; i < s.size(); ++i) c.summands.push_back(s.at(i).count());
    c.forced = read_integer_list(d.at("forced"));
    const JsonIn dp = d.at("digit_positions");
    for (std::size_t i = 0; i < dp.size(); ++i) c.digit_positions.push_back(dp.at(i).count());
    const JsonIn ps = d.at("prefix_solution");
    for (std::size_t i = 0; i < ps.size(); ++i) c.prefix_solution.push_back(read_element(c.group, ps.at(i)));
    if (auto o = d.get("obstruction")) c.obstruction = read_modulus_obstruction(c.group, *o);
    return c;
  }
  if (kind == "ab-type-difference") {
    d.allow({"base", "a", "b", "k"});
    return AbTypeWitness{read_fg_subgroup(d.at("base")), read_int_vector(d.at("a")), read_int_vector(d.at("b")),
                         d.at("k").integer()};
  }
  if (kind == "tf-type-witness" || kind == "closure-iso") {
    if (kind == "closure-iso") d.allow({"ambient", "base_span", "a", "b"});
    else d.allow({"ambient", "base_span", "a", "b", "detail"});
    CompletelyDecomposable H = read_cd(d.at("ambient"));
    RatMatrix span = read_rat_matrix(d.at("base_span"), H.rank());
    RatVector a = read_rat_vector(d.at("a")), b = read_rat_vector(d.at("b"));
    if (kind == "closure-iso") return ClosureIso{std::move(H), std::move(span), std::move(a), std::move(b)};
    const JsonIn det = d.at("detail");
    const std::string dk = det.at("kind").string();
    TfTypeWitness w{std::move(H), std::move(span), std::move(a), std::move(b), BaseWitness{}};
    if (dk == "height") {
      det.allow({"kind", "p", "probe", "ha", "hb"});
      w.detail = HeightWitness{det.at("p").integer(), read_rat_vector(det.at("probe")), read_height(det.at("ha")),
                               read_height(det.at("hb"))};
    } else if (dk == "element") {
      det.allow({"kind", "x", "from_a"});
      w.detail = ElementWitness{read_rat_vector(det.at("x")), det.at("from_a").boolean()};
    } else if (dk == "base") {
      det.allow({"kind", "a_in_base"});
      w.detail = BaseWitness{det.at("a_in_base").boolean()};
    } else {
      det.at("kind").fail("expected height, element or base");
    }
    return w;
  }
  if (kind == "embedding-purity") {
    d.allow({"embedding", "strength", "bound"});
    const std::string s = d.at("strength").string();
    if (s != "exact" && s != "bounded") d.at("strength").fail("expected exact or bounded");
    return EmbeddingPurityCertificate{read_embedding(d.at("embedding")),
                                      s == "exact" ? PurityStrength::exact : PurityStrength::bounded,
                                      d.at("bound").integer()};
  }
  if (kind == "embedding-non-purity") {
    d.allow({"embedding", "n", "x"});
    Embedding e = read_embedding(d.at("embedding"));
    GroupElement x = read_element(e.domain, d.at("x"));
    return EmbeddingNonPurityWitness{std::move(e), d.at("n").integer(), std::move(x)};
  }
  if (kind == "divisibility-failure") {
    d.allow({"group", "x", "n"});
    StructuredGroup G = read_structured(d.at("group"));
    GroupElement x = read_element(G, d.at("x"));
    return DivisibilityFailure{std::move(G), std::move(x), d.at("n").integer()};
  }
  if (kind == "divisible-image") {
    d.allow({"ambient", "M"});
    CompletelyDecomposable C = read_cd(d.at("ambient"));
    return DivisibleImageCertificate{C, read_rat_matrix(d.at("M"), C.rank())};
  }
  if (kind == "butler-witness") {
    d.allow({"ambient", "generators", "span", "z_basis", "certificate"});
    ButlerWitness w;
    w.ambient = read_cd(d.at("ambient"));
    w.generators = read_rat_vectors(d.at("generators"));
    w.closure.ambient = w.ambient;
    w.closure.span = read_rat_matrix(d.at("span"), w.ambient.rank());
    if (auto z = d.get("z_basis")) w.closure.z_basis = read_rat_matrix(*z, w.ambient.rank());
    if (auto c = d.get("certificate")) {
      c->allow({"basis", "checked_primes"});
      w.certificate = CdPurityCertificate{w.ambient, read_rat_matrix(c->at("basis"), w.ambient.rank()),
                                          read_integer_list(c->at("checked_primes"))};
    }
    return w;
  }
  root.at("kind").fail("unknown certificate kind \"" + kind + "\"");
}

bool verify_any(const Certificate& c) {
  try {
    return std::visit(
        overloaded{
            [](const IntegerSolveCertificate& x) { return check_obstruction(x.A, x.b, x.obstruction); },
            [](const SystemObstructionCertificate& x) { return check_obstruction(x.group, x.system, x.obstruction); },
            [](const NonSolvabilityCertificate& x) { return verify_certificate(x); },
            [](const auto& x) { return verify(x); },
        },
        c);
  } catch (const InputError&) {
    return false;
  }
}

}  // namespace alab
