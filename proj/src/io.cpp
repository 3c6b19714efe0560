#include "alab/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace alab {

// ---------------------------------------------------------------------------
// JsonIn
// ---------------------------------------------------------------------------

void JsonIn::fail(const std::string& msg) const { throw InputError(path() + ": " + msg, path()); }

void JsonIn::allow(std::initializer_list<std::string_view> keys) const {
  if (!j_->is_object()) fail("expected an object");
  for (const auto& item : j_->items()) {
    bool ok = false;
    for (auto k : keys) ok = ok || item.key() == k;
    if (!ok) JsonIn(item.value(), path_ + "/" + item.key()).fail("unknown field");
  }
}

bool JsonIn::has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

JsonIn JsonIn::at(const std::string& key) const {
  if (!j_->is_object()) fail("expected an object");
  auto it = j_->find(key);
  if (it == j_->end()) JsonIn(*j_, path_ + "/" + key).fail("missing required field");
  return JsonIn(*it, path_ + "/" + key);
}

std::optional<JsonIn> JsonIn::get(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return at(key);
}

JsonIn JsonIn::at(std::size_t i) const {
  if (!j_->is_array()) fail("expected an array");
  if (i >= j_->size()) fail("index " + std::to_string(i) + " out of range");
  return JsonIn((*j_)[i], path_ + "/" + std::to_string(i));
}

std::size_t JsonIn::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

std::string JsonIn::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

bool JsonIn::boolean() const {
  if (!j_->is_boolean()) fail("expected a boolean");
  return j_->get<bool>();
}

Integer JsonIn::integer() const {
  try {
    if (j_->is_number_integer()) return parse_integer(j_->dump());
    if (j_->is_string()) return parse_integer(j_->get<std::string>());
  } catch (const InputError& e) {
    fail(e.what());
  }
  fail("expected an integer (number or decimal string)");
}

Rational JsonIn::rational() const {
  try {
    if (j_->is_number_integer()) return Rational(parse_integer(j_->dump()));
    if (j_->is_string()) return parse_rational(j_->get<std::string>());
  } catch (const InputError& e) {
    fail(e.what());
  }
  fail("expected a rational (integer or \"a/b\" string)");
}

std::size_t JsonIn::count() const {
  const Integer z = integer();
  if (z < 0 || !z.fits_ulong_p()) fail("expected a nonnegative count");
  return z.get_ui();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(what + ": malformed JSON (" + e.what() + ")", "/");
  }
}

Json load_json_file(const std::string& file) {
  std::ifstream f(file);
  if (!f) throw InputError("cannot open " + file);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_json(ss.str(), file);
}

// ---------------------------------------------------------------------------
// Scalars and matrices
// ---------------------------------------------------------------------------

Json to_json(const Integer& x) { return to_string(x); }
Json to_json(const Rational& x) { return to_string(x); }
Json to_json(const Height& h) { return h.is_infinite() ? Json("inf") : Json(h.value()); }

Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

Json to_json(const IntMatrix& A) {
  Json a = Json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) a.push_back(to_json(A.row_vector(i)));
  return a;
}

Json to_json(const RatMatrix& A) {
  Json a = Json::array();
  for (std::size_t i = 0; i < A.rows(); ++i) a.push_back(to_json(A.row_vector(i)));
  return a;
}

IntVector read_int_vector(const JsonIn& in) {
  IntVector v;
  for (std::size_t i = 0; i < in.size(); ++i) v.push_back(in.at(i).integer());
  return v;
}

RatVector read_rat_vector(const JsonIn& in) {
  RatVector v;
  for (std::size_t i = 0; i < in.size(); ++i) v.push_back(in.at(i).rational());
  return v;
}

std::vector<Integer> read_integer_list(const JsonIn& in) { return read_int_vector(in); }

namespace {

template <class T, class Read>
Matrix<T> read_matrix(const JsonIn& in, std::optional<std::size_t> cols, Read read) {
  const std::size_t r = in.size();
  std::size_t c = cols.value_or(0);
  if (r > 0) {
    const std::size_t first = in.at(0).size();
    if (cols && *cols != first) in.at(0).fail("expected " + std::to_string(*cols) + " entries");
    c = first;
  }
  Matrix<T> M(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    const JsonIn row = in.at(i);
    if (row.size() != c) row.fail("ragged matrix row");
    for (std::size_t j = 0; j < c; ++j) M(i, j) = read(row.at(j));
  }
  return M;
}

std::vector<JsonIn> elements(const JsonIn& in) {
  std::vector<JsonIn> out;
  for (std::size_t i = 0; i < in.size(); ++i) out.push_back(in.at(i));
  return out;
}

}  // namespace

IntMatrix read_int_matrix(const JsonIn& in, std::optional<std::size_t> cols) {
  return read_matrix<Integer>(in, cols, [](const JsonIn& x) { return x.integer(); });
}

RatMatrix read_rat_matrix(const JsonIn& in, std::optional<std::size_t> cols) {
  return read_matrix<Rational>(in, cols, [](const JsonIn& x) { return x.rational(); });
}

Height read_height(const JsonIn& in) {
  if (in.is_string() && in.string() == "inf") return Height::infinity();
  const std::size_t n = in.count();
  return Height::finite(n);
}

// ---------------------------------------------------------------------------
// fg groups
// ---------------------------------------------------------------------------

Json to_json(const FgGroup& G) {
  return Json{{"free_rank", G.free_rank()}, {"torsion", to_json(G.torsion())}};
}

Json to_json(const FgSubgroup& H) {
  Json j = to_json(H.ambient);
  Json gens = Json::array();
  for (const auto& g : H.generators) gens.push_back(to_json(g));
  j["generators"] = gens;
  return j;
}

namespace {

FgGroup read_fg_fields(const JsonIn& in) {
  if (in.has("relations")) {
    if (in.has("free_rank") || in.has("torsion")) in.fail("give either relations or free_rank/torsion");
    std::optional<std::size_t> cols;
    if (auto c = in.get("columns")) cols = c->count();
    const IntMatrix A = read_int_matrix(in.at("relations"), cols);
    if (A.rows() == 0 && !cols) in.at("relations").fail("an empty relation matrix needs \"columns\"");
    return FgGroup::from_relations(A);
  }
  std::size_t f = 0;
  IntVector t;
  if (auto x = in.get("free_rank")) f = x->count();
  if (auto x = in.get("torsion")) t = read_int_vector(*x);
  try {
    return FgGroup(f, t);
  } catch (const InputError& e) {
    in.fail(e.what());
  }
}

}  // namespace

FgGroup read_fg_group(const JsonIn& in) {
  in.allow({"free_rank", "torsion", "relations", "columns"});
  return read_fg_fields(in);
}

std::vector<IntVector> read_fg_elements(const FgGroup& G, const JsonIn& in) {
  std::vector<IntVector> out;
  for (const auto& e : elements(in)) {
    IntVector v = read_int_vector(e);
    try {
      out.push_back(G.presentation() ? G.to_canonical(v) : G.normalize(v));
    } catch (const InputError& err) {
      e.fail(err.what());
    }
  }
  return out;
}

FgSubgroup read_fg_subgroup(const JsonIn& in) {
  in.allow({"free_rank", "torsion", "relations", "columns", "generators"});
  FgGroup G = read_fg_fields(in);
  std::vector<IntVector> gens;
  if (auto g = in.get("generators")) gens = read_fg_elements(G, *g);
  return FgSubgroup(std::move(G), std::move(gens));
}

// ---------------------------------------------------------------------------
// Characteristics and completely decomposable groups
// ---------------------------------------------------------------------------

Json to_json(const Characteristic& c) {
  Json ex = Json::object();
  for (const auto& [p, h] : c.exceptions()) ex[to_string(p)] = to_json(h);
  return Json{{"default", c.default_kind() == CharDefault::zero ? "zero" : "infinity"}, {"exceptions", ex}};
}

Json to_json(const CompletelyDecomposable& C) {
  Json a = Json::array();
  for (const auto& c : C.characteristics()) a.push_back(to_json(c));
  return Json{{"characteristics", a}};
}

Characteristic read_characteristic(const JsonIn& in) {
  in.allow({"default", "exceptions"});
  const std::string d = in.at("default").string();
  CharDefault def;
  if (d == "zero") def = CharDefault::zero;
  else if (d == "infinity") def = CharDefault::infinity;
  else in.at("default").fail("expected \"zero\" or \"infinity\"");
  std::map<Integer, Height> ex;
  if (auto e = in.get("exceptions")) {
    if (!e->is_object()) e->fail("expected an object keyed by primes");
    for (const auto& item : e->raw().items()) {
      const JsonIn v(item.value(), e->path() + "/" + item.key());
      Integer p;
      try {
        p = parse_integer(item.key());
      } catch (const InputError&) {
        v.fail("key is not an integer");
      }
      if (!is_prime(p)) v.fail("key " + item.key() + " is not prime");
      ex[p] = read_height(v);
    }
  }
  return Characteristic(def, std::move(ex));
}

CompletelyDecomposable read_cd(const JsonIn& in) {
  const JsonIn list = in.is_array() ? in : (in.allow({"characteristics"}), in.at("characteristics"));
  std::vector<Characteristic> chars;
  for (const auto& e : elements(list)) chars.push_back(read_characteristic(e));
  return CompletelyDecomposable(std::move(chars));
}

// ---------------------------------------------------------------------------
// Structured groups
// ---------------------------------------------------------------------------

Json to_json(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Z: return Json{{"atom", "Z"}};
    case AtomKind::Q: return Json{{"atom", "Q"}};
    case AtomKind::Zmod: return Json{{"atom", "Zmod"}, {"n", to_json(a.n)}};
    case AtomKind::Pruefer: return Json{{"atom", "Pruefer"}, {"p", to_json(a.p)}};
    case AtomKind::Loc: return Json{{"atom", "Loc"}, {"p", to_json(a.p)}};
    case AtomKind::Completion:
      return Json{{"atom", "Completion"}, {"p", to_json(a.p)}, {"K", a.K}, {"w", a.w}};
  }
  return Json();
}

Json to_json(const StructuredGroup& G) {
  Json a = Json::array();
  for (const auto& x : G.atoms()) a.push_back(to_json(x));
  return Json{{"atoms", a}};
}

Json to_json(const StructuredGroup& G, const GroupElement& x) {
  Json a = Json::array();
  for (std::size_t i = 0; i < x.components.size(); ++i) {
    if (const auto* q = std::get_if<Rational>(&x.components[i])) a.push_back(to_json(*q));
    else a.push_back(to_json(std::get<IntVector>(x.components[i])));
  }
  (void)G;
  return a;
}

Atom read_atom(const JsonIn& in) {
  const std::string kind = in.at("atom").string();
  try {
    if (kind == "Z" || kind == "Q") {
      in.allow({"atom"});
      return kind == "Z" ? Atom::z() : Atom::q();
    }
    if (kind == "Zmod") {
      in.allow({"atom", "n"});
      return Atom::zmod(in.at("n").integer());
    }
    if (kind == "Pruefer" || kind == "Loc") {
      in.allow({"atom", "p"});
      const Integer p = in.at("p").integer();
      return kind == "Loc" ? Atom::loc(p) : Atom::pruefer(p);
    }
    if (kind == "Completion") {
      in.allow({"atom", "p", "K", "w"});
      return Atom::completion(in.at("p").integer(), in.at("K").count(), in.at("w").count());
    }
  } catch (const InputError& e) {
    if (e.path().empty()) in.fail(e.what());
    throw;
  }
  in.at("atom").fail("unknown atom kind \"" + kind + "\"");
}

StructuredGroup read_structured(const JsonIn& in) {
  if (!in.has("atoms")) return to_structured(read_fg_group(in));
  in.allow({"atoms"});
  std::vector<Atom> atoms;
  for (const auto& e : elements(in.at("atoms"))) atoms.push_back(read_atom(e));
  return StructuredGroup(std::move(atoms));
}

GroupElement read_element(const StructuredGroup& G, const JsonIn& in) {
  if (in.size() != G.size()) in.fail("expected " + std::to_string(G.size()) + " components");
  GroupElement x;
  for (std::size_t i = 0; i < G.size(); ++i) {
    const JsonIn c = in.at(i);
    if (G.atom(i).kind == AtomKind::Completion) x.components.emplace_back(read_int_vector(c));
    else x.components.emplace_back(c.rational());
  }
  try {
    return G.normalize(x);
  } catch (const InputError& e) {
    in.fail(e.what());
  }
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

Json to_json(const Embedding& e) {
  Json maps = Json::array();
  for (const auto& m : e.maps) {
    Json ts = Json::array();
    for (const auto& t : m.targets)
      ts.push_back(Json{{"target", t.target}, {"coord", t.coord}, {"coefficient", to_json(t.coefficient)}});
    maps.push_back(Json{{"source", m.source}, {"targets", ts}});
  }
  return Json{{"domain", to_json(e.domain)}, {"codomain", to_json(e.codomain)}, {"maps", maps}};
}

Embedding read_embedding(const JsonIn& in) {
  in.allow({"domain", "codomain", "maps"});
  Embedding e{read_structured(in.at("domain")), read_structured(in.at("codomain")), {}};
  for (const auto& m : elements(in.at("maps"))) {
    m.allow({"source", "targets"});
    AtomMap am{m.at("source").count(), {}};
    for (const auto& t : elements(m.at("targets"))) {
      t.allow({"target", "coord", "coefficient"});
      AtomTarget at;
      at.target = t.at("target").count();
      if (auto c = t.get("coord")) at.coord = c->count();
      if (auto c = t.get("coefficient")) at.coefficient = c->rational();
      am.targets.push_back(at);
    }
    e.maps.push_back(std::move(am));
  }
  try {
    e.validate();
  } catch (const InputError& err) {
    in.fail(err.what());
  }
  return e;
}

// ---------------------------------------------------------------------------
// Systems and streams
// ---------------------------------------------------------------------------

Json to_json(const StructuredGroup& G, const Equation& e) {
  Json c = Json::object();
  for (const auto& [j, v] : e.coefficients) c[std::to_string(j)] = to_json(v);
  return Json{{"coefficients", c}, {"constant", to_json(G, e.constant)}};
}

Json to_json(const StructuredGroup& G, const LinearSystem& s) {
  Json eqs = Json::array();
  for (const auto& e : s.equations) eqs.push_back(to_json(G, e));
  return Json{{"variables", s.variables}, {"equations", eqs}};
}

Json to_json(const StructuredGroup& G, const SystemStream& s) {
  Json j;
  switch (s.family) {
    case StreamFamily::shift_recurrence: j["family"] = "shift-recurrence"; break;
    case StreamFamily::height_ladder: j["family"] = "height-ladder"; break;
    case StreamFamily::explicit_list: j["family"] = "explicit"; break;
  }
  j["p"] = to_json(s.p);
  switch (s.rule) {
    case ConstantRule::basis: j["constants"] = "basis"; break;
    case ConstantRule::triangular:
      j["constants"] = "triangular";
      j["summand"] = s.summand;
      break;
    case ConstantRule::listed: {
      Json a = Json::array();
      for (const auto& c : s.constants) a.push_back(to_json(G, c));
      j["constants"] = a;
      break;
    }
  }
  if (s.family == StreamFamily::explicit_list) {
    Json eqs = Json::array();
    for (const auto& e : s.equations) eqs.push_back(to_json(G, e));
    j["equations"] = eqs;
  }
  return j;
}

Equation read_equation(const StructuredGroup& G, const JsonIn& in) {
  in.allow({"coefficients", "constant"});
  Equation e;
  const JsonIn c = in.at("coefficients");
  if (!c.is_object()) c.fail("expected an object keyed by variable index");
  for (const auto& item : c.raw().items()) {
    const JsonIn v(item.value(), c.path() + "/" + item.key());
    std::size_t idx = 0;
    try {
      const Integer k = parse_integer(item.key());
      if (k < 0 || !k.fits_ulong_p()) throw InputError("negative");
      idx = k.get_ui();
    } catch (const InputError&) {
      v.fail("key is not a variable index");
    }
    const Integer coeff = v.integer();
    if (coeff != 0) e.coefficients[idx] = coeff;
  }
  e.constant = in.has("constant") ? read_element(G, in.at("constant")) : G.zero();
  return e;
}

LinearSystem read_system(const StructuredGroup& G, const JsonIn& in) {
  in.allow({"variables", "equations"});
  LinearSystem s;
  const JsonIn vars = in.at("variables");
  if (vars.is_array()) {
    for (const auto& v : elements(vars)) s.variables.push_back(v.string());
  } else {
    const std::size_t n = vars.count();
    for (std::size_t i = 0; i < n; ++i) s.variables.push_back("x" + std::to_string(i));
  }
  const JsonIn eqs = in.at("equations");
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    s.equations.push_back(read_equation(G, eqs.at(i)));
    for (const auto& kv : s.equations.back().coefficients)
      if (kv.first >= s.variables.size()) eqs.at(i).at("coefficients").fail("unknown variable index");
  }
  return s;
}

SystemStream read_stream(const StructuredGroup& G, const JsonIn& in) {
  in.allow({"family", "p", "constants", "summand", "equations"});
  SystemStream s;
  const std::string fam = in.at("family").string();
  if (fam == "shift-recurrence") s.family = StreamFamily::shift_recurrence;
  else if (fam == "height-ladder") s.family = StreamFamily::height_ladder;
  else if (fam == "explicit") s.family = StreamFamily::explicit_list;
  else in.at("family").fail("expected shift-recurrence, height-ladder or explicit");
  if (auto p = in.get("p")) {
    s.p = p->integer();
    if (!is_prime(s.p)) p->fail("p must be prime");
  }
  if (auto c = in.get("constants")) {
    if (c->is_string()) {
      const std::string r = c->string();
      if (r == "basis") s.rule = ConstantRule::basis;
      else if (r == "triangular") s.rule = ConstantRule::triangular;
      else c->fail("expected \"basis\", \"triangular\" or a list of elements");
    } else {
      s.rule = ConstantRule::listed;
      for (const auto& e : elements(*c)) s.constants.push_back(read_element(G, e));
    }
  } else {
    s.rule = ConstantRule::listed;
  }
  if (auto k = in.get("summand")) {
    if (s.rule != ConstantRule::triangular) k->fail("summand only applies to triangular constants");
    s.summand = k->count();
    if (s.summand >= G.size()) k->fail("summand out of range");
  }
  if (auto eqs = in.get("equations")) {
    if (s.family != StreamFamily::explicit_list) eqs->fail("equations only apply to the explicit family");
    for (const auto& e : elements(*eqs)) s.equations.push_back(read_equation(G, e));
  } else if (s.family == StreamFamily::explicit_list) {
    in.at("equations");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Chains and amalgamation
// ---------------------------------------------------------------------------

Json to_json(const ChainSpec& s) {
  return Json{{"class", to_string(s.cls)},
              {"base", to_json(s.base)},
              {"steps", s.steps},
              {"m", s.m},
              {"P", to_json(s.P)},
              {"cofinality", s.cofinality == Cofinality::omega ? "omega" : "uncountable-proxy"}};
}

ChainSpec read_chain_spec(const JsonIn& in) {
  in.allow({"class", "base", "steps", "m", "P", "cofinality"});
  ChainSpec s;
  const std::string c = in.at("class").string();
  if (c == "kab") s.cls = ChainClass::Kab;
  else if (c == "ktf") s.cls = ChainClass::Ktf;
  else in.at("class").fail("expected \"kab\" or \"ktf\"");
  s.base = read_structured(in.at("base"));
  s.steps = in.at("steps").count();
  if (auto m = in.get("m")) s.m = m->count();
  if (auto P = in.get("P")) s.P = P->integer();
  if (auto cf = in.get("cofinality")) {
    const std::string v = cf->string();
    if (v == "omega") s.cofinality = Cofinality::omega;
    else if (v == "uncountable-proxy") s.cofinality = Cofinality::uncountable_proxy;
    else cf->fail("expected \"omega\" or \"uncountable-proxy\"");
  }
  return s;
}

AmalgamationInput read_amalgamation(const JsonIn& in) {
  in.allow({"G", "H1", "H2", "M1", "M2"});
  AmalgamationInput a;
  a.G = read_structured(in.at("G"));
  a.H1 = read_cd(in.at("H1"));
  a.H2 = read_cd(in.at("H2"));
  a.M1 = read_rat_matrix(in.at("M1"), a.H1.rank());
  a.M2 = read_rat_matrix(in.at("M2"), a.H2.rank());
  if (a.M1.rows() == 0) a.M1 = RatMatrix(0, a.H1.rank());
  if (a.M2.rows() == 0) a.M2 = RatMatrix(0, a.H2.rank());
  return a;
}

Json to_json(const AmalgamationInput& in) {
  return Json{{"G", to_json(in.G)}, {"H1", to_json(in.H1)}, {"H2", to_json(in.H2)},
              {"M1", to_json(in.M1)}, {"M2", to_json(in.M2)}};
}

}  // namespace alab
