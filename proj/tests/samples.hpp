#pragma once
// A spread of certificates from every producer, plus single-field tamperings
// each of which makes the certified claim false.

#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace samples {

using namespace alab;

inline RatVector rv(std::initializer_list<Rational> xs) { return RatVector(xs); }

inline std::vector<Certificate> certificates() {
  std::vector<Certificate> out;
  std::mt19937_64 rng(2024);

  // fg purity, both outcomes.
  auto add_fg = [&](const FgSubgroup& H) { std::visit([&](const auto& c) { out.push_back(c); }, is_pure(H)); };
  add_fg(FgSubgroup(FgGroup(2, {}), {IntVector{2, 0}}));
  add_fg(FgSubgroup(FgGroup(2, {}), {IntVector{1, 0}}));
  add_fg(FgSubgroup(FgGroup(1, IntVector{4}), {IntVector{0, 2}}));
  add_fg(FgSubgroup(FgGroup(1, IntVector{4}), {IntVector{1, 0}}));
  for (int t = 0; t < 10; ++t) {
    FgGroup G = oracle::random_fg(rng, 2, 24);
    if (G.free_rank() == 0) G = FgGroup(1, G.torsion());
    add_fg(FgSubgroup(G, {oracle::random_element(rng, G, -4, 4)}));
  }

  // cd purity.
  const CompletelyDecomposable C2({Characteristic(CharDefault::zero, {{2, Height::infinity()}}), Characteristic::zero()});
  auto add_cd = [&](const CompletelyDecomposable& C, const std::vector<RatVector>& g) {
    std::visit([&](const auto& c) { out.push_back(c); }, is_pure(C, g));
  };
  add_cd(CompletelyDecomposable::free(2), {rv({2, 4})});
  add_cd(CompletelyDecomposable::free(2), {rv({1, 2})});
  add_cd(C2, {rv({1, 1})});
  add_cd(C2, {rv({0, 6})});
  add_cd(CompletelyDecomposable({Characteristic::infinity(), Characteristic::zero()}), {rv({0, 2})});
  for (int t = 0; t < 4; ++t) add_cd(C2, {oracle::to_rat(oracle::random_vector(rng, 2, -5, 5))});

  // Integer solving obstructions.
  out.push_back(IntegerSolveCertificate{IntMatrix{{6}}, IntVector{4},
                                        std::get<SolveObstruction>(solve_integer_system(IntMatrix{{6}}, IntVector{4}))});
  for (int found = 0; found < 6;) {
    const IntMatrix A = oracle::random_matrix(rng, 2, 2, -4, 4);
    const IntVector b = oracle::random_vector(rng, 2, -5, 5);
    const auto r = solve_integer_system(A, b);
    if (const auto* o = std::get_if<SolveObstruction>(&r)) {
      out.push_back(IntegerSolveCertificate{A, b, *o});
      ++found;
    }
  }

  // Systems over structured groups.
  auto add_sys = [&](const StructuredGroup& G, const Integer& k, GroupElement c) {
    LinearSystem s{{"x"}, {{{{0, k}}, c}}};
    out.push_back(SystemObstructionCertificate{G, s, std::get<ModulusObstruction>(solve_finite(G, s))});
  };
  add_sys(StructuredGroup({Atom::z()}), 2, GroupElement{{Rational(1)}});
  add_sys(StructuredGroup({Atom::z(), Atom::zmod(4)}), 2, GroupElement{{Rational(0), Rational(1)}});
  add_sys(StructuredGroup({Atom::loc(3)}), 3, GroupElement{{Rational(1)}});

  // Countable systems.
  for (std::size_t w = 3; w <= 6; ++w) {
    SystemStream s;
    s.p = 2;
    out.push_back(*compactness_probe(StructuredGroup(std::vector<Atom>(w, Atom::loc(2))), s, w).certificate);
  }
  for (std::size_t N : {4u, 6u}) {
    SystemStream s;
    s.family = StreamFamily::height_ladder;
    s.rule = ConstantRule::triangular;
    s.p = 2;
    out.push_back(*compactness_probe(StructuredGroup({Atom::loc(2)}), s, N).certificate);
  }
  {
    SystemStream s;
    s.family = StreamFamily::explicit_list;
    s.equations = {{{}, GroupElement{{Rational(1)}}}};
    out.push_back(*compactness_probe(StructuredGroup({Atom::z()}), s, 3).certificate);
  }
  {
    ChainSpec cs;
    cs.base = StructuredGroup({Atom::z()});
    cs.steps = 4;
    const ChainState c = build_chain(cs);
    out.push_back(omega_noncompactness_demo(c).certificate);
    for (const auto& p : c.purity) out.push_back(p);
  }

  // Abelian type differences.
  out.push_back(*ab_type_difference(IntVector{1}, IntVector{3}, FgSubgroup(FgGroup(1, {}), {IntVector{2}})));
  for (int found = 0; found < 6;) {
    const FgGroup H = oracle::random_fg(rng, 1, 24);
    if (H.dimension() == 0) continue;
    const FgSubgroup G(H, {oracle::random_element(rng, H, -3, 3)});
    if (auto w = ab_type_difference(oracle::random_element(rng, H, -3, 3), oracle::random_element(rng, H, -3, 3), G)) {
      out.push_back(*w);
      ++found;
    }
  }

  // Torsion-free types.
  const CompletelyDecomposable Z23({Characteristic(CharDefault::zero, {{2, Height::infinity()}}),
                                     Characteristic(CharDefault::zero, {{3, Height::infinity()}})});
  out.push_back(*gtype_eq_tf(rv({1, 0}), rv({0, 1}), tf_base_from_generators(Z23, {}), 2).witness);
  const InstabilityReport inst = instability_demo(CompletelyDecomposable::free(1), 4, 3);
  for (const auto& pv : inst.pairs) out.push_back(*pv.result.witness);
  const CompletelyDecomposable Q2({Characteristic::infinity(), Characteristic::infinity()});
  out.push_back(*gtype_eq_tf(rv({1, 0}), rv({0, 1}), tf_base_from_generators(Q2, {}), 2).iso);
  const auto F2 = CompletelyDecomposable::free(2);
  if (auto r = gtype_eq_tf(rv({0, 1}), rv({1, 1}), tf_base_summand(F2, {0}), 2); r.iso) out.push_back(*r.iso);
  const CompletelyDecomposable Z22({Characteristic(CharDefault::zero, {{2, Height::infinity()}}),
                                     Characteristic(CharDefault::zero, {{2, Height::infinity()}})});
  if (auto r = gtype_eq_tf(rv({1, 0}), rv({0, 1}), tf_base_from_generators(Z22, {}), 2); r.iso) out.push_back(*r.iso);

  // Embeddings.
  const StructuredGroup Z({Atom::z()});
  auto add_emb = [&](const StructuredGroup& cod) {
    std::visit([&](const auto& c) { out.push_back(c); }, is_pure_embedding(summand_inclusion(Z, cod, 0), 12));
  };
  add_emb(StructuredGroup({Atom::z(), Atom::q()}));
  add_emb(StructuredGroup({Atom::q()}));
  add_emb(StructuredGroup({Atom::loc(2)}));
  add_emb(StructuredGroup({Atom::loc(5)}));

  // Divisibility failures.
  for (const auto& G : {StructuredGroup({Atom::z()}), StructuredGroup({Atom::loc(5)}),
                        StructuredGroup({Atom::q(), Atom::zmod(3)})}) {
    const auto v = is_divisible_group(G, 50);
    out.push_back(DivisibilityFailure{G, *v.witness, v.witness_n});
  }

  // Pushout purity.
  for (int t = 0; t < 3; ++t) {
    const PushoutReport r = amalgamation_pushout(random_amalgamation(rng), rng, 5);
    out.push_back(r.purity1);
    out.push_back(r.purity2);
  }

  // Butler witnesses.
  out.push_back(purify_in_cd({rv({2, 4})}, F2));
  const CompletelyDecomposable C3({Characteristic(CharDefault::zero, {{3, Height::finite(2)}}), Characteristic::zero(),
                                    Characteristic(CharDefault::zero, {{2, Height::finite(1)}})});
  for (int t = 0; t < 4; ++t) out.push_back(purify_in_cd({oracle::to_rat(oracle::random_vector(rng, 3, -6, 6))}, C3));
  return out;
}

// --- JSON tampering helpers -------------------------------------------------

/// Multiplies every decimal-string entry of a nested array by k.
inline void scale_strings(Json& j, const Rational& k) {
  if (j.is_array()) {
    for (auto& x : j) scale_strings(x, k);
  } else if (j.is_string()) {
    j = to_string(Rational(parse_rational(j.get<std::string>()) * k));
  }
}

/// Zeroes every decimal-string entry of a nested array.
inline void zero_strings(Json& j) { scale_strings(j, 0); }

/// Adds 1 to the first scalar component of an element.
inline void bump_first(Json& elem) {
  Json* x = &elem;
  while (x->is_array()) x = &(*x)[0];
  *x = to_string(Rational(parse_rational(x->get<std::string>()) + 1));
}

struct Mutation {
  std::string label;
  Json envelope;
};

inline bool nonzero_strings(const Json& j) {
  if (j.is_array()) {
    for (const auto& x : j)
      if (nonzero_strings(x)) return true;
    return false;
  }
  return j.is_string() && parse_rational(j.get<std::string>()) != 0;
}

/// Tamperings that falsify the certified claim.
inline std::vector<Mutation> mutations(const Certificate& c) {
  const Json env = serialize(c);
  const std::string kind = env["kind"];
  std::vector<Mutation> out;
  auto mut = [&](const std::string& label, const std::function<void(Json&)>& f) {
    Json e = env;
    f(e["data"]);
    out.push_back({kind + ": " + label, e});
  };

  if (kind == "fg-purity") {
    mut("quotient exponent doubled", [](Json& d) { d["quotient_exponent"] = to_string(Integer(parse_integer(d["quotient_exponent"].get<std::string>()) * 2)); });
    mut("extra checked modulus", [](Json& d) { d["checked_moduli"].push_back("9973"); });
    if (std::get<FgPurityCertificate>(c).subgroup.ambient.free_rank() > 0)
      mut("subgroup replaced by 2e_0", [&](Json& d) {
        Json g = Json::array();
        for (std::size_t i = 0; i < std::get<FgPurityCertificate>(c).subgroup.ambient.dimension(); ++i)
          g.push_back(i == 0 ? "2" : "0");
        d["subgroup"]["generators"] = Json::array({g});
      });
  } else if (kind == "fg-non-purity") {
    mut("n set to 1", [](Json& d) { d["n"] = "1"; });
    mut("h zeroed", [](Json& d) { zero_strings(d["h"]); });
    mut("subgroup becomes everything", [&](Json& d) {
      const auto& G = std::get<FgNonPurityWitness>(c).subgroup.ambient;
      Json gens = Json::array();
      for (std::size_t i = 0; i < G.dimension(); ++i) {
        Json e = Json::array();
        for (std::size_t j = 0; j < G.dimension(); ++j) e.push_back(i == j ? "1" : "0");
        gens.push_back(e);
      }
      d["subgroup"]["generators"] = gens;
    });
  } else if (kind == "cd-purity") {
    if (std::get<CdPurityCertificate>(c).basis.rows() > 0) {
      mut("basis doubled", [](Json& d) { scale_strings(d["basis"], 2); });
      mut("basis tripled", [](Json& d) { scale_strings(d["basis"], 3); });
    }
  } else if (kind == "cd-non-purity") {
    mut("n set to 1", [](Json& d) { d["n"] = "1"; });
    mut("h zeroed", [](Json& d) { zero_strings(d["h"]); });
    mut("h multiplied by n", [](Json& d) { scale_strings(d["h"], parse_rational(d["n"].get<std::string>())); });
  } else if (kind == "solve-obstruction") {
    const auto& s = std::get<IntegerSolveCertificate>(c);
    mut("value shifted", [](Json& d) { d["obstruction"]["value"] = to_string(Integer(parse_integer(d["obstruction"]["value"].get<std::string>()) + 1)); });
    mut("b made solvable", [&](Json& d) {
      d["b"] = to_json(times_col(s.A, IntVector(s.A.cols(), Integer(1))));
    });
    mut("combination zeroed", [](Json& d) { zero_strings(d["obstruction"]["combination"]); });
  } else if (kind == "system-obstruction") {
    mut("modulus set to 1", [](Json& d) { d["obstruction"]["modulus"] = "1"; });
    mut("constants zeroed", [](Json& d) {
      for (auto& e : d["system"]["equations"]) zero_strings(e["constant"]);
    });
  } else if (kind == "non-solvability") {
    const auto& n = std::get<NonSolvabilityCertificate>(c);
    if (n.kind == CertificateKind::support_growth) {
      mut("forced value bumped", [](Json& d) {
        auto& f = d["forced"][d["forced"].size() > 1 ? 1 : 0];
        f = to_string(Integer(parse_integer(f.get<std::string>()) + 1));
      });
      mut("N increased", [](Json& d) { d["N"] = d["N"].get<std::size_t>() + 1; });
      mut("x_0 altered", [](Json& d) { bump_first(d["prefix_solution"][0]); });
    } else if (n.kind == CertificateKind::height_demand) {
      mut("digit dropped", [](Json& d) { d["digit_positions"].erase(d["digit_positions"].size() - 1); });
      mut("x altered", [](Json& d) { bump_first(d["prefix_solution"][0]); });
    } else {
      mut("modulus set to 1", [](Json& d) { d["obstruction"]["modulus"] = "1"; });
    }
  } else if (kind == "ab-type-difference") {
    mut("b replaced by a", [](Json& d) { d["b"] = d["a"]; });
    mut("k set to 0", [](Json& d) { d["k"] = "0"; });
  } else if (kind == "tf-type-witness") {
    mut("b replaced by a", [](Json& d) { d["b"] = d["a"]; });
    if (std::holds_alternative<HeightWitness>(std::get<TfTypeWitness>(c).detail)) {
      mut("heights equalized", [](Json& d) { d["detail"]["hb"] = d["detail"]["ha"]; });
      mut("prime replaced by 4", [](Json& d) { d["detail"]["p"] = "4"; });
    }
  } else if (kind == "closure-iso") {
    const auto& f = std::get<ClosureIso>(c);
    if (nonzero_strings(to_json(f.a))) mut("b zeroed", [](Json& d) { zero_strings(d["b"]); });
    if (nonzero_strings(to_json(f.b))) mut("a zeroed", [](Json& d) { zero_strings(d["a"]); });
  } else if (kind == "embedding-purity") {
    const auto& e = std::get<EmbeddingPurityCertificate>(c).embedding;
    if (e.domain.atom(0).kind == AtomKind::Z) {
      const std::size_t t = e.maps[0].targets[0].target;
      if (e.codomain.atom(t).kind == AtomKind::Z)
        mut("first map doubled", [](Json& d) { d["embedding"]["maps"][0]["targets"][0]["coefficient"] = "2"; });
      mut("first target replaced by Q", [t](Json& d) { d["embedding"]["codomain"]["atoms"][t] = Json{{"atom", "Q"}}; });
    }
  } else if (kind == "embedding-non-purity" || kind == "divisibility-failure") {
    mut("n set to 1", [](Json& d) { d["n"] = "1"; });
    mut("x zeroed", [](Json& d) { zero_strings(d["x"]); });
  } else if (kind == "divisible-image") {
    const auto& m = std::get<DivisibleImageCertificate>(c).M;
    if (m.rows() > 0) {
      mut("M zeroed", [](Json& d) { zero_strings(d["M"]); });
      std::size_t col = 0;
      while (col < m.cols() && std::all_of(m.data().begin(), m.data().end(), [&](const Rational&) { return true; })) {
        bool used = false;
        for (std::size_t i = 0; i < m.rows(); ++i) used = used || m(i, col) != 0;
        if (used) break;
        ++col;
      }
      mut("used column made type zero", [col](Json& d) {
        d["ambient"]["characteristics"][col] = Json{{"default", "zero"}};
      });
    }
  } else if (kind == "butler-witness") {
    const auto& w = std::get<ButlerWitness>(c);
    if (w.closure.z_basis && w.closure.z_basis->rows() > 0) {
      mut("basis doubled", [](Json& d) {
        scale_strings(d["z_basis"], 2);
        scale_strings(d["certificate"]["basis"], 2);
      });
      mut("certified basis doubled", [](Json& d) { scale_strings(d["certificate"]["basis"], 2); });
    }
    if (w.closure.rank() < w.ambient.rank()) {
      mut("generator outside the span", [&](Json& d) {
        // Some unit vector lies outside a proper subspace.
        for (std::size_t i = 0; i < w.ambient.rank(); ++i) {
          RatVector e(w.ambient.rank());
          e[i] = 1;
          if (!w.closure.contains(e) && !solve_left(w.closure.span, e)) {
            d["generators"].push_back(to_json(e));
            return;
          }
        }
      });
    }
  }
  return out;
}

/// deserialize + verify fails, by exception or by a false verdict.
inline bool rejected(const Json& envelope) {
  try {
    const Json round = Json::parse(envelope.dump());
    return !verify_any(deserialize(round));
  } catch (const std::exception&) {
    return true;
  }
}

/// serialize -> text -> deserialize -> verify, and a stable re-serialization.
inline bool round_trips(const Certificate& c) {
  const Json env = serialize(c, Json{{"producer", "test"}});
  const Json back = Json::parse(env.dump());
  const Certificate d = deserialize(back);
  return verify_any(d) && serialize(d, Json{{"producer", "test"}}) == env;
}

}  // namespace samples
