#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

namespace {

GroupElement el(std::initializer_list<Rational> xs) {
  GroupElement g;
  for (const auto& x : xs) g.components.emplace_back(x);
  return g;
}

Atom random_atom(std::mt19937_64& rng) {
  switch (oracle::uniform(rng, 0, 4)) {
    case 0: return Atom::z();
    case 1: return Atom::zmod(oracle::uniform(rng, 2, 12));
    case 2: return Atom::q();
    case 3: return Atom::pruefer(oracle::uniform(rng, 0, 1) ? 2 : 3);
    default: return Atom::loc(oracle::uniform(rng, 0, 1) ? 2 : 5);
  }
}

GroupElement random_el(std::mt19937_64& rng, const StructuredGroup& G) {
  GroupElement x = G.zero();
  for (std::size_t i = 0; i < G.size(); ++i) {
    const Atom& a = G.atom(i);
    Rational v;
    switch (a.kind) {
      case AtomKind::Z: v = oracle::uniform(rng, -9, 9); break;
      case AtomKind::Zmod: v = oracle::uniform(rng, 0, a.n.get_si() - 1); break;
      case AtomKind::Q: v = Rational(oracle::uniform(rng, -9, 9), oracle::uniform(rng, 1, 9)); break;
      case AtomKind::Pruefer: v = Rational(oracle::uniform(rng, 0, 8), a.p * a.p); break;
      case AtomKind::Loc: v = Rational(oracle::uniform(rng, -9, 9), a.p == 2 ? 3 : 7); break;
      default: break;
    }
    v.canonicalize();
    if (a.kind != AtomKind::Completion) x.components[i] = v;
  }
  return G.normalize(x);
}

}  // namespace

TEST_CASE("division examples") {
  CHECK_FALSE(divide(StructuredGroup({Atom::z()}), el({3}), 2).has_value());
  CHECK(*divide(StructuredGroup({Atom::q()}), el({1}), 7) == el({Rational(1, 7)}));
  CHECK_FALSE(divide(StructuredGroup({Atom::loc(2)}), el({1}), 6).has_value());
  CHECK(divide(StructuredGroup({Atom::loc(2)}), el({1}), 3).has_value());
}

TEST_CASE("divide returns exact divisors") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 300; ++t) {
    std::vector<Atom> atoms;
    for (long k = oracle::uniform(rng, 1, 3); k > 0; --k) atoms.push_back(random_atom(rng));
    const StructuredGroup G(atoms);
    const GroupElement y = random_el(rng, G);
    for (long n = 1; n <= 12; ++n)
      if (auto x = divide(G, y, n)) CHECK(scalar_mul(G, n, *x) == y);
  }
}

TEST_CASE("divisibility decisions") {
  CHECK(is_divisible_group(StructuredGroup({Atom::q(), Atom::pruefer(2)}), 50).divisible);
  const auto z = is_divisible_group(StructuredGroup({Atom::z()}), 50);
  CHECK_FALSE(z.divisible);
  CHECK(*z.witness == el({1}));
  CHECK(z.witness_n == 2);
  const auto l5 = is_divisible_group(StructuredGroup({Atom::loc(5)}), 50);
  CHECK_FALSE(l5.divisible);
  CHECK(l5.witness_n == 5);
}

TEST_CASE("canonical divisible form") {
  const StructuredGroup G({Atom::q(), Atom::q(), Atom::pruefer(2), Atom::pruefer(2), Atom::pruefer(2)});
  CHECK(canonical_divisible_form(G).rk0 == 2);
  CHECK(canonical_divisible_form(G).rkp.at(2) == 3);
  CHECK(canonical_divisible_form(StructuredGroup({Atom::q()})).rk0 == 1);
  const auto a = canonical_divisible_form(StructuredGroup({Atom::pruefer(2), Atom::q(), Atom::pruefer(2)}));
  CHECK(a.rk0 == 1);
  CHECK(a.rkp.at(2) == 2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<Atom> atoms;
    for (long k = oracle::uniform(rng, 1, 6); k > 0; --k)
      atoms.push_back(oracle::uniform(rng, 0, 1) ? Atom::q() : Atom::pruefer(oracle::uniform(rng, 0, 1) ? 2 : 3));
    std::vector<Atom> shuffled = atoms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(canonical_divisible_form(StructuredGroup(atoms)) == canonical_divisible_form(StructuredGroup(shuffled)));
  }
}

TEST_CASE("compact invariants") {
  const auto c = compact_invariants(StructuredGroup({Atom::q(), Atom::loc(2), Atom::loc(2)}));
  CHECK(c.delta == 1);
  CHECK(c.beta.at(2) == 2);
  // Coset count of G / 2G at small scale: Q contributes nothing, each Loc(2) a Z/2.
  CHECK(dim_mod_p(StructuredGroup({Atom::q(), Atom::loc(2), Atom::loc(2)}), 2) == 2);
  const auto q3 = compact_invariants(StructuredGroup({Atom::q(), Atom::q(), Atom::q()}));
  CHECK(q3.delta == 3);
  CHECK(q3.beta.empty());
  CHECK(compact_invariants(StructuredGroup({Atom::completion(3, 4, 5)})).beta.at(3) == 5);

  const StructuredGroup A({Atom::q(), Atom::loc(3)}), B({Atom::loc(3), Atom::completion(2, 4, 2)});
  const auto ca = compact_invariants(A), cb = compact_invariants(B), cs = compact_invariants(direct_sum(A, B));
  CHECK(cs.delta == ca.delta + cb.delta);
  CHECK(cs.beta.at(3) == ca.beta.at(3) + cb.beta.at(3));
  CHECK(cs.beta.at(2) == cb.beta.at(2));
}

TEST_CASE("pure embedding examples") {
  const StructuredGroup Z({Atom::z()});
  const StructuredGroup ZQ({Atom::z(), Atom::q()});
  const auto s = is_pure_embedding(summand_inclusion(Z, ZQ, 0), 12);
  REQUIRE(std::holds_alternative<EmbeddingPurityCertificate>(s));
  CHECK(verify(std::get<EmbeddingPurityCertificate>(s)));

  const auto q = is_pure_embedding(summand_inclusion(Z, StructuredGroup({Atom::q()}), 0), 12);
  REQUIRE(std::holds_alternative<EmbeddingNonPurityWitness>(q));
  CHECK(std::get<EmbeddingNonPurityWitness>(q).n == 2);
  CHECK(verify(std::get<EmbeddingNonPurityWitness>(q)));

  const auto l = is_pure_embedding(summand_inclusion(Z, StructuredGroup({Atom::loc(2)}), 0), 12);
  REQUIRE(std::holds_alternative<EmbeddingNonPurityWitness>(l));
  CHECK(std::get<EmbeddingNonPurityWitness>(l).n == 3);
  CHECK(verify(std::get<EmbeddingNonPurityWitness>(l)));
}

TEST_CASE("divisible hulls") {
  const Hull z = divisible_hull(FgGroup(1, {}));
  CHECK(z.group == StructuredGroup({Atom::q()}));
  CHECK(z.embedding.apply(el({1})) == el({1}));

  const Hull z4 = divisible_hull(FgGroup(0, IntVector{4}));
  CHECK(z4.group == StructuredGroup({Atom::pruefer(2)}));
  CHECK(z4.embedding.apply(el({1})) == el({Rational(1, 4)}));

  const Hull h = divisible_hull(FgGroup(1, IntVector{3}));
  CHECK(h.group == StructuredGroup({Atom::q(), Atom::pruefer(3)}));
  CHECK(h.embedding.injective());
  for (const auto& g : h.embedding.domain.units()) {
    const GroupElement y = h.embedding.apply(g);
    for (long n = 1; n <= 50; ++n) {
      const auto x = divide(h.group, y, n);
      REQUIRE(x.has_value());
      CHECK(scalar_mul(h.group, n, *x) == y);
    }
  }
}

TEST_CASE("embedding validation rejects shared targets") {
  const StructuredGroup ZZ({Atom::z(), Atom::z()});
  Embedding e{ZZ, StructuredGroup({Atom::q()}), {{0, {{0, 0, 1}}}, {1, {{0, 0, 1}}}}};
  CHECK_THROWS_AS(e.validate(), InputError);
}

TEST_CASE("normalization") {
  const StructuredGroup G({Atom::zmod(4), Atom::pruefer(3)});
  CHECK(G.normalize(el({5, Rational(4, 3)})) == el({1, Rational(1, 3)}));
  CHECK_THROWS_AS(G.normalize(el({Rational(1, 2), 0})), InputError);
  CHECK_THROWS_AS(G.normalize(el({0, Rational(1, 2)})), InputError);
}
