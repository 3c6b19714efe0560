#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

namespace {

Characteristic ch(CharDefault d, std::map<Integer, Height> e = {}) { return Characteristic(d, std::move(e)); }
RatVector rv(std::initializer_list<Rational> xs) { return RatVector(xs); }

CompletelyDecomposable random_cd(std::mt19937_64& rng, std::size_t n) {
  std::vector<Characteristic> cs;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<Integer, Height> e;
    for (long p : {2, 3}) {
      const long r = oracle::uniform(rng, 0, 3);
      if (r == 1) e[p] = Height::finite(oracle::uniform(rng, 1, 2));
      if (r == 2) e[p] = Height::infinity();
    }
    cs.push_back(ch(oracle::uniform(rng, 0, 5) == 0 ? CharDefault::infinity : CharDefault::zero, e));
  }
  return CompletelyDecomposable(cs);
}

}  // namespace

TEST_CASE("membership and heights") {
  const CompletelyDecomposable C({ch(CharDefault::zero, {{2, Height::infinity()}}), Characteristic::zero()});
  CHECK(C.contains(rv({Rational(1, 4), 3})));
  CHECK_FALSE(C.contains(rv({Rational(1, 3), 0})));
  CHECK(C.p_height(rv({Rational(1, 4), 4}), 2) == Height::finite(2));
  CHECK(C.p_height(rv({1, 0}), 2) == Height::infinity());
  CHECK_THROWS_AS(C.require_member(rv({Rational(1, 3), 0}), "x"), InputError);
}

TEST_CASE("purity in a free ambient matches the fg criterion") {
  const auto C = CompletelyDecomposable::free(2);
  const auto w = is_pure(C, {rv({2, 4})});
  REQUIRE(std::holds_alternative<CdNonPurityWitness>(w));
  CHECK(verify(std::get<CdNonPurityWitness>(w)));
  const auto p = is_pure(C, {rv({1, 2})});
  REQUIRE(std::holds_alternative<CdPurityCertificate>(p));
  CHECK(verify(std::get<CdPurityCertificate>(p)));
}

TEST_CASE("no nonzero Z-span is pure along a divisible coordinate") {
  const CompletelyDecomposable C({Characteristic::infinity(), Characteristic::zero()});
  CHECK(std::holds_alternative<CdNonPurityWitness>(is_pure(C, {rv({2, 0})})));
  CHECK(std::holds_alternative<CdNonPurityWitness>(is_pure(C, {rv({1, 0})})));
  CHECK(std::holds_alternative<CdPurityCertificate>(is_pure(C, {rv({0, 1})})));
  CHECK(std::holds_alternative<CdNonPurityWitness>(is_pure(C, {rv({0, 2})})));
}

TEST_CASE("cd purity agrees with the fg computation on free ambients") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = oracle::uniform(rng, 1, 3);
    std::vector<IntVector> gi;
    std::vector<RatVector> gr;
    for (long k = oracle::uniform(rng, 1, 2); k > 0; --k) {
      gi.push_back(oracle::random_vector(rng, n, -4, 4));
      gr.push_back(oracle::to_rat(gi.back()));
    }
    const bool fg = std::holds_alternative<FgPurityCertificate>(is_pure(FgSubgroup(FgGroup(n, {}), gi)));
    const auto cd = is_pure(CompletelyDecomposable::free(n), gr);
    CHECK(std::holds_alternative<CdPurityCertificate>(cd) == fg);
    std::visit([](const auto& c) { CHECK(verify(c)); }, cd);
  }
}

TEST_CASE("every cd purity answer re-verifies") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = oracle::uniform(rng, 1, 3);
    const CompletelyDecomposable C = random_cd(rng, n);
    std::vector<RatVector> gens;
    for (long k = oracle::uniform(rng, 0, 2); k > 0; --k) gens.push_back(oracle::to_rat(oracle::random_vector(rng, n, -4, 4)));
    const auto res = is_pure(C, gens);
    std::visit([](const auto& c) { CHECK(verify(c)); }, res);
    // The closure is pure and contains the generators.
    const CdClosure cl = cd_closure(C, gens);
    for (const auto& g : gens) CHECK(cl.contains(g));
    if (cl.z_basis) {
      std::vector<RatVector> rows;
      for (std::size_t i = 0; i < cl.z_basis->rows(); ++i) rows.push_back(cl.z_basis->row_vector(i));
      CHECK(std::holds_alternative<CdPurityCertificate>(is_pure(C, rows)));
    }
  }
}

TEST_CASE("z-span helpers") {
  const RatMatrix B = z_span_basis({rv({Rational(1, 2), 0}), rv({0, Rational(1, 3)}), rv({1, 1})}, 2);
  CHECK(B.rows() == 2);
  CHECK(in_z_span(B, rv({Rational(1, 2), Rational(1, 3)})));
  CHECK_FALSE(in_z_span(B, rv({Rational(1, 4), 0})));
}
