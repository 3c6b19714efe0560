#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  IntMatrix U = IntMatrix::identity(n);
  for (int s = 0; s < 6 && n > 1; ++s) {
    const auto i = static_cast<std::size_t>(oracle::uniform(rng, 0, n - 1));
    auto j = static_cast<std::size_t>(oracle::uniform(rng, 0, n - 2));
    if (j >= i) ++j;
    const long c = oracle::uniform(rng, -2, 2);
    for (std::size_t k = 0; k < n; ++k) U(i, k) += c * U(j, k);
  }
  return U;
}

}  // namespace

TEST_CASE("canonical forms") {
  const FgGroup G = FgGroup::from_relations(IntMatrix{{2, 0}, {0, 3}});
  CHECK(G.free_rank() == 0);
  CHECK(G.torsion() == iv({6}));
  CHECK(G.torsion_order() == 6);

  const FgGroup F = FgGroup::from_relations(IntMatrix(0, 3));
  CHECK(F.free_rank() == 3);
  CHECK(F.torsion().empty());

  CHECK(FgGroup::from_relations(IntMatrix{{1}}).is_trivial());
  CHECK_THROWS_AS(FgGroup(1, iv({4, 6})), InputError);
  CHECK(FgGroup(0, iv({2, 4})) == FgGroup::from_relations(IntMatrix{{4, 0}, {0, 2}}));
}

TEST_CASE("canonicalization is invariant under unimodular change") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = oracle::uniform(rng, 1, 3), c = oracle::uniform(rng, 1, 3);
    const IntMatrix A = oracle::random_matrix(rng, r, c, -6, 6);
    const IntMatrix P = random_unimodular(rng, r), Q = random_unimodular(rng, c);
    CHECK(FgGroup::from_relations(A) == FgGroup::from_relations(P * A * Q));
  }
}

TEST_CASE("element orders") {
  const FgGroup Z4(0, iv({4}));
  CHECK(*element_order(Z4, iv({0})) == 1);
  CHECK(*element_order(Z4, iv({2})) == 2);
  const FgGroup G(1, iv({6}));
  CHECK(*element_order(G, iv({0, 4})) == 3);
  CHECK_FALSE(element_order(G, iv({1, 0})).has_value());
  // Brute-force agreement on Z/6.
  for (long x = 0; x < 6; ++x) {
    long n = 1;
    while ((n * x) % 6 != 0) ++n;
    CHECK(*element_order(FgGroup(0, iv({6})), iv({x})) == n);
  }
}

TEST_CASE("ranks and dim mod p") {
  const Ranks r2 = ranks(FgGroup(2, {}));
  CHECK(r2.rk0 == 2);
  CHECK(r2.rkp.empty());
  CHECK(ranks(FgGroup(0, iv({4, 8}))).rkp.at(2) == 2);
  CHECK(ranks(FgGroup()).rk0 == 0);

  CHECK(dim_mod_p(FgGroup(3, {}), 5) == 3);
  CHECK(dim_mod_p(FgGroup(0, iv({6})), 2) == 1);
  CHECK(dim_mod_p(FgGroup(0, iv({6})), 5) == 0);
  CHECK(dim_mod_p(FgGroup(), 2) == 0);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    const FgGroup A = oracle::random_fg(rng, 2, 60), B = oracle::random_fg(rng, 2, 60);
    for (long p : {2, 3, 5}) CHECK(dim_mod_p(direct_sum(A, B), p) == dim_mod_p(A, p) + dim_mod_p(B, p));
  }
}

TEST_CASE("purity examples") {
  const FgGroup Z2(2, {});
  const auto w = is_pure(FgSubgroup(Z2, {iv({2, 0})}));
  REQUIRE(std::holds_alternative<FgNonPurityWitness>(w));
  CHECK(std::get<FgNonPurityWitness>(w).n == 2);
  CHECK(std::get<FgNonPurityWitness>(w).h == iv({2, 0}));
  CHECK(verify(std::get<FgNonPurityWitness>(w)));

  const auto p = is_pure(FgSubgroup(Z2, {iv({1, 0})}));
  REQUIRE(std::holds_alternative<FgPurityCertificate>(p));
  CHECK(verify(std::get<FgPurityCertificate>(p)));
  CHECK(std::holds_alternative<FgPurityCertificate>(is_pure(FgSubgroup(Z2, {iv({1, 0}), iv({0, 1})}))));
}

TEST_CASE("purity agrees with brute force") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 120; ++t) {
    const FgGroup G = oracle::random_fg(rng, 2, 36);
    if (G.dimension() == 0) continue;
    std::vector<IntVector> gens;
    for (long k = oracle::uniform(rng, 0, 2); k > 0; --k) gens.push_back(oracle::random_element(rng, G, -3, 3));
    const FgSubgroup H(G, gens);
    const auto res = is_pure(H);
    const Integer bound = 10 * oracle::quotient_torsion_exponent(G, gens);
    const bool brute = oracle::brute_pure(G, gens, bound);
    CHECK(std::holds_alternative<FgPurityCertificate>(res) == brute);
    std::visit([](const auto& c) { CHECK(verify(c)); }, res);
  }
}

TEST_CASE("pure closure") {
  const FgGroup Z2(2, {});
  const FgSubgroup c = pure_closure({iv({2, 4})}, Z2);
  CHECK(c.lift_basis() == IntMatrix{{1, 2}});
  CHECK(pure_closure({}, Z2).lift_basis().rows() == 0);
  CHECK(pure_closure({iv({1, 0}), iv({0, 1})}, Z2).lift_basis() == IntMatrix::identity(2));
  CHECK_THROWS_AS(pure_closure({iv({2})}, FgGroup(0, iv({4}))), InputError);

  ClosureTrace trace;
  pure_closure({iv({6, 0}), iv({0, 4})}, Z2, &trace);
  CHECK(trace.stages.size() >= 2);
}

TEST_CASE("pure closure is the rational span closure") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = oracle::uniform(rng, 1, 5);
    const FgGroup G(n, {});
    std::vector<IntVector> A;
    for (long k = oracle::uniform(rng, 0, 3); k > 0; --k) {
      IntVector v = oracle::random_vector(rng, n, -4, 4);
      for (auto& x : v) x *= oracle::uniform(rng, 1, 4);
      A.push_back(v);
    }
    const FgSubgroup c = pure_closure(A, G);
    CHECK(oracle::is_rational_span_closure(A, c.lift_basis()));
    for (const auto& a : A) CHECK(c.contains(a));
    CHECK(pure_closure(oracle::rows_of(c.lift_basis()), G).same_as(c));
    std::vector<IntVector> bigger = A;
    bigger.push_back(oracle::random_vector(rng, n, -3, 3));
    CHECK(c.contained_in(pure_closure(bigger, G)));
  }
}

TEST_CASE("divisible_in and quotient") {
  const FgGroup G(1, iv({6}));
  CHECK(divisible_in(G, iv({4, 3}), 1));
  CHECK(divisible_in(G, iv({6, 2}), 2));
  CHECK_FALSE(divisible_in(G, iv({6, 1}), 2));
  CHECK(quotient(FgSubgroup(FgGroup(2, {}), {iv({2, 0})})) == FgGroup(1, iv({2})));
}
