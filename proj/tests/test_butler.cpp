#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

namespace {

RatVector rv(std::initializer_list<Rational> xs) { return RatVector(xs); }

RatMatrix rm(std::initializer_list<std::initializer_list<long>> rows) { return to_rational(IntMatrix(rows)); }

CompletelyDecomposable qs(std::size_t n) {
  return CompletelyDecomposable(std::vector<Characteristic>(n, Characteristic::infinity()));
}

}  // namespace

TEST_CASE("purify in a completely decomposable ambient") {
  const auto C = CompletelyDecomposable::free(2);
  const ButlerWitness w = purify_in_cd({rv({2, 4})}, C);
  REQUIRE(w.closure.z_basis.has_value());
  CHECK(*w.closure.z_basis == rm({{1, 2}}));
  CHECK(verify(w));

  const ButlerWitness all = purify_in_cd({rv({1, 0}), rv({0, 1})}, C);
  CHECK(all.closure.rank() == 2);
  CHECK(purify_in_cd({}, C).closure.rank() == 0);

  // Re-purifying the closure basis changes nothing.
  std::vector<RatVector> rows{w.closure.z_basis->row_vector(0)};
  CHECK(*purify_in_cd(rows, C).closure.z_basis == *w.closure.z_basis);
}

TEST_CASE("pushout examples") {
  std::mt19937_64 rng(0);
  AmalgamationInput in{StructuredGroup({Atom::q()}), qs(2), qs(2), rm({{1, 1}}), rm({{1, 1}})};
  const PushoutReport r = amalgamation_pushout(in, rng);
  CHECK(r.H.rank() == 3);
  CHECK(r.ok());
  CHECK(verify(r.purity1));
  CHECK(verify(r.purity2));

  AmalgamationInput trivial{StructuredGroup(), CompletelyDecomposable::free(1), CompletelyDecomposable::free(2),
                            RatMatrix(0, 1), RatMatrix(0, 2)};
  const PushoutReport t = amalgamation_pushout(trivial, rng);
  CHECK(t.H.rank() == 3);
  CHECK(t.H.relations().rows() == 0);

  AmalgamationInput bad = in;
  bad.G = StructuredGroup({Atom::z()});
  CHECK_THROWS_AS(amalgamation_pushout(bad, rng), InputError);
}

TEST_CASE("pushout square commutes and quotient arithmetic is exact") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const AmalgamationInput in = random_amalgamation(rng);
    const PushoutReport r = amalgamation_pushout(in, rng);
    CHECK(r.ok());
    CHECK(r.base_agreement);
    const std::size_t n1 = in.H1.rank();
    // f1(g) and f2(g) coincide in H for every base element g.
    for (std::size_t i = 0; i < in.M1.rows(); ++i) {
      RatVector x(r.H.sum().rank()), y(r.H.sum().rank());
      for (std::size_t j = 0; j < n1; ++j) x[j] = in.M1(i, j);
      for (std::size_t j = 0; j < in.H2.rank(); ++j) y[n1 + j] = in.M2(i, j);
      CHECK(r.H.equal(x, y));
    }
    // Division results multiply back.
    if (r.H.sum().rank() == 0) continue;
    RatVector z(r.H.sum().rank());
    z[0] = 1;
    for (long n = 1; n <= 6; ++n)
      if (auto d = r.H.divide(z, n)) {
        RatVector back(d->size());
        for (std::size_t j = 0; j < d->size(); ++j) back[j] = n * (*d)[j];
        CHECK(r.H.equal(back, z));
      }
  }
}

TEST_CASE("divisible image certificate") {
  const CompletelyDecomposable H({Characteristic::infinity(), Characteristic::zero()});
  CHECK(verify(DivisibleImageCertificate{H, rm({{1, 0}})}));
  CHECK_FALSE(verify(DivisibleImageCertificate{H, rm({{1, 1}})}));
  CHECK_FALSE(verify(DivisibleImageCertificate{H, rm({{0, 0}})}));
}

TEST_CASE("instability demo") {
  const auto G = CompletelyDecomposable::free(1);
  const std::vector<Characteristic> two{
      Characteristic(CharDefault::zero, {{2, Height::infinity()}}),
      Characteristic(CharDefault::zero, {{3, Height::infinity()}})};
  const InstabilityReport r = instability_demo(G, two);
  REQUIRE(r.pairs.size() == 1);
  CHECK(r.not_equal == 1);
  const auto* h = std::get_if<HeightWitness>(&r.pairs[0].result.witness->detail);
  REQUIRE(h != nullptr);
  CHECK(h->p == 2);

  CHECK(instability_demo(G, 1, 0).pairs.empty());
  CHECK_THROWS_AS(instability_demo(G, 0, 0), InputError);

  const InstabilityReport r50 = instability_demo(G, 50, 1);
  CHECK(r50.pairs.size() == 1225);
  CHECK(r50.not_equal == 1225);
  CHECK(r50.inconclusive == 0);
  CHECK(r50.unverified == 0);
}

TEST_CASE("instability family over the zero group") {
  const InstabilityReport r = instability_demo(CompletelyDecomposable(), 12, 4);
  CHECK(r.not_equal == 66);
  CHECK(r.inconclusive == 0);
}
