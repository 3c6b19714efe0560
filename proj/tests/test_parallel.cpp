#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

TEST_CASE("for_each_index visits every index once") {
  for (Exec mode : {Exec::serial, Exec::parallel}) {
    std::vector<int> hits(257);
    for_each_index(hits.size(), [&](std::size_t i) { hits[i] += 1; }, mode);
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST_CASE("exceptions propagate by lowest index") {
  auto body = [](std::size_t i) {
    if (i == 7 || i == 40) throw InputError("bad " + std::to_string(i));
  };
  for (Exec mode : {Exec::serial, Exec::parallel}) {
    try {
      for_each_index(64, body, mode);
      FAIL("expected an exception");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()) == "bad 7");
    }
  }
}

TEST_CASE("batch smith agrees with the serial kernel") {
  std::mt19937_64 rng(77);
  std::vector<IntMatrix> mats;
  for (int t = 0; t < 120; ++t)
    mats.push_back(oracle::random_matrix(rng, oracle::uniform(rng, 1, 4), oracle::uniform(rng, 1, 4), -10, 10));
  const auto s = batch_smith(mats, Exec::serial), p = batch_smith(mats, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].invariant_factors == p[i].invariant_factors);
    CHECK(s[i].D == p[i].D);
  }
}

TEST_CASE("instability verdicts do not depend on the execution mode") {
  const auto G = CompletelyDecomposable::free(1);
  const auto a = instability_demo(G, 20, 9, Exec::serial), b = instability_demo(G, 20, 9, Exec::parallel);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].result.verdict == b.pairs[i].result.verdict);
    CHECK(a.pairs[i].verified == b.pairs[i].verified);
  }
}

TEST_CASE("map_indices keeps index order") {
  const auto v = map_indices<std::size_t>(100, [](std::size_t i) { return i * i; }, Exec::parallel);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == i * i);
  CHECK(thread_count() >= 1);
}
