#include "doctest.h"
#include "oracles.hpp"

using namespace alab;

namespace {

GroupElement el(std::initializer_list<Rational> xs) {
  GroupElement g;
  for (const auto& x : xs) g.components.emplace_back(x);
  return g;
}

LinearSystem one_equation(std::map<std::size_t, Integer> coeffs, GroupElement c, std::size_t vars) {
  LinearSystem s;
  for (std::size_t i = 0; i < vars; ++i) s.variables.push_back("x" + std::to_string(i));
  s.equations.push_back({std::move(coeffs), std::move(c)});
  return s;
}

StructuredGroup copies(const Atom& a, std::size_t w) { return StructuredGroup(std::vector<Atom>(w, a)); }

SystemStream shift(const Integer& p) {
  SystemStream s;
  s.family = StreamFamily::shift_recurrence;
  s.p = p;
  s.rule = ConstantRule::basis;
  return s;
}

}  // namespace

TEST_CASE("finite systems") {
  const StructuredGroup Q({Atom::q()}), Z({Atom::z()});
  const auto q = solve_finite(Q, one_equation({{0, 2}}, el({1}), 1));
  REQUIRE(std::holds_alternative<Assignment>(q));
  CHECK(std::get<Assignment>(q)[0] == el({Rational(1, 2)}));

  const LinearSystem zs = one_equation({{0, 2}}, el({1}), 1);
  const auto z = solve_finite(Z, zs);
  REQUIRE(std::holds_alternative<ModulusObstruction>(z));
  CHECK(check_obstruction(Z, zs, std::get<ModulusObstruction>(z)));

  const StructuredGroup Z2({Atom::z(), Atom::z()});
  LinearSystem s;
  s.variables = {"x", "y"};
  s.equations.push_back({{{0, 1}, {1, 1}}, el({1, 0})});
  s.equations.push_back({{{0, 1}, {1, -1}}, el({1, 0})});
  const auto r = solve_finite(Z2, s);
  REQUIRE(std::holds_alternative<Assignment>(r));
  CHECK(std::get<Assignment>(r)[0] == el({1, 0}));
  CHECK(std::get<Assignment>(r)[1] == el({0, 0}));
  CHECK(satisfies(Z2, s, std::get<Assignment>(r)));
}

TEST_CASE("random finite systems re-evaluate or carry valid obstructions") {
  std::mt19937_64 rng(12);
  const std::vector<Atom> menu{Atom::z(), Atom::zmod(6), Atom::q(), Atom::pruefer(2), Atom::loc(3)};
  for (int t = 0; t < 200; ++t) {
    std::vector<Atom> atoms;
    for (long k = oracle::uniform(rng, 1, 2); k > 0; --k) atoms.push_back(menu[oracle::uniform(rng, 0, 4)]);
    const StructuredGroup G(atoms);
    LinearSystem s;
    const std::size_t vars = oracle::uniform(rng, 1, 3);
    for (std::size_t i = 0; i < vars; ++i) s.variables.push_back("v" + std::to_string(i));
    for (long e = oracle::uniform(rng, 1, 3); e > 0; --e) {
      Equation q;
      for (std::size_t i = 0; i < vars; ++i)
        if (long c = oracle::uniform(rng, -3, 3)) q.coefficients[i] = c;
      GroupElement c = G.zero();
      for (std::size_t i = 0; i < G.size(); ++i) {
        Rational v = G.atom(i).kind == AtomKind::Pruefer ? Rational(oracle::uniform(rng, 0, 3), 4)
                                                          : Rational(oracle::uniform(rng, 0, 5));
        v.canonicalize();
        c.components[i] = v;
      }
      q.constant = G.normalize(c);
      s.equations.push_back(q);
    }
    const auto r = solve_finite(G, s);
    if (auto* x = std::get_if<Assignment>(&r)) CHECK(satisfies(G, s, *x));
    else CHECK(check_obstruction(G, s, std::get<ModulusObstruction>(r)));
  }
}

TEST_CASE("shift stream prefixes over free summands") {
  const StructuredGroup G = copies(Atom::z(), 8);
  const SystemStream s = shift(2);
  const auto r = prefix_solvable(G, s, 5);
  REQUIRE(std::holds_alternative<Assignment>(r));
  CHECK(satisfies(G, stream_prefix(G, s, 5), std::get<Assignment>(r)));
  // Back-substitution from x_5 = 0 also solves the prefix.
  Assignment back(6, G.zero());
  for (int n = 4; n >= 0; --n)
    back[n] = add(G, stream_constant(G, s, n), scalar_mul(G, 2, back[n + 1]));
  CHECK(satisfies(G, stream_prefix(G, s, 5), back));
  CHECK(back[3] == add(G, G.unit(3), scalar_mul(G, 2, G.unit(4))));
}

TEST_CASE("explicit streams") {
  const StructuredGroup Z({Atom::z()});
  SystemStream trivial;
  trivial.family = StreamFamily::explicit_list;
  trivial.equations.push_back({{}, Z.zero()});
  CHECK(std::holds_alternative<Assignment>(prefix_solvable(Z, trivial, 1)));

  SystemStream px = trivial;
  px.equations = {{{{0, 2}}, el({1})}};
  for (std::size_t N = 1; N <= 4; ++N) CHECK(std::holds_alternative<ModulusObstruction>(prefix_solvable(Z, px, N)));

  SystemStream bad = trivial;
  bad.equations = {{{}, el({1})}};
  const ProbeResult pr = compactness_probe(Z, bad, 5);
  CHECK(pr.verdict == ProbeVerdict::not_finitely_solvable);
  CHECK(pr.N == 1);
  REQUIRE(pr.certificate.has_value());
  CHECK(verify_certificate(*pr.certificate));
}

TEST_CASE("direct-sum proxy versus completion proxy") {
  for (std::size_t w : {3u, 6u, 8u}) {
    const StructuredGroup D = copies(Atom::loc(2), w);
    const ProbeResult d = compactness_probe(D, shift(2), w);
    CHECK(d.verdict == ProbeVerdict::non_compactness_evidence);
    REQUIRE(d.certificate.has_value());
    CHECK(d.certificate->kind == CertificateKind::support_growth);
    CHECK(verify_certificate(*d.certificate));
    CHECK(verify_certificate(*d.certificate, D, shift(2)));
    // Every prefix solution puts 2^n into coordinate n of x_0 modulo 2^N.
    for (std::size_t n = 0; n < d.certificate->forced.size(); ++n)
      CHECK(d.certificate->forced[n] == pow(Integer(2), n));

    const StructuredGroup C({Atom::completion(2, 16, w)});
    const ProbeResult c = compactness_probe(C, shift(2), w);
    CHECK(c.verdict == ProbeVerdict::full_solution);
    REQUIRE(c.assignment.has_value());
    const auto& x0 = std::get<IntVector>(c.assignment->front().components[0]);
    for (std::size_t n = 0; n < w; ++n) CHECK(x0[n] == mod(pow(Integer(2), n), pow(Integer(2), 16)));
    CHECK(satisfies(C, stream_prefix(C, shift(2), w), *c.assignment));
  }
}

TEST_CASE("tampered support-growth certificate fails") {
  const StructuredGroup D = copies(Atom::loc(2), 5);
  NonSolvabilityCertificate c = *compactness_probe(D, shift(2), 5).certificate;
  CHECK(verify_certificate(c));
  NonSolvabilityCertificate broken = c;
  broken.forced[2] += 1;
  CHECK_FALSE(verify_certificate(broken));
  broken = c;
  broken.prefix_solution[1] = D.zero();
  CHECK_FALSE(verify_certificate(broken));
}

TEST_CASE("height ladder") {
  SystemStream s;
  s.family = StreamFamily::height_ladder;
  s.p = 2;
  s.rule = ConstantRule::triangular;
  const StructuredGroup L({Atom::loc(2)});
  const ProbeResult l = compactness_probe(L, s, 6);
  CHECK(l.verdict == ProbeVerdict::non_compactness_evidence);
  REQUIRE(l.certificate.has_value());
  CHECK(l.certificate->kind == CertificateKind::height_demand);
  CHECK(verify_certificate(*l.certificate));
  CHECK(triangular_positions(11) == std::vector<unsigned long>{0, 1, 3, 6, 10});

  const StructuredGroup C({Atom::completion(2, 24, 1)});
  const ProbeResult c = compactness_probe(C, s, 5);
  CHECK(c.verdict == ProbeVerdict::full_solution);
  CHECK(satisfies(C, stream_prefix(C, s, 5), *c.assignment));
}

TEST_CASE("unsolvable prefixes stay unsolvable") {
  std::mt19937_64 rng(2);
  const StructuredGroup G({Atom::z(), Atom::zmod(4)});
  for (int t = 0; t < 40; ++t) {
    SystemStream s;
    s.family = StreamFamily::explicit_list;
    for (int e = 0; e < 4; ++e) {
      Equation q;
      q.coefficients[oracle::uniform(rng, 0, 1)] = oracle::uniform(rng, 1, 4);
      q.constant = G.normalize(el({oracle::uniform(rng, 0, 3), oracle::uniform(rng, 0, 3)}));
      s.equations.push_back(q);
    }
    bool seen = false;
    for (std::size_t N = 1; N <= 5; ++N) {
      const bool bad = std::holds_alternative<ModulusObstruction>(prefix_solvable(G, s, N));
      if (seen) CHECK(bad);
      seen = seen || bad;
    }
  }
}
