#include <doctest.h>

#include <cmath>

#include "reltest/uniform_junta.hpp"
#include "test_util.hpp"

using namespace reltest;
using testutil::and_on;
using testutil::parity_on;
using testutil::random_dense;

TEST_CASE("parameter construction meets the declared invariants") {
  UniformJuntaParams p = UniformJuntaParams::make(2, Rational(1, 30), Rational(1, 15));
  CHECK(p.s >= 2 * p.k * p.k);
  double declared = 12.0 * (2.0 * 30 + 2.0 * std::log2(2.0)) * std::log2(15.0);
  CHECK(static_cast<double>(p.rounds()) >= std::ceil(declared) - 1);
  CHECK(p.query_budget() > 0);
  CHECK_THROWS_AS(UniformJuntaParams::make(1, Rational(2, 1), Rational(1, 15)),
                  std::invalid_argument);
}

TEST_CASE("a k-junta is never rejected") {
  Rng seeds(41);
  UniformJuntaParams p = UniformJuntaParams::make(2, Rational(1, 30), Rational(1, 15));
  BooleanFunction f = and_on(12, 3, 8);
  for (int i = 0; i < 300; ++i) {
    QueryOracle o(f, seeds.next());
    CHECK(uniform_junta_test(o, p));
  }
  // also through a block-restriction view with a scattered domain
  Rng rng(4242);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t domain = 0b011011010;  // any fixed subset of coordinates
    auto dict = [](std::uint64_t x) { return ((x >> 4) & 1ULL) != 0; };
    UniformJuntaParams p1 = UniformJuntaParams::make(1, Rational(1, 30), Rational(1, 15));
    CHECK(uniform_junta_accepts(dict, domain, p1, rng));
  }
}

TEST_CASE("constant functions are accepted at k = 0") {
  UniformJuntaParams p = UniformJuntaParams::make(0, Rational(1, 30), Rational(1, 15));
  Rng seeds(43);
  QueryOracle o(BooleanFunction::constant(10, true), seeds.next());
  CHECK(uniform_junta_test(o, p));
  QueryOracle o2(BooleanFunction::constant(10, false), seeds.next());
  CHECK(uniform_junta_test(o2, p));
}

TEST_CASE("parity of three variables is rejected as a 1-junta") {
  // eps = 1/30, delta = 1/15; parity's uniform distance to 1-juntas is 1/2
  BooleanFunction f = parity_on(6, 0b111);
  CHECK(uniform_distance_to_juntas(f, 1) == Rational(1, 2));
  UniformJuntaParams p = UniformJuntaParams::make(1, Rational(1, 30), Rational(1, 15));
  Rng seeds(44);
  int rejects = 0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    QueryOracle o(f, seeds.next());
    if (!uniform_junta_test(o, p)) ++rejects;
  }
  double target = 1.0 - 1.0 / 15;
  double sigma = std::sqrt(target * (1 - target) / runs);
  CHECK(static_cast<double>(rejects) / runs >= target - 3 * sigma);
}

TEST_CASE("query count respects the declared budget") {
  Rng seeds(45);
  UniformJuntaParams p = UniformJuntaParams::make(2, Rational(1, 30), Rational(1, 15));
  for (int i = 0; i < 20; ++i) {
    BooleanFunction f = random_dense(10, seeds);
    QueryOracle o(f, seeds.next());
    uniform_junta_test(o, p);
    CHECK(o.stats().mq_count <= static_cast<std::uint64_t>(p.query_budget()));
    CHECK(o.stats().samp_count == 0);  // the subroutine never samples
  }
}

TEST_CASE("uniform distance to juntas certification oracle") {
  // a k-junta is at distance 0
  CHECK(uniform_distance_to_juntas(and_on(8, 1, 5), 2).is_zero());
  // parity(x1,x2) against 1-juntas on n=4
  CHECK(uniform_distance_to_juntas(parity_on(4, 0b11), 1) == Rational(1, 2));
  // AND against 1-juntas on n=4: the closest 1-junta errs on a quarter of points
  CHECK(uniform_distance_to_juntas(and_on(4, 0, 1), 1) == Rational(1, 4));
}

TEST_CASE("uniform distance to the nearest literal") {
  BooleanFunction x3 = BooleanFunction::junta(5, InjectiveMap(5, {2}),
                                              BooleanFunction::dense(1, {0b10}));
  CHECK(uniform_distance_to_literal(x3).is_zero());
  CHECK(uniform_distance_to_literal(x3.complement()).is_zero());
  Rng rng(46);
  BooleanFunction noisy = testutil::with_flips(x3, 1, rng);
  CHECK(uniform_distance_to_literal(noisy) == Rational(1, 32));
}
