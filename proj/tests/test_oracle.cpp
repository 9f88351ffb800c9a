#include <doctest.h>

#include "reltest/junta_tester.hpp"
#include "reltest/oracle.hpp"
#include "stats_util.hpp"

using namespace reltest;

namespace {

BooleanFunction and_on(int n, int a, int b) {
  return BooleanFunction::junta(n, InjectiveMap(n, {a, b}), BooleanFunction::dense(2, {0b1000}));
}

// Forwards to a QueryOracle while keeping its own tally; used to cross-check
// the oracle's reported counts.
struct CountingShim {
  QueryOracle* inner;
  std::uint64_t mq = 0, samp = 0;

  int n() const { return inner->n(); }
  std::uint64_t seed() const { return inner->seed(); }
  std::uint64_t satisfying_count() const { return inner->satisfying_count(); }
  Rng& rng() { return inner->rng(); }
  bool mq_bits(std::uint64_t x) {
    ++mq;
    return inner->mq_bits(x);
  }
  std::uint64_t sample_bits() {
    ++samp;
    return inner->sample_bits();
  }
  const QueryStats& stats() const { return inner->stats(); }
};

}  // namespace

TEST_CASE("mq counts and agrees with evaluate") {
  BooleanFunction f = and_on(12, 3, 7);
  QueryOracle o(f, 42);
  o.mq_bits(0);
  o.mq_bits(1);
  o.mq_bits(2);
  CHECK(o.stats().mq_count == 3);
  CHECK(o.stats().samp_count == 0);

  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t x = rng.draw_mask(mask_n(12));
    CHECK(o.mq_bits(x) == f.evaluate_bits(x));
  }
  CHECK(o.stats().mq_count == 1003);

  // interleaved mq/sample keep independent counters
  o.sample_bits();
  o.mq_bits(7);
  o.sample_bits();
  CHECK(o.stats().mq_count == 1004);
  CHECK(o.stats().samp_count == 2);
  CHECK(o.stats().total() == 1006);
}

TEST_CASE("unique satisfier is always returned") {
  // f has the single satisfier 101 (x1=1, x2=0, x3=1)
  std::vector<std::uint64_t> w(1, 0);
  w[0] |= 1ULL << 0b101;
  QueryOracle o(BooleanFunction::dense(3, std::move(w)), 9);
  for (int i = 0; i < 200; ++i) CHECK(o.sample_bits() == 0b101);
  CHECK(o.sample_satisfying() == Assignment::from_string("101"));
}

TEST_CASE("constant-1 sampling is uniform on the full cube") {
  QueryOracle o(BooleanFunction::constant(2, true), 1234);
  std::vector<std::uint64_t> freq(4, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++freq[o.sample_bits()];
  double sigma = std::sqrt(0.25 * 0.75 * draws);
  for (std::uint64_t c : freq) CHECK(std::abs(static_cast<double>(c) - draws / 4.0) <= 3 * sigma);
}

TEST_CASE("sampling an empty function raises EmptyFunctionError") {
  QueryOracle o(BooleanFunction::constant(4, false), 7);
  CHECK(o.satisfying_count() == 0);
  CHECK_THROWS_AS(o.sample_bits(), EmptyFunctionError);
}

TEST_CASE("conditional uniformity for a lifted AND") {
  // all samples satisfy x1 = x2 = 1; the projection onto x3..x10 is uniform
  QueryOracle o(and_on(10, 0, 1), 77);
  std::vector<std::uint64_t> freq(256, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    std::uint64_t s = o.sample_bits();
    REQUIRE((s & 3) == 3);
    ++freq[s >> 2];
  }
  double stat = teststat::chi2_gof(freq, draws / 256.0);
  CHECK(stat < teststat::chi2_critical(255, 1e-3));
}

TEST_CASE("per-representation samplers are statistically indistinguishable") {
  // the same AND(x2, x5) over n=8 in all three representations
  BooleanFunction d = BooleanFunction::dense(8, [] {
    std::vector<std::uint64_t> w(4, 0);
    for (std::uint64_t x = 0; x < 256; ++x)
      if (((x >> 1) & 1) && ((x >> 4) & 1)) w[x >> 6] |= 1ULL << (x & 63);
    return w;
  }());
  BooleanFunction j = and_on(8, 1, 4);
  BooleanFunction t = BooleanFunction::decision_tree(
      8, {DtNode::internal(1, 1, 2), DtNode::leaf(0), DtNode::internal(4, 3, 4),
          DtNode::leaf(0), DtNode::leaf(1)});

  const int draws = 100000;
  auto histogram = [&](BooleanFunction f, std::uint64_t seed) {
    QueryOracle o(std::move(f), seed);
    std::vector<std::uint64_t> h(256, 0);
    for (int i = 0; i < draws; ++i) ++h[o.sample_bits()];
    return h;
  };
  std::vector<std::uint64_t> hd = histogram(d, 101);
  std::vector<std::uint64_t> hj = histogram(j, 202);
  std::vector<std::uint64_t> ht = histogram(t, 303);

  auto check_pair = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    int df = 0;
    double stat = teststat::chi2_two_sample(a, b, &df);
    CHECK(stat < teststat::chi2_critical(df, 1e-3));
  };
  check_pair(hd, hj);
  check_pair(hd, ht);
  check_pair(hj, ht);
}

TEST_CASE("dtree sampler weights leaves by depth") {
  // x3 ? 1 : (x1 ? 1 : 0): satisfiers split 4:1 between the two 1-leaves at n=3
  BooleanFunction t = BooleanFunction::decision_tree(
      3, {DtNode::internal(2, 1, 2), DtNode::internal(0, 3, 4), DtNode::leaf(1),
          DtNode::leaf(0), DtNode::leaf(1)});
  QueryOracle o(t, 4242);
  std::uint64_t deep = 0;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    std::uint64_t s = o.sample_bits();
    CHECK(t.evaluate_bits(s));
    if (!((s >> 2) & 1)) ++deep;  // the depth-2 leaf (x3=0, x1=1)
  }
  // Pr[deep leaf] = 2/6; allow 4 sigma
  double p = 2.0 / 6.0;
  double sigma = std::sqrt(p * (1 - p) * draws);
  CHECK(std::abs(static_cast<double>(deep) - p * draws) < 4 * sigma);
}

TEST_CASE("reported stats equal an independent count across a tester run") {
  Rng seeder(31);
  for (int trial = 0; trial < 5; ++trial) {
    BooleanFunction f = and_on(12, 2, 9);
    QueryOracle o(f, seeder.next());
    CountingShim shim{&o};
    JuntaTesterParams p = JuntaTesterParams::make(2, Rational(1, 4));
    TesterVerdict v = junta_test(shim, p);
    CHECK(v.stats.mq_count == shim.mq);
    CHECK(v.stats.samp_count == shim.samp);
    CHECK(o.stats().mq_count == shim.mq);
    CHECK(o.stats().samp_count == shim.samp);
  }
}
