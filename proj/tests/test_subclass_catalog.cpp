#include <doctest.h>

#include <set>
#include <sstream>

#include "reltest/subclass_catalog.hpp"
#include "test_util.hpp"

using namespace reltest;

namespace {

// Independent shape oracle: enumerates every decision tree with at most
// max_leaves leaves over the variables of avail (no variable reused on a
// path, no canonicalization) and records its truth table.
void shape_oracle(int k, std::uint64_t avail, int max_leaves, std::set<std::uint64_t>& out,
                  const std::vector<std::uint64_t>& one_masks) {
  out.insert(0);
  out.insert(mask_n(1 << k));
  if (max_leaves < 2) return;
  for (int v = 0; v < k; ++v) {
    if (!((avail >> v) & 1ULL)) continue;
    for (int l0 = 1; l0 <= max_leaves - 1; ++l0) {
      std::set<std::uint64_t> left, right;
      shape_oracle(k, avail & ~(1ULL << v), l0, left, one_masks);
      shape_oracle(k, avail & ~(1ULL << v), max_leaves - l0, right, one_masks);
      for (std::uint64_t t0 : left)
        for (std::uint64_t t1 : right)
          out.insert((t0 & ~one_masks[static_cast<size_t>(v)]) |
                     (t1 & one_masks[static_cast<size_t>(v)]));
    }
  }
}

std::uint64_t apply_core_permutation(std::uint64_t table, int k, const Permutation& pi) {
  std::uint64_t out = 0;
  for (std::uint64_t x = 0; x < (1ULL << k); ++x) {
    std::uint64_t gx = pi.apply(x);
    if ((table >> gx) & 1ULL) out |= 1ULL << x;
  }
  return out;
}

}  // namespace

TEST_CASE("core enumeration counts for k = 2") {
  CHECK(core_count(SubclassSpec{SubclassName::Juntas, 2}) == 16);
  CHECK(core_count(SubclassSpec{SubclassName::DecisionTrees, 2}) == 6);
  CHECK(core_count(SubclassSpec{SubclassName::Conjunctions, 2}) == 9);
  // parities of nonempty subsets of {1,2} plus constant-1
  const auto& par = core_tables(SubclassSpec{SubclassName::Parities, 2});
  CHECK(par.size() == 4);
  std::set<std::uint64_t> expect = {0b0110 /*x1 xor x2*/, 0b1010 /*x1*/, 0b1100 /*x2*/,
                                    0b1111 /*constant-1*/};
  CHECK(std::set<std::uint64_t>(par.begin(), par.end()) == expect);
}

TEST_CASE("enumerations are duplicate-free and closed under permutations") {
  Rng rng(61);
  for (const char* id : {"juntas", "dt", "conj", "parity"}) {
    for (int k : {2, 3}) {
      SubclassSpec spec = SubclassSpec::from_id(id, k);
      const auto& tables = core_tables(spec);
      std::set<std::uint64_t> uniq(tables.begin(), tables.end());
      CHECK(uniq.size() == tables.size());
      // closure: any permutation of [k] maps members to members
      for (int rep = 0; rep < 6; ++rep) {
        Permutation pi = Permutation::random(k, rng);
        for (std::uint64_t t : tables) CHECK(uniq.count(apply_core_permutation(t, k, pi)) == 1);
      }
      // constant-0 membership matches the catalog flag
      CHECK((uniq.count(0) == 1) == spec.contains_constant0());
    }
  }
}

TEST_CASE("decision-tree tables match the independent shape oracle") {
  for (int k : {2, 3}) {
    std::vector<std::uint64_t> one_masks(static_cast<size_t>(k), 0);
    for (int v = 0; v < k; ++v)
      for (std::uint64_t x = 0; x < (1ULL << k); ++x)
        if ((x >> v) & 1ULL) one_masks[static_cast<size_t>(v)] |= 1ULL << x;
    std::set<std::uint64_t> oracle;
    shape_oracle(k, mask_n(k), k, oracle, one_masks);
    const auto& tables = core_tables(SubclassSpec{SubclassName::DecisionTrees, k});
    CHECK(std::set<std::uint64_t>(tables.begin(), tables.end()) == oracle);
  }
}

TEST_CASE("build_approx follows the majority construction") {
  SubclassSpec juntas2{SubclassName::Juntas, 2};

  // f depending only on the first h variables joins with rel-dist 0
  ApproxSet a1 = build_approx(juntas2, 1, Rational(0, 1), 6);
  bool has_x1 = false;
  for (const ApproxMember& m : a1.members) has_x1 |= m.table == 0b10;
  CHECK(has_x1);

  // AND(x1,x2) with h = 1 and ties to 0 projects to constant-0 at distance 1:
  // excluded for any kappa <= 1/2, so no member can be the all-zero table
  ApproxSet a2 = build_approx(juntas2, 1, Rational(1, 2), 6);
  for (const ApproxMember& m : a2.members) {
    CHECK(m.table != 0);
    CHECK(m.ones == static_cast<std::uint32_t>(popcount64(m.table)));
  }

  // member bound over a small grid
  for (const char* id : {"juntas", "dt", "conj", "parity"}) {
    for (int k : {2, 3}) {
      SubclassSpec spec = SubclassSpec::from_id(id, k);
      for (int h = 0; h <= k; ++h) {
        for (Rational kappa : {Rational(0, 1), Rational(1, 100), Rational(1, 2)}) {
          ApproxSet set = build_approx(spec, h, kappa, 10);
          CHECK(set.members.size() <= core_count(spec));
        }
      }
    }
  }
}

TEST_CASE("approx member sets are independent of n") {
  for (const char* id : {"dt", "parity"}) {
    SubclassSpec spec = SubclassSpec::from_id(id, 3);
    for (int h = 0; h <= 3; ++h) {
      ApproxSet a10 = build_approx(spec, h, Rational(1, 20), 10);
      ApproxSet a14 = build_approx(spec, h, Rational(1, 20), 14);
      REQUIRE(a10.members.size() == a14.members.size());
      for (size_t i = 0; i < a10.members.size(); ++i) {
        CHECK(a10.members[i].table == a14.members[i].table);
        CHECK(a10.members[i].ones == a14.members[i].ones);
      }
    }
  }
}

TEST_CASE("approx dump format") {
  ApproxSet set = build_approx(SubclassSpec{SubclassName::DecisionTrees, 2}, 2, Rational(1, 20), 8);
  std::ostringstream out;
  dump_approx(set, out);
  std::istringstream in(out.str());
  std::string hex;
  int ones;
  size_t lines = 0;
  while (in >> hex >> ones) {
    std::vector<std::uint64_t> words = hex_to_table(hex, set.h);
    CHECK(popcount64(words[0]) == ones);
    ++lines;
  }
  CHECK(lines == set.members.size());
}

TEST_CASE("simple2 bound holds on random lifted pairs") {
  Rng rng(62);
  SubclassSpec juntas2{SubclassName::Juntas, 2};
  Rational kappa(1, 20);
  ApproxSet set = build_approx(juntas2, 2, kappa, 8);
  REQUIRE(!set.members.empty());

  // f equal to a lifted member: 0 <= 0 + 4 kappa
  {
    const ApproxMember& g = set.members[set.members.size() / 2];
    InjectiveMap sigma(8, {2, 5});
    BooleanFunction f = lift_member(g.table, 2, sigma);
    CHECK(simple2_check(f, g, 2, sigma, kappa, juntas2));
  }

  // random in-precondition triples (f, g, sigma)
  int checked = 0;
  while (checked < 200) {
    const ApproxMember& g = set.members[rng.below(set.members.size())];
    std::vector<int> support;
    std::uint64_t m = 0;
    while (popcount64(m) < 2) m |= 1ULL << rng.below(8);
    for (int i = 0; i < 8; ++i)
      if ((m >> i) & 1ULL) support.push_back(i);
    InjectiveMap sigma(8, support);
    BooleanFunction base = lift_member(g.table, 2, sigma);
    BooleanFunction f = testutil::with_flips(base, static_cast<int>(rng.below(10)), rng);
    if (f.count_satisfying() == 0) continue;
    if (rel_dist(f, base).value > Rational(1, 1)) continue;
    CHECK(simple2_check(f, g, 2, sigma, kappa, juntas2));
    ++checked;
  }

  // kappa = 0 reduction: rel_dist(f, C(k)) <= rel_dist(f, g_sigma) exactly
  ApproxSet set0 = build_approx(juntas2, 2, Rational(0, 1), 8);
  REQUIRE(!set0.members.empty());
  int reduced = 0;
  while (reduced < 20) {
    const ApproxMember& g = set0.members[rng.below(set0.members.size())];
    InjectiveMap sigma(8, {1, 6});
    BooleanFunction base = lift_member(g.table, 2, sigma);
    BooleanFunction f = testutil::with_flips(base, 3, rng);
    if (f.count_satisfying() == 0) continue;
    if (rel_dist(f, base).value > Rational(1, 1)) continue;
    CHECK(rel_dist_to_subclass(f, juntas2).first.value <= rel_dist(f, base).value);
    ++reduced;
  }
}
