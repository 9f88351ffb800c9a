#pragma once

// Concrete permutation-closed subclasses C(k), enumeration of C(k)* (the
// members depending only on variables 1..k, deduplicated by truth table),
// and construction of the approximator set Approx(h, kappa).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "reltest/bits.hpp"
#include "reltest/boolfn.hpp"
#include "reltest/rational.hpp"
#include "reltest/reldist.hpp"

namespace reltest {

enum class SubclassName { Juntas, DecisionTrees, Conjunctions, Parities };

// Class catalog notes:
//   juntas  -- every function on k variables; contains constant-0.
//   dt      -- decision trees with at most k leaves (size = leaf count, so a
//             size-k tree reads at most k-1 variables); contains constant-0.
//   conj    -- conjunctions of at most k literals on distinct variables; the
//             empty conjunction (constant-1) is included, constant-0 is not
//             (repeated/contradictory literals are disallowed).
//   parity  -- parities of nonempty subsets of at most k variables, plus
//             constant-1; constant-0 is not a member.
struct SubclassSpec {
  SubclassName name = SubclassName::Juntas;
  int k = 1;

  bool contains_constant0() const {
    return name == SubclassName::Juntas || name == SubclassName::DecisionTrees;
  }
  std::string id() const;
  static SubclassSpec from_id(const std::string& id, int k);
};

// C(k)* as 2^k-bit truth tables, sorted and duplicate-free.
const std::vector<std::uint64_t>& core_tables(const SubclassSpec& spec);

inline std::uint64_t core_count(const SubclassSpec& spec) { return core_tables(spec).size(); }

template <class Fn>
void enumerate_core(const SubclassSpec& spec, Fn&& fn) {
  for (std::uint64_t t : core_tables(spec)) fn(t);
}

// Streams C(k) over n variables: every core table placed on every ascending
// k-subset of [n]. Permutation closure of C(k)* makes ascending placements
// cover the whole class.
template <class Fn>
void enumerate_class(const SubclassSpec& spec, int n, Fn&& fn) {
  const auto& tables = core_tables(spec);
  for_each_subset(n, spec.k, [&](const std::vector<int>& support) {
    for (std::uint64_t t : tables) {
      std::vector<std::uint64_t> words{t};
      fn(BooleanFunction::junta(n, InjectiveMap(n, support),
                                BooleanFunction::dense(spec.k, std::move(words))));
    }
  });
}

struct ApproxMember {
  std::uint64_t table = 0;  // 2^h bits
  std::uint32_t ones = 0;   // popcount of table
};

struct ApproxSet {
  int h = 0;
  Rational kappa;
  std::vector<ApproxMember> members;  // sorted by table, duplicate-free
};

// For each f in C(k)*: f' is the majority projection of f onto the first h
// variables (ties broken to 0), g its 2^h-bit restriction; g joins the set
// iff rel_dist(f, f') <= kappa. Candidates with an empty satisfier set are
// skipped (rel-dist to them is undefined). The computation lives on the
// k-cube with multiplicities, so the member set is independent of n.
ApproxSet build_approx(const SubclassSpec& spec, int h, const Rational& kappa, int n);

void dump_approx(const ApproxSet& set, std::ostream& out);

// Lifts an approximator member through sigma to an n-variable function
// (h = 0 members become constants).
BooleanFunction lift_member(std::uint64_t table, int h, const InjectiveMap& sigma);

// Exact rel-dist from f (dense-able) to C(k) over f's n variables, with an
// argmin witness. Cell decomposition per support; equivalent to brute force
// over the streamed class.
std::pair<RelDistResult, BooleanFunction> rel_dist_to_subclass(const BooleanFunction& f,
                                                               const SubclassSpec& spec);

// Lemma check: rel_dist(f, g_sigma) <= 1 implies
// rel_dist(f, C(k)) <= rel_dist(f, g_sigma) + 4*kappa.
bool simple2_check(const BooleanFunction& f, const ApproxMember& g, int h,
                   const InjectiveMap& sigma, const Rational& kappa, const SubclassSpec& spec);

}  // namespace reltest
