#pragma once

// The junta-subclass tester (Phases 1-4) with its subroutines FindVarValue
// and MapBack. Phases are reported positionally as A-D in the verdict.
//
// Phase 1 partitions [n] into r = 20k^2 blocks and hunts relevant blocks
// under a T2 consecutive-miss budget. Phase 2 checks each restriction f^l
// against a literal. Phase 3 trims Approx(h, kappa) by T1 sampled satisfying
// assignments mapped through FindVarValue, then keeps the survivor with the
// fewest satisfying assignments (ties: least table). Phase 4 draws z from
// the survivor's satisfiers, maps it back to a point u and rejects on
// f(u) = 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "reltest/subclass_catalog.hpp"
#include "reltest/tester_common.hpp"

namespace reltest {

// Rounds for FindVarValue at confidence delta: ceil(c_fv * log2(1/delta)).
inline int fv_rounds_for(const Rational& delta, double c_fv) {
  double inv = 1.0 / delta.to_double();
  return std::max(1, static_cast<int>(std::ceil(c_fv * std::log2(inv))));
}

// Exact error bound for FindVarValue on a (1/30)-close-to-literal input:
// each round increments the correct counter with probability >= 14/15, so
// the error is at most the lower binomial tail below R/2.
inline long double fv_error_tail(int rounds) {
  long double p = 14.0L / 15;
  long double q = 1 - p;
  long double tail = 0;
  for (int i = 0; i <= rounds / 2; ++i) {
    long double term = 1;
    for (int j = 0; j < i; ++j) term *= (long double)(rounds - j) / (j + 1);
    tail += term * powl(p, i) * powl(q, rounds - i);
  }
  return tail;
}

// Partitions the coordinates of `domain_mask` by w's bit values into Y_0 and
// Y_1 and runs `rounds` paired flip tests; returns 0 iff the Y_0 counter
// wins strictly. If psi is an exact literal on variable i, the result is w_i,
// always. 2 queries per round.
template <class F>
int find_var_value(F&& psi, std::uint64_t domain_mask, std::uint64_t w, int rounds, Rng& rng) {
  std::uint64_t y0 = domain_mask & ~w;
  long g0 = 0, g1 = 0;
  for (int j = 0; j < rounds; ++j) {
    std::uint64_t b = rng.draw_mask(domain_mask);
    if (psi(b) != psi(b ^ y0))
      ++g0;
    else
      ++g1;
  }
  return g0 > g1 ? 0 : 1;
}

// MapBack: flips whole blocks of y so that the literal coordinates spell z.
// blocks must be ordered by block id (z bit i pairs with blocks[i]). With
// exact-literal restrictions the output equals y_{sigma,z}, always.
template <class Oracle>
std::uint64_t map_back(Oracle& o, const std::vector<RelevantBlock>& blocks, std::uint64_t y,
                       std::uint64_t z, int fv_rounds) {
  for (size_t i = 0; i < blocks.size(); ++i) {
    BlockRestriction<Oracle> fl{&o, blocks[i].mask, blocks[i].witness};
    int b = find_var_value(fl, blocks[i].mask, y, fv_rounds, o.rng());
    if (b != static_cast<int>((z >> i) & 1ULL)) y ^= blocks[i].mask;
  }
  return y;
}

struct SubclassTesterParams {
  SubclassSpec spec;
  Rational eps;
  int k = 1;
  int r = 20;           // 20k^2
  long long T1 = 1;     // Phase-3 trim rounds; kappa = 1/(20*T1)
  long long T2 = 1;     // Phase-1 consecutive-miss budget
  Rational kappa;
  Rational delta_fv;    // 1/(20k)
  int fv_rounds = 1;
  long long phase4_rounds = 1;  // ceil(20/eps)
  double c1 = 10.0, c_fv = 2.0;
  std::uint64_t cstar = 1;
  UniformJuntaParams uj;

  // Verifies the survivor bounds the analysis needs:
  //   (1 - eps/500)^T1            <= 1/(20|C(k)*|)      (yes case)
  //   (1 - (19/20)(eps/500))^T1   <= 1/(20|C(k)*|)      (no case)
  // T1 is raised above its c1-formula value when required. T2/T1 equals
  // ceil(100*ln(20k+1)) and kappa = 1/(20*T1), both exact.
  static SubclassTesterParams make(const SubclassSpec& spec, Rational eps, double c1 = 10.0,
                                   double c_fv = 2.0, double c_uj = 12.0) {
    if (!(eps > Rational(0, 1)) || !(eps < Rational(1, 2)))
      throw std::invalid_argument("SubclassTesterParams: eps must be in (0, 1/2)");
    SubclassTesterParams p;
    p.spec = spec;
    p.eps = eps;
    p.k = spec.k;
    p.r = 20 * spec.k * spec.k;
    p.c1 = c1;
    p.c_fv = c_fv;
    p.cstar = core_count(spec);
    long double e = static_cast<long double>(eps.to_double());
    long double log_cstar = std::log2(static_cast<long double>(std::max<std::uint64_t>(2, p.cstar)));

    long long t_formula = llceil(c1 * log_cstar / e);
    long double kill = (19.0L / 20) * (e / 500);
    long long t_floor = llceil(std::log(20.0L * p.cstar) / -std::log1p(-kill));
    p.T1 = std::max({t_formula, t_floor, 1LL});
    while (powl(1.0L - kill, static_cast<long double>(p.T1)) > 1.0L / (20.0L * p.cstar)) ++p.T1;
    if (powl(1.0L - e / 500, static_cast<long double>(p.T1)) > 1.0L / (20.0L * p.cstar))
      throw std::logic_error("SubclassTesterParams: yes-case survivor bound violated");

    p.kappa = Rational(1, 1) / Rational(20 * p.T1, 1);
    p.T2 = llceil(100.0L * std::log(20.0L * spec.k + 1)) * p.T1;
    p.delta_fv = Rational(1, 20 * spec.k);
    p.fv_rounds = fv_rounds_for(p.delta_fv, c_fv);
    if (fv_error_tail(p.fv_rounds) > static_cast<long double>(p.delta_fv.to_double()))
      throw std::logic_error("SubclassTesterParams: FindVarValue confidence bound violated");
    p.phase4_rounds = llceil(20.0L / e);
    p.uj = UniformJuntaParams::make(1, Rational(1, 30), Rational(1, 15), c_uj);
    return p;
  }

  long long query_budget() const {
    long long phase1 = 2 * (static_cast<long long>(k) + 2) * T2 +
                       static_cast<long long>(k + 1) *
                           (ceil_log2(static_cast<std::uint64_t>(r)) + 1);
    long long phase2 = static_cast<long long>(k) * (uj.query_budget() + 2);
    long long fv_cost = 2LL * fv_rounds;
    long long phase3 = T1 * (1 + static_cast<long long>(k) * fv_cost);
    long long phase4 = phase4_rounds * (static_cast<long long>(k) * fv_cost + 1);
    return phase1 + phase2 + phase3 + phase4;
  }

 private:
  static long long llceil(long double v) { return static_cast<long long>(std::ceil(v)); }
};

// Inspection hooks for tests and experiments; filled when requested.
struct SubclassTrace {
  BlockPartition partition;
  std::vector<RelevantBlock> blocks;  // sorted by block id
  int h = 0;
  ApproxSet approx;
  std::vector<ApproxMember> survivors;
  std::optional<ApproxMember> chosen;
};

struct SubclassTestOptions {
  const BlockPartition* partition = nullptr;
  SubclassTrace* trace = nullptr;
};

template <class Oracle>
TesterVerdict subclass_test(Oracle& o, const SubclassTesterParams& p,
                            const SubclassTestOptions& opts = {}) {
  auto verdict = [&o](Outcome out, Phase ph, const char* why) {
    TesterVerdict v;
    v.outcome = out;
    v.phase = ph;
    v.reason = why;
    v.stats = o.stats();
    v.seed = o.seed();
    return v;
  };

  // Constant-0 short-circuit: accept iff constant-0 belongs to the class.
  if (o.satisfying_count() == 0)
    return verdict(p.spec.contains_constant0() ? Outcome::Accept : Outcome::Reject,
                   Phase::Preflight, reason::kConstantZero);

  // Phase 1: partition and find relevant blocks.
  BlockPartition local;
  const BlockPartition* P = opts.partition;
  if (!P) {
    local = random_partition(o.n(), p.r, o.rng());
    P = &local;
  } else if (P->n != o.n()) {
    throw std::invalid_argument("subclass_test: fixed partition dimension mismatch");
  }
  HuntResult hunt = hunt_relevant_blocks(o, *P, p.T2, p.k);
  std::sort(hunt.blocks.begin(), hunt.blocks.end(),
            [](const RelevantBlock& a, const RelevantBlock& b) { return a.id < b.id; });
  if (opts.trace) {
    opts.trace->partition = *P;
    opts.trace->blocks = hunt.blocks;
    opts.trace->h = static_cast<int>(hunt.blocks.size());
  }
  if (hunt.too_many) return verdict(Outcome::Reject, Phase::A, reason::kTooManyBlocks);

  // Phase 2: test the relevant sets.
  if (const char* why = literal_phase(o, hunt.blocks, p.uj))
    return verdict(Outcome::Reject, Phase::B, why);

  // Phase 3: trim Approx(h, kappa).
  int h = static_cast<int>(hunt.blocks.size());
  ApproxSet approx = build_approx(p.spec, h, p.kappa, o.n());
  if (opts.trace) opts.trace->approx = approx;
  std::vector<bool> alive(approx.members.size(), true);
  for (long long t = 0; t < p.T1; ++t) {
    std::uint64_t u = o.sample_bits();
    std::uint64_t v = 0;
    for (int i = 0; i < h; ++i) {
      BlockRestriction<Oracle> fl{&o, hunt.blocks[static_cast<size_t>(i)].mask,
                                  hunt.blocks[static_cast<size_t>(i)].witness};
      v |= static_cast<std::uint64_t>(
               find_var_value(fl, hunt.blocks[static_cast<size_t>(i)].mask, u, p.fv_rounds, o.rng()))
           << i;
    }
    for (size_t m = 0; m < approx.members.size(); ++m)
      if (alive[m] && !((approx.members[m].table >> v) & 1ULL)) alive[m] = false;
  }
  std::optional<ApproxMember> chosen;
  for (size_t m = 0; m < approx.members.size(); ++m) {
    if (!alive[m]) continue;
    if (opts.trace) opts.trace->survivors.push_back(approx.members[m]);
    const ApproxMember& cand = approx.members[m];
    // Smallest satisfier count; ties broken by least table (members are
    // table-sorted, so the first minimum wins).
    if (!chosen || cand.ones < chosen->ones) chosen = cand;
  }
  if (opts.trace) opts.trace->chosen = chosen;
  if (!chosen) return verdict(Outcome::Reject, Phase::C, reason::kEmptyApprox);

  // Phase 4: verify the chosen approximator.
  std::vector<std::uint64_t> zs;
  for (std::uint64_t z = 0; z < (1ULL << h); ++z)
    if ((chosen->table >> z) & 1ULL) zs.push_back(z);
  if (zs.empty()) throw std::logic_error("subclass_test: survivor with empty satisfier set");
  std::uint64_t full = mask_n(o.n());
  for (long long t = 0; t < p.phase4_rounds; ++t) {
    std::uint64_t y = o.rng().draw_mask(full);
    std::uint64_t z = zs[o.rng().below(zs.size())];
    std::uint64_t u = map_back(o, hunt.blocks, y, z, p.fv_rounds);
    if (!o.mq_bits(u)) return verdict(Outcome::Reject, Phase::D, reason::kFinalDisagreement);
  }
  return verdict(Outcome::Accept, Phase::D, reason::kAccept);
}

// Certification check: with f a junta whose relevant variables inside X are
// exactly the image of sigma (one per found block), builds G from the
// majority rule (ties to 0) and verifies that rel_dist(f, G_sigma) > kappa
// forces Pr[f(u_X o w) = 0] > kappa/4. Exact rationals throughout.
inline bool apple_check(const BooleanFunction& f, std::uint64_t x_mask,
                        const InjectiveMap& sigma, const Rational& kappa) {
  if (f.n() > 12) throw std::invalid_argument("apple_check: n > 12");
  std::uint64_t full = mask_n(f.n());
  x_mask &= full;
  std::uint64_t s_mask = sigma.image_mask();
  if (s_mask & ~x_mask) throw PreconditionError("apple_check: S not contained in X");

  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t relevant = 0;
  std::uint64_t total = 1ULL << f.n();
  for (int i = 0; i < f.n(); ++i) {
    std::uint64_t bit = 1ULL << i;
    for (std::uint64_t x = 0; x < total; ++x) {
      bool a = (fw[x >> 6] >> (x & 63)) & 1ULL;
      bool b = (fw[(x ^ bit) >> 6] >> ((x ^ bit) & 63)) & 1ULL;
      if (a != b) {
        relevant |= bit;
        break;
      }
    }
  }
  if ((relevant & x_mask) != s_mask)
    throw PreconditionError("apple_check: relevant variables inside X must equal the image of sigma");

  int h = sigma.h;
  std::uint64_t g = 0;
  std::uint64_t free_mask = full & ~s_mask;
  int free_bits = f.n() - h;
  std::vector<int> free_pos = detail::mask_positions(free_mask, f.n());
  for (std::uint64_t z = 0; z < (1ULL << h); ++z) {
    std::uint64_t base = sigma.scatter(z);
    std::uint64_t ones = 0;
    for (std::uint64_t w = 0; w < (1ULL << free_bits); ++w) {
      std::uint64_t x = base;
      for (int i = 0; i < free_bits; ++i)
        x |= ((w >> i) & 1ULL) << free_pos[static_cast<size_t>(i)];
      if ((fw[x >> 6] >> (x & 63)) & 1ULL) ++ones;
    }
    if (2 * ones > (1ULL << free_bits)) g |= 1ULL << z;  // ties go to 0
  }

  Rational dist = rel_dist(f, lift_member(g, h, sigma)).value;
  if (dist <= kappa) return true;  // premise false; vacuously fine
  Rational gap = rerandomization_gap(f, x_mask);
  return gap > kappa / Rational(4, 1);
}

}  // namespace reltest
