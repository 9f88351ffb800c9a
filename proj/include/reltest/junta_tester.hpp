#pragma once

// The relative-error k-junta tester (Phases A-D).
//
// Phase A draws a random r = 2k^2 way partition of [n]. Phase B hunts for
// relevant blocks under a consecutive-miss budget T, rejecting once more than
// k blocks are certified. Phase C checks every block restriction f^l against
// a literal (UniformJunta plus the mirror test). Phase D runs M rounds of the
// paired-counter test that aligns a sign string z with the hidden literals
// and then compares f(u_X o w) with f((u_X xor z_X) o w).

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "reltest/tester_common.hpp"

namespace reltest {

struct JuntaTesterParams {
  int k = 1;
  Rational eps;
  int r = 2;       // 2k^2
  long long T = 1;  // consecutive-miss budget in Phase B
  long long M = 1;  // Phase D rounds
  int h = 1;        // paired-test repetitions per block per round
  double c_T = 6.0, c_M = 24.0, c_h = 8.0;
  UniformJuntaParams uj;

  // Constructs parameters and verifies the inequalities the analysis needs:
  //   (1 - eps/20)^T <= 1/(15k)
  //   M*k*(1/15)^h   <= 1/15
  //   (1 - eps/5)^M  <= 1/15
  // T and h are raised above their c_*-formula values when required; the
  // displayed O(log(k/eps)) form of T cannot satisfy the first bound, which
  // needs T = Theta(log(k)/eps).
  static JuntaTesterParams make(int k, Rational eps, double c_T = 6.0, double c_M = 24.0,
                                double c_h = 8.0, double c_uj = 12.0) {
    if (k < 1) throw std::invalid_argument("JuntaTesterParams: k must be >= 1");
    if (!(eps > Rational(0, 1)) || !(eps < Rational(1, 2)))
      throw std::invalid_argument("JuntaTesterParams: eps must be in (0, 1/2)");
    JuntaTesterParams p;
    p.k = k;
    p.eps = eps;
    p.c_T = c_T;
    p.c_M = c_M;
    p.c_h = c_h;
    p.r = 2 * k * k;
    long double e = static_cast<long double>(eps.to_double());
    long double ratio = static_cast<long double>(k) / e;

    long long t_formula = llceil(c_T * std::log2(static_cast<double>(ratio)));
    long long t_floor = llceil(std::log(15.0L * k) / -std::log1p(-e / 20));
    p.T = std::max({t_formula, t_floor, 1LL});
    while (powl(1.0L - e / 20, static_cast<long double>(p.T)) > 1.0L / (15 * k)) ++p.T;

    long long m_formula = llceil(c_M / static_cast<double>(e));
    long long m_floor = llceil(std::log(15.0L) / -std::log1p(-e / 5));
    p.M = std::max({m_formula, m_floor, 1LL});
    while (powl(1.0L - e / 5, static_cast<long double>(p.M)) > 1.0L / 15) ++p.M;

    long long h_formula = llceil(c_h * std::log2(static_cast<double>(ratio)));
    long long h_floor = 1 + llceil(std::log(static_cast<long double>(p.M) * k) / std::log(15.0L));
    p.h = static_cast<int>(std::max({h_formula, h_floor, 1LL}));
    while (static_cast<long double>(p.M) * k * powl(1.0L / 15, p.h) > 1.0L / 15) ++p.h;

    p.uj = UniformJuntaParams::make(1, Rational(1, 30), Rational(1, 15), c_uj);
    return p;
  }

  // Worst-case oracle calls (queries + samples), from the structure above.
  long long query_budget() const {
    long long phase_b = 2 * (k + 2) * T +
                        static_cast<long long>(k + 1) *
                            (ceil_log2(static_cast<std::uint64_t>(r)) + 1);
    long long phase_c = static_cast<long long>(k) * (uj.query_budget() + 2);
    long long phase_d = M * (3LL * k * h + 3);
    return phase_b + phase_c + phase_d;
  }

 private:
  static long long llceil(long double v) { return static_cast<long long>(std::ceil(v)); }
};

struct JuntaTestOptions {
  const BlockPartition* partition = nullptr;  // fixed partition for deterministic tests
};

template <class Oracle>
TesterVerdict junta_test(Oracle& o, const JuntaTesterParams& p,
                         const JuntaTestOptions& opts = {}) {
  auto verdict = [&o](Outcome out, Phase ph, const char* why) {
    TesterVerdict v;
    v.outcome = out;
    v.phase = ph;
    v.reason = why;
    v.stats = o.stats();
    v.seed = o.seed();
    return v;
  };

  // Constant-0 is a 0-junta; the testers never sample before this check.
  if (o.satisfying_count() == 0)
    return verdict(Outcome::Accept, Phase::Preflight, reason::kConstantZero);

  // Phase A.
  BlockPartition local;
  const BlockPartition* P = opts.partition;
  if (!P) {
    local = random_partition(o.n(), p.r, o.rng());
    P = &local;
  } else if (P->n != o.n()) {
    throw std::invalid_argument("junta_test: fixed partition dimension mismatch");
  }

  // Phase B.
  HuntResult hunt = hunt_relevant_blocks(o, *P, p.T, p.k);
  if (hunt.too_many) return verdict(Outcome::Reject, Phase::B, reason::kTooManyBlocks);

  // Phase C.
  if (const char* why = literal_phase(o, hunt.blocks, p.uj))
    return verdict(Outcome::Reject, Phase::C, why);

  // Phase D.
  std::uint64_t full = mask_n(o.n());
  std::uint64_t X = hunt.union_mask;
  for (long long round = 0; round < p.M; ++round) {
    std::uint64_t s = o.rng().draw_mask(X);
    std::uint64_t z = 0;
    for (const RelevantBlock& blk : hunt.blocks) {
      BlockRestriction<Oracle> fl{&o, blk.mask, blk.witness};
      std::uint64_t y1 = s & blk.mask;        // bits of the block where s = 1
      std::uint64_t y0 = blk.mask & ~s;       // and where s = 0
      int g0 = 0, g1 = 0;
      for (int j = 0; j < p.h; ++j) {
        std::uint64_t b = o.rng().draw_mask(blk.mask);
        bool base = fl(b);
        if (base != fl(b ^ y0)) ++g0;
        if (base != fl(b ^ y1)) ++g1;
      }
      bool dichotomy = (g0 == p.h && g1 == 0) || (g0 == 0 && g1 == p.h);
      if (!dichotomy) return verdict(Outcome::Reject, Phase::D, reason::kCounterDichotomy);
      z |= (g0 == p.h ? s : ~s) & blk.mask;
    }
    std::uint64_t u = o.sample_bits();
    std::uint64_t w = o.rng().draw_mask(full & ~X);
    std::uint64_t p1 = (u & X) | w;
    std::uint64_t p2 = p1 ^ (z & X);
    if (o.mq_bits(p1) != o.mq_bits(p2))
      return verdict(Outcome::Reject, Phase::D, reason::kFinalDisagreement);
  }
  return verdict(Outcome::Accept, Phase::D, reason::kAccept);
}

}  // namespace reltest
