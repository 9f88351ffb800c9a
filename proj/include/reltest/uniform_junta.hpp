#pragma once

// One-sided uniform-distribution k-junta tester used as a subroutine.
//
// Strategy: blocked relevant-variable hunting over ceil(log2(1/delta))
// independent random partitions ("restarts") of the domain into s = 2k^2
// blocks. Each restart draws `rounds_per_restart` pairs (x, y) with y equal
// to x on the blocks already certified relevant and fresh uniform elsewhere;
// a disagreement f(x) != f(y) yields a new certified block via binary search.
// The tester rejects only upon holding k+1 disjoint certified blocks within
// a single partition -- impossible for a k-junta -- so a k-junta is never
// rejected, for any partition and any randomness.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "reltest/bits.hpp"
#include "reltest/blocks.hpp"
#include "reltest/oracle.hpp"
#include "reltest/rational.hpp"
#include "reltest/reldist.hpp"

namespace reltest {

struct UniformJuntaParams {
  int k = 1;
  Rational eps;
  Rational delta;
  int s = 2;                    // blocks per partition, >= 2k^2
  int restarts = 1;             // independent partitions
  int rounds_per_restart = 1;
  double c = 12.0;

  long long rounds() const { return static_cast<long long>(restarts) * rounds_per_restart; }

  // 2 queries per round plus at most k+1 binary searches per restart.
  long long query_budget() const {
    long long search = static_cast<long long>(k + 1) * (ceil_log2(static_cast<std::uint64_t>(s)) + 1);
    return static_cast<long long>(restarts) * (2LL * rounds_per_restart + search);
  }

  static UniformJuntaParams make(int k, Rational eps, Rational delta, double c = 12.0) {
    if (k < 0) throw std::invalid_argument("UniformJuntaParams: k < 0");
    if (!(eps > Rational(0, 1)) || !(eps < Rational(1, 1)))
      throw std::invalid_argument("UniformJuntaParams: eps must be in (0,1)");
    if (!(delta > Rational(0, 1)) || !(delta < Rational(1, 1)))
      throw std::invalid_argument("UniformJuntaParams: delta must be in (0,1)");
    UniformJuntaParams p;
    p.k = k;
    p.eps = eps;
    p.delta = delta;
    p.c = c;
    p.s = std::max(1, 2 * k * k);
    double inv_delta = 1.0 / delta.to_double();
    p.restarts = std::max(1, static_cast<int>(std::ceil(std::log2(inv_delta))));
    double klogk = k >= 2 ? k * std::log2(static_cast<double>(k)) : 0.0;
    double base = c * (static_cast<double>(k) / eps.to_double() + klogk);
    p.rounds_per_restart = std::max(1, static_cast<int>(std::ceil(base)));
    // rounds >= ceil(c*(k/eps + k log k)*log2(1/delta)) by construction.
    double required = std::ceil(base * std::log2(inv_delta));
    if (static_cast<double>(p.rounds()) < required)
      throw std::logic_error("UniformJuntaParams: round budget below declared bound");
    return p;
  }
};

// f is any membership-query function over the set bits of `domain_mask`
// (bits outside the mask are ignored by contract). Returns true iff accepted.
// One-sided: a k-junta is always accepted.
template <class F>
bool uniform_junta_accepts(F&& f, std::uint64_t domain_mask, const UniformJuntaParams& p,
                           Rng& rng) {
  for (int restart = 0; restart < p.restarts; ++restart) {
    std::vector<std::uint64_t> masks = random_partition_masked(domain_mask, p.s, rng);
    std::vector<bool> relevant(static_cast<size_t>(p.s), false);
    int found = 0;
    std::uint64_t known = 0;  // union of certified blocks
    for (int round = 0; round < p.rounds_per_restart; ++round) {
      std::uint64_t x = rng.draw_mask(domain_mask);
      std::uint64_t y = (x & known) | rng.draw_mask(domain_mask & ~known);
      bool fx = f(x);
      bool fy = f(y);
      if (fx == fy) continue;
      std::vector<int> candidates;
      for (int id = 0; id < p.s; ++id)
        if (!relevant[static_cast<size_t>(id)]) candidates.push_back(id);
      BlockSearchResult res =
          binary_search_block_masked(f, masks, std::move(candidates), x, y, fx, fy);
      relevant[static_cast<size_t>(res.block_id)] = true;
      known |= masks[static_cast<size_t>(res.block_id)];
      if (++found > p.k) return false;
    }
  }
  return true;
}

template <class Oracle>
bool uniform_junta_test(Oracle& o, const UniformJuntaParams& p) {
  auto query = [&o](std::uint64_t x) { return o.mq_bits(x); };
  return uniform_junta_accepts(query, mask_n(o.n()), p, o.rng());
}

// Certification oracle: exact uniform-distribution distance from f to the
// class of k-juntas, via the majority projection onto each k-subset (the
// closest J-junta fixes each J-cell to its majority value).
inline Rational uniform_distance_to_juntas(const BooleanFunction& f, int k) {
  if (f.n() > 16) throw std::invalid_argument("uniform_distance_to_juntas: n > 16");
  if (k >= f.n()) return Rational(0, 1);
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t total = 1ULL << f.n();
  std::uint64_t best = total;
  for_each_subset(f.n(), k, [&](const std::vector<int>& vars) {
    std::vector<std::uint64_t> cnt = detail::cell_counts(fw, f.n(), vars);
    std::uint64_t cell_size = 1ULL << (f.n() - k);
    std::uint64_t err = 0;
    for (std::uint64_t c : cnt) err += std::min(c, cell_size - c);
    if (err < best) best = err;
  });
  return Rational(static_cast<long long>(best), static_cast<long long>(total));
}

// Exact uniform distance from f to the nearest literal (x_i or its negation),
// used to certify near-literal instances in tests.
inline Rational uniform_distance_to_literal(const BooleanFunction& f) {
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t total = 1ULL << f.n();
  std::uint64_t best = total;
  for (int i = 0; i < f.n(); ++i) {
    std::uint64_t agree_pos = 0;  // points where f(x) == x_i
    for (std::uint64_t x = 0; x < total; ++x) {
      bool fx = (fw[x >> 6] >> (x & 63)) & 1ULL;
      if (fx == (((x >> i) & 1ULL) != 0)) ++agree_pos;
    }
    best = std::min(best, std::min(total - agree_pos, agree_pos));
  }
  return Rational(static_cast<long long>(best), static_cast<long long>(total));
}

}  // namespace reltest
