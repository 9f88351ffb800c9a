#pragma once

// Random r-way partitions of [n] and binary search over blocks for
// relevant-block discovery.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "reltest/bits.hpp"
#include "reltest/oracle.hpp"

namespace reltest {

struct BlockPartition {
  int n = 0;
  int r = 0;
  std::vector<int> block_of;        // size n
  std::vector<std::uint64_t> mask;  // size r; blocks may be empty

  std::uint64_t union_mask(const std::vector<int>& ids) const {
    std::uint64_t m = 0;
    for (int id : ids) m |= mask[static_cast<size_t>(id)];
    return m;
  }
};

// Each variable gets a uniform, independent block id.
inline BlockPartition random_partition(int n, int r, Rng& rng) {
  if (n < 1 || r < 1) throw std::invalid_argument("random_partition: n, r must be >= 1");
  BlockPartition p;
  p.n = n;
  p.r = r;
  p.block_of.resize(static_cast<size_t>(n));
  p.mask.assign(static_cast<size_t>(r), 0);
  for (int i = 0; i < n; ++i) {
    int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(r)));
    p.block_of[static_cast<size_t>(i)] = b;
    p.mask[static_cast<size_t>(b)] |= 1ULL << i;
  }
  return p;
}

// Partition of the set bits of `domain` into s blocks (masks, possibly empty).
inline std::vector<std::uint64_t> random_partition_masked(std::uint64_t domain, int s, Rng& rng) {
  std::vector<std::uint64_t> masks(static_cast<size_t>(s), 0);
  for (std::uint64_t rest = domain; rest; rest &= rest - 1) {
    std::uint64_t bit = rest & ~(rest - 1);
    masks[rng.below(static_cast<std::uint64_t>(s))] |= bit;
  }
  return masks;
}

struct BlockSearchResult {
  int block_id = -1;
  std::uint64_t witness = 0;  // v: f(v) != f(v restricted to b on the block)
  std::uint64_t other = 0;    // the differing endpoint: witness with the block set to b's bits
  int queries = 0;
};

// Core search. Invariant: f(a) != f(b) and a, b differ only inside the union
// of candidate blocks. Candidates are split by list order (first half first);
// one query per halving step. Returns the final `a` endpoint as the witness.
template <class F>
BlockSearchResult binary_search_block_masked(F&& f, const std::vector<std::uint64_t>& masks,
                                             std::vector<int> candidates, std::uint64_t a,
                                             std::uint64_t b, bool fa, bool fb) {
  if (fa == fb)
    throw std::invalid_argument("binary_search_block: endpoints must disagree under f");
  if (candidates.empty())
    throw std::invalid_argument("binary_search_block: no candidate blocks");
  BlockSearchResult res;
  size_t lo = 0, hi = candidates.size();
  while (hi - lo > 1) {
    size_t mid = lo + (hi - lo) / 2;
    std::uint64_t y = 0;
    for (size_t i = lo; i < mid; ++i) y |= masks[static_cast<size_t>(candidates[i])];
    std::uint64_t c = (a & ~y) | (b & y);
    bool fc = f(c);
    ++res.queries;
    if (fc != fa) {
      b = c;
      hi = mid;
    } else {
      a = c;
      lo = mid;
    }
  }
  res.block_id = candidates[lo];
  res.witness = a;
  std::uint64_t bm = masks[static_cast<size_t>(res.block_id)];
  res.other = (a & ~bm) | (b & bm);
  return res;
}

// Oracle-facing form: searches the blocks of P outside `excluded` for a block
// on which flipping a to b's bits changes f. Preconditions: f(a) != f(b)
// (values supplied by the caller) and a, b agree on every excluded block.
template <class Oracle>
BlockSearchResult binary_search_block(Oracle& o, const BlockPartition& P,
                                      const std::vector<bool>& excluded, const Assignment& a,
                                      const Assignment& b, bool fa, bool fb) {
  if (a.n != P.n || b.n != P.n)
    throw std::invalid_argument("binary_search_block: dimension mismatch");
  std::vector<int> candidates;
  std::uint64_t excluded_mask = 0;
  for (int id = 0; id < P.r; ++id) {
    if (id < static_cast<int>(excluded.size()) && excluded[static_cast<size_t>(id)])
      excluded_mask |= P.mask[static_cast<size_t>(id)];
    else
      candidates.push_back(id);
  }
  if ((a.bits ^ b.bits) & excluded_mask)
    throw std::invalid_argument("binary_search_block: endpoints differ on an excluded block");
  auto query = [&o](std::uint64_t x) { return o.mq_bits(x); };
  return binary_search_block_masked(query, P.mask, std::move(candidates), a.bits, b.bits, fa, fb);
}

}  // namespace reltest
