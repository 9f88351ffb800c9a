#pragma once

// Small instance builders shared by the test suites.

#include <vector>

#include "reltest/boolfn.hpp"

namespace testutil {

using reltest::Assignment;
using reltest::BooleanFunction;
using reltest::InjectiveMap;
using reltest::Rng;

template <class F>
inline BooleanFunction dense_of(int n, F&& f) {
  std::vector<std::uint64_t> w(BooleanFunction::table_words(n), 0);
  for (std::uint64_t x = 0; x < (1ULL << n); ++x)
    if (f(x)) w[x >> 6] |= 1ULL << (x & 63);
  return BooleanFunction::dense(n, std::move(w));
}

inline BooleanFunction random_dense(int n, Rng& rng) {
  std::vector<std::uint64_t> w(BooleanFunction::table_words(n));
  for (auto& word : w) word = rng.next();
  if (n < 6) w[0] &= reltest::mask_n(1 << n);
  return BooleanFunction::dense(n, std::move(w));
}

inline BooleanFunction parity_on(int n, std::uint64_t vars_mask) {
  return dense_of(n, [vars_mask](std::uint64_t x) {
    return reltest::popcount64(x & vars_mask) & 1;
  });
}

inline BooleanFunction and_on(int n, int a, int b) {
  return BooleanFunction::junta(n, InjectiveMap(n, {a, b}),
                                BooleanFunction::dense(2, {0b1000}));
}

// f with `flips` random table positions toggled.
inline BooleanFunction with_flips(const BooleanFunction& f, int flips, Rng& rng) {
  std::vector<std::uint64_t> w = reltest::dense_words(f);
  for (int i = 0; i < flips; ++i) {
    std::uint64_t pos = rng.below(1ULL << f.n());
    w[pos >> 6] ^= 1ULL << (pos & 63);
  }
  return BooleanFunction::dense(f.n(), std::move(w));
}

}  // namespace testutil
