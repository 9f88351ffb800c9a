#pragma once

// Bit-level plumbing shared across the library. An assignment over {0,1}^n is
// packed into a single 64-bit word: variable i (1-based in the text formats)
// lives at bit i-1, so the word value is also the truth-table index of the
// point. Structured representations support n <= 60; dense tables n <= 24.

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace reltest {

inline constexpr int kMaxVars = 60;
inline constexpr int kMaxDenseVars = 24;

constexpr std::uint64_t mask_n(int n) {
  return n >= 64 ? ~0ULL : ((1ULL << n) - 1ULL);
}

inline int popcount64(std::uint64_t x) { return std::popcount(x); }

// Smallest t with 2^t >= m (m >= 1).
constexpr int ceil_log2(std::uint64_t m) {
  int t = 0;
  std::uint64_t v = 1;
  while (v < m) {
    v <<= 1;
    ++t;
  }
  return t;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, salt); stable across runs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (salt + 1);
  splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 behind a bound-sampling API that does not depend on library
// distribution internals, so a (config, seed) pair reproduces bit-exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  std::uint64_t draw_mask(std::uint64_t mask) { return eng_() & mask; }

  // Uniform in [0, bound), bound >= 1. Masked rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound is zero");
    std::uint64_t m = bound - 1;
    m |= m >> 1;
    m |= m >> 2;
    m |= m >> 4;
    m |= m >> 8;
    m |= m >> 16;
    m |= m >> 32;
    std::uint64_t v;
    do {
      v = eng_() & m;
    } while (v >= bound);
    return v;
  }

  bool coin() { return (eng_() >> 17) & 1; }

 private:
  std::mt19937_64 eng_;
};

struct Assignment {
  int n = 0;
  std::uint64_t bits = 0;

  Assignment() = default;
  Assignment(int n_, std::uint64_t bits_) : n(n_), bits(bits_ & mask_n(n_)) {
    if (n_ < 0 || n_ > kMaxVars) throw std::invalid_argument("Assignment: bad n");
  }

  bool bit(int i) const { return (bits >> i) & 1; }  // 0-based position

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.n == b.n && a.bits == b.bits;
  }
  friend bool operator!=(const Assignment& a, const Assignment& b) { return !(a == b); }

  // Text form lists x1 first: "101" means x1=1, x2=0, x3=1.
  std::string to_string() const {
    std::string s(static_cast<size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      if (bit(i)) s[static_cast<size_t>(i)] = '1';
    return s;
  }

  static Assignment from_string(const std::string& s) {
    if (s.size() > static_cast<size_t>(kMaxVars))
      throw std::invalid_argument("Assignment: string too long");
    std::uint64_t b = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1')
        b |= 1ULL << i;
      else if (s[i] != '0')
        throw std::invalid_argument("Assignment: bad character");
    }
    return Assignment(static_cast<int>(s.size()), b);
  }
};

// Visits every k-subset of {0,...,n-1} in lexicographic order.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
}

}  // namespace reltest
