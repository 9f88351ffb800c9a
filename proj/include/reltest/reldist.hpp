#pragma once

// Exact relative-distance computations and the analytic facts about rel-dist,
// used as certification oracles by the harness and tests. Everything here is
// brute force over truth tables in exact rational arithmetic.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "reltest/bits.hpp"
#include "reltest/boolfn.hpp"
#include "reltest/oracle.hpp"
#include "reltest/rational.hpp"

namespace reltest {

class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

struct RelDistResult {
  std::uint64_t sym_diff = 0;  // |f^{-1}(1) symdiff g^{-1}(1)|
  std::uint64_t f_ones = 0;    // |f^{-1}(1)|
  Rational value;              // sym_diff / f_ones, exact
};

namespace detail {

inline std::uint64_t xor_popcount(const std::vector<std::uint64_t>& a,
                                  const std::vector<std::uint64_t>& b) {
  std::uint64_t c = 0;
  for (size_t i = 0; i < a.size(); ++i) c += static_cast<std::uint64_t>(popcount64(a[i] ^ b[i]));
  return c;
}

inline std::uint64_t popcount_words(const std::vector<std::uint64_t>& a) {
  std::uint64_t c = 0;
  for (std::uint64_t w : a) c += static_cast<std::uint64_t>(popcount64(w));
  return c;
}

// Satisfier counts of f per assignment of the variables in `vars` (0-based,
// compact cell index uses vars in the given order).
inline std::vector<std::uint64_t> cell_counts(const std::vector<std::uint64_t>& words, int n,
                                              const std::vector<int>& vars) {
  std::vector<std::uint64_t> cnt(1ULL << vars.size(), 0);
  std::uint64_t total = 1ULL << n;
  for (std::uint64_t x = 0; x < total; ++x) {
    if (!((words[x >> 6] >> (x & 63)) & 1ULL)) continue;
    std::uint64_t cell = 0;
    for (size_t i = 0; i < vars.size(); ++i)
      cell |= ((x >> vars[i]) & 1ULL) << i;
    ++cnt[cell];
  }
  return cnt;
}

inline std::vector<int> mask_positions(std::uint64_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (mask & (1ULL << i)) out.push_back(i);
  return out;
}

}  // namespace detail

inline RelDistResult rel_dist(const BooleanFunction& f, const BooleanFunction& g) {
  if (f.n() != g.n()) throw std::invalid_argument("rel_dist: dimension mismatch");
  std::uint64_t sym = 0, ones = 0;
  if (f.n() <= kMaxDenseVars) {
    std::vector<std::uint64_t> fw = dense_words(f);
    std::vector<std::uint64_t> gw = dense_words(g);
    sym = detail::xor_popcount(fw, gw);
    ones = detail::popcount_words(fw);
  } else {
    const auto* jf = std::get_if<BooleanFunction::Junta>(&f.repr());
    const auto* jg = std::get_if<BooleanFunction::Junta>(&g.repr());
    if (!jf || !jg)
      throw std::invalid_argument("rel_dist: n > 24 requires junta-lifted operands");
    std::uint64_t support = jf->sigma.image_mask() | jg->sigma.image_mask();
    int m = popcount64(support);
    if (m > kMaxDenseVars)
      throw std::invalid_argument("rel_dist: combined support exceeds dense cap");
    std::vector<int> pos = detail::mask_positions(support, f.n());
    std::uint64_t cells = 1ULL << m;
    std::uint64_t disagree = 0, fone = 0;
    for (std::uint64_t c = 0; c < cells; ++c) {
      std::uint64_t full = 0;
      for (int i = 0; i < m; ++i)
        full |= ((c >> i) & 1ULL) << pos[static_cast<size_t>(i)];
      bool fv = f.evaluate_bits(full);
      bool gv = g.evaluate_bits(full);
      if (fv != gv) ++disagree;
      if (fv) ++fone;
    }
    int shift = f.n() - m;
    sym = disagree << shift;
    ones = fone << shift;
  }
  if (ones == 0) throw EmptyFunctionError();
  RelDistResult r;
  r.sym_diff = sym;
  r.f_ones = ones;
  r.value = Rational(static_cast<long long>(sym), static_cast<long long>(ones));
  return r;
}

// Minimum over a streamed, finite enumeration; returns the argmin witness.
// `enumerate` must invoke its callback once per candidate function.
template <class Enum>
std::pair<RelDistResult, BooleanFunction> rel_dist_to_class(const BooleanFunction& f,
                                                            Enum&& enumerate) {
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t ones = detail::popcount_words(fw);
  if (ones == 0) throw EmptyFunctionError();
  std::optional<RelDistResult> best;
  std::optional<BooleanFunction> witness;
  enumerate([&](const BooleanFunction& g) {
    std::uint64_t sym = detail::xor_popcount(fw, dense_words(g));
    if (!best || sym < best->sym_diff) {
      RelDistResult r;
      r.sym_diff = sym;
      r.f_ones = ones;
      r.value = Rational(static_cast<long long>(sym), static_cast<long long>(ones));
      best = r;
      witness = g;
    }
  });
  if (!best) throw std::invalid_argument("rel_dist_to_class: empty enumeration");
  return {*best, std::move(*witness)};
}

// Lemma check: rel_dist(f,g) <= eps <= 1/2 implies rel_dist(g,f) <= 2*eps.
inline bool check_approx_symmetry(const BooleanFunction& f, const BooleanFunction& g,
                                  const Rational& eps) {
  if (eps > Rational(1, 2)) throw PreconditionError("check_approx_symmetry: eps > 1/2");
  if (g.count_satisfying() == 0)
    throw PreconditionError("check_approx_symmetry: g is identically 0");
  if (rel_dist(f, g).value > eps)
    throw PreconditionError("check_approx_symmetry: rel_dist(f,g) > eps");
  Rational back = rel_dist(g, f).value;
  return back <= Rational(2, 1) * eps;
}

// Lemma check: rel_dist(f,g) <= eps and rel_dist(g,h) <= eps' imply
// rel_dist(f,h) <= eps + (1+eps)*eps'.
inline bool check_approx_triangle(const BooleanFunction& f, const BooleanFunction& g,
                                  const BooleanFunction& h, const Rational& eps,
                                  const Rational& eps_prime) {
  if (rel_dist(f, g).value > eps)
    throw PreconditionError("check_approx_triangle: rel_dist(f,g) > eps");
  if (rel_dist(g, h).value > eps_prime)
    throw PreconditionError("check_approx_triangle: rel_dist(g,h) > eps'");
  Rational bound = eps + (Rational(1, 1) + eps) * eps_prime;
  return rel_dist(f, h).value <= bound;
}

// Pr_{u ~ f^{-1}(1), w ~ {0,1}^(complement of J)}[ f(u_J o w) = 0 ], exact.
inline Rational rerandomization_gap(const BooleanFunction& f, std::uint64_t j_mask) {
  if (f.n() > 16) throw std::invalid_argument("rerandomization_gap: n > 16");
  j_mask &= mask_n(f.n());
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t ones = detail::popcount_words(fw);
  if (ones == 0) throw EmptyFunctionError();
  std::vector<int> jpos = detail::mask_positions(j_mask, f.n());
  std::vector<std::uint64_t> cnt = detail::cell_counts(fw, f.n(), jpos);
  int mfree = f.n() - static_cast<int>(jpos.size());
  std::uint64_t cell_size = 1ULL << mfree;
  std::uint64_t num = 0;
  for (std::uint64_t c : cnt) num += c * (cell_size - c);
  return Rational(static_cast<long long>(num), static_cast<long long>(ones * cell_size));
}

// Pr over u ~ f^{-1}(1), w ~ {0,1}^(X complement), y ~ {0,1}^(X minus J) of
// f(u_X o w) != f(u_J o y o w), exact. Requires J subset of X.
inline Rational key_junta_gap(const BooleanFunction& f, std::uint64_t x_mask,
                              std::uint64_t j_mask) {
  if (f.n() > 16) throw std::invalid_argument("key_junta_gap: n > 16");
  x_mask &= mask_n(f.n());
  j_mask &= mask_n(f.n());
  if (j_mask & ~x_mask) throw std::invalid_argument("key_junta_gap: J not a subset of X");
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t ones = detail::popcount_words(fw);
  if (ones == 0) throw EmptyFunctionError();

  std::vector<int> xpos = detail::mask_positions(x_mask, f.n());
  int mx = static_cast<int>(xpos.size());
  int mw = f.n() - mx;
  std::uint64_t wcells = 1ULL << mw;
  size_t rwords = static_cast<size_t>((wcells + 63) / 64);

  // R[c] = restriction bit-vector of f over the complement, for X-cell c.
  std::vector<std::vector<std::uint64_t>> R(1ULL << mx,
                                            std::vector<std::uint64_t>(rwords, 0));
  std::vector<int> wpos = detail::mask_positions(mask_n(f.n()) & ~x_mask, f.n());
  std::uint64_t total = 1ULL << f.n();
  for (std::uint64_t x = 0; x < total; ++x) {
    if (!((fw[x >> 6] >> (x & 63)) & 1ULL)) continue;
    std::uint64_t cx = 0, cw = 0;
    for (int i = 0; i < mx; ++i) cx |= ((x >> xpos[static_cast<size_t>(i)]) & 1ULL) << i;
    for (int i = 0; i < mw; ++i) cw |= ((x >> wpos[static_cast<size_t>(i)]) & 1ULL) << i;
    R[cx][cw >> 6] |= 1ULL << (cw & 63);
  }

  // Positions of J and X\J inside the compact X-cell index.
  int mj = 0;
  std::vector<int> within_j, within_y;
  for (int i = 0; i < mx; ++i) {
    if (j_mask & (1ULL << xpos[static_cast<size_t>(i)])) {
      within_j.push_back(i);
      ++mj;
    } else {
      within_y.push_back(i);
    }
  }
  int my = mx - mj;
  auto cell_from = [&](std::uint64_t jpart, std::uint64_t ypart) {
    std::uint64_t c = 0;
    for (int i = 0; i < mj; ++i) c |= ((jpart >> i) & 1ULL) << within_j[static_cast<size_t>(i)];
    for (int i = 0; i < my; ++i) c |= ((ypart >> i) & 1ULL) << within_y[static_cast<size_t>(i)];
    return c;
  };

  std::uint64_t num = 0;
  for (std::uint64_t c = 0; c < (1ULL << mx); ++c) {
    std::uint64_t weight = detail::popcount_words(R[c]);  // satisfiers with u_X-cell c
    if (weight == 0) continue;
    std::uint64_t jpart = 0;
    for (int i = 0; i < mj; ++i)
      jpart |= ((c >> within_j[static_cast<size_t>(i)]) & 1ULL) << i;
    std::uint64_t acc = 0;
    for (std::uint64_t y = 0; y < (1ULL << my); ++y)
      acc += detail::xor_popcount(R[c], R[cell_from(jpart, y)]);
    num += weight * acc;
  }
  // Denominator: N * 2^{|complement of X|} * 2^{|X \ J|}.
  unsigned long long den = ones << mw;
  return Rational(static_cast<long long>(num), static_cast<long long>(den)) /
         Rational(static_cast<long long>(1ULL << my), 1);
}

}  // namespace reltest
