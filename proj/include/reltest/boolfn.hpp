#pragma once

// Boolean functions over {0,1}^n in three representations: dense truth table,
// junta lift of a small core, and decision tree. Values are immutable after
// construction and safe to share across threads.
//
// Truth-table convention: assignment x has index sum_i x_i * 2^(i-1)
// (variable 1 is the least significant bit), i.e. the packed Assignment word
// is the table index.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reltest/bits.hpp"

namespace reltest {

// sigma : [h] -> [n], injective. image[i] is the 0-based variable index that
// core position i maps to.
struct InjectiveMap {
  int h = 0;
  int n = 0;
  std::vector<int> image;

  InjectiveMap() = default;
  InjectiveMap(int n_, std::vector<int> image_) : h(static_cast<int>(image_.size())), n(n_), image(std::move(image_)) {
    if (n < 1 || n > kMaxVars) throw std::invalid_argument("InjectiveMap: bad n");
    std::uint64_t seen = 0;
    for (int v : image) {
      if (v < 0 || v >= n) throw std::invalid_argument("InjectiveMap: index out of range");
      if (seen & (1ULL << v)) throw std::invalid_argument("InjectiveMap: indices not distinct");
      seen |= 1ULL << v;
    }
  }

  std::uint64_t image_mask() const {
    std::uint64_t m = 0;
    for (int v : image) m |= 1ULL << v;
    return m;
  }

  // sigma^{-1}(x): core bits gathered from the full assignment.
  std::uint64_t gather(std::uint64_t full) const {
    std::uint64_t out = 0;
    for (int i = 0; i < h; ++i) out |= ((full >> image[static_cast<size_t>(i)]) & 1ULL) << i;
    return out;
  }

  // sigma(z): core bits placed at their image positions.
  std::uint64_t scatter(std::uint64_t core_bits) const {
    std::uint64_t out = 0;
    for (int i = 0; i < h; ++i) out |= ((core_bits >> i) & 1ULL) << image[static_cast<size_t>(i)];
    return out;
  }
};

// pi : [n] -> [n], bijective; pi(x)_i = x_{pi(i)}.
struct Permutation {
  std::vector<int> map;  // 0-based; map[i] = pi(i)

  Permutation() = default;
  explicit Permutation(std::vector<int> m) : map(std::move(m)) {
    std::uint64_t seen = 0;
    int n = static_cast<int>(map.size());
    if (n < 1 || n > kMaxVars) throw std::invalid_argument("Permutation: bad size");
    for (int v : map) {
      if (v < 0 || v >= n || (seen & (1ULL << v)))
        throw std::invalid_argument("Permutation: not a bijection");
      seen |= 1ULL << v;
    }
  }

  int n() const { return static_cast<int>(map.size()); }

  std::uint64_t apply(std::uint64_t x) const {
    std::uint64_t out = 0;
    for (int i = 0; i < n(); ++i) out |= ((x >> map[static_cast<size_t>(i)]) & 1ULL) << i;
    return out;
  }

  static Permutation identity(int n) {
    std::vector<int> m(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = i;
    return Permutation(std::move(m));
  }

  static Permutation random(int n, Rng& rng) {
    std::vector<int> m(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i)
      std::swap(m[static_cast<size_t>(i)], m[static_cast<size_t>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
    return Permutation(std::move(m));
  }
};

// Composition law used throughout: (f_pi)_rho == f_lambda with
// lambda(i) = rho(pi(i)).
inline Permutation compose(const Permutation& pi, const Permutation& rho) {
  if (pi.n() != rho.n()) throw std::invalid_argument("compose: size mismatch");
  std::vector<int> m(static_cast<size_t>(pi.n()));
  for (int i = 0; i < pi.n(); ++i)
    m[static_cast<size_t>(i)] = rho.map[static_cast<size_t>(pi.map[static_cast<size_t>(i)])];
  return Permutation(std::move(m));
}

// Decision-tree node. var >= 0: internal, child[b] taken when x_var == b.
// var == -1: leaf, child[0] holds the output bit.
struct DtNode {
  int var = -1;
  int child[2] = {0, 0};

  static DtNode leaf(int value) {
    DtNode d;
    d.var = -1;
    d.child[0] = value;
    return d;
  }
  static DtNode internal(int var, int lo, int hi) {
    DtNode d;
    d.var = var;
    d.child[0] = lo;
    d.child[1] = hi;
    return d;
  }
};

class BooleanFunction {
 public:
  struct Dense {
    std::vector<std::uint64_t> words;  // 2^n bits, word w holds indices [64w, 64w+64)
  };
  struct Junta {
    InjectiveMap sigma;
    std::shared_ptr<const BooleanFunction> core;  // over h variables
  };
  struct Dtree {
    std::vector<DtNode> nodes;  // root at index 0
    int leaf_count = 0;
  };
  using Repr = std::variant<Dense, Junta, Dtree>;

  static BooleanFunction dense(int n, std::vector<std::uint64_t> words) {
    check_n(n, kMaxDenseVars);
    size_t need = table_words(n);
    if (words.size() != need) throw std::invalid_argument("dense: wrong word count");
    if (n < 6) words[0] &= mask_n(1 << n);
    return BooleanFunction(n, Dense{std::move(words)});
  }

  static BooleanFunction constant(int n, bool value) {
    check_n(n, kMaxVars);
    if (n <= kMaxDenseVars) {
      std::vector<std::uint64_t> w(table_words(n), value ? ~0ULL : 0ULL);
      if (value && n < 6) w[0] = mask_n(1 << n);
      return BooleanFunction(n, Dense{std::move(w)});
    }
    Dtree t;
    t.nodes.push_back(DtNode::leaf(value ? 1 : 0));
    t.leaf_count = 1;
    return BooleanFunction(n, std::move(t));
  }

  static BooleanFunction junta(int n, InjectiveMap sigma, BooleanFunction core) {
    check_n(n, kMaxVars);
    if (sigma.n != n) throw std::invalid_argument("junta: sigma range mismatch");
    if (core.n() != sigma.h) throw std::invalid_argument("junta: core arity mismatch");
    Junta j;
    j.sigma = std::move(sigma);
    j.core = std::make_shared<const BooleanFunction>(std::move(core));
    return BooleanFunction(n, std::move(j));
  }

  static BooleanFunction decision_tree(int n, std::vector<DtNode> nodes) {
    check_n(n, kMaxVars);
    Dtree t;
    t.nodes = std::move(nodes);
    if (t.nodes.empty()) throw std::invalid_argument("decision_tree: empty");
    t.leaf_count = validate_tree(t.nodes, n);
    return BooleanFunction(n, std::move(t));
  }

  int n() const { return n_; }
  const Repr& repr() const { return repr_; }

  bool is_dense() const { return std::holds_alternative<Dense>(repr_); }
  bool is_junta() const { return std::holds_alternative<Junta>(repr_); }
  bool is_dtree() const { return std::holds_alternative<Dtree>(repr_); }

  bool evaluate_bits(std::uint64_t x) const {
    if (const Dense* d = std::get_if<Dense>(&repr_))
      return (d->words[x >> 6] >> (x & 63)) & 1ULL;
    if (const Junta* j = std::get_if<Junta>(&repr_))
      return j->core->evaluate_bits(j->sigma.gather(x));
    const Dtree& t = std::get<Dtree>(repr_);
    int cur = 0;
    while (t.nodes[static_cast<size_t>(cur)].var >= 0) {
      const DtNode& nd = t.nodes[static_cast<size_t>(cur)];
      cur = nd.child[(x >> nd.var) & 1ULL];
    }
    return t.nodes[static_cast<size_t>(cur)].child[0] != 0;
  }

  bool evaluate(const Assignment& x) const {
    if (x.n != n_) throw std::invalid_argument("evaluate: dimension mismatch");
    return evaluate_bits(x.bits);
  }

  // |f^{-1}(1)|, exact. Requires n <= 60.
  std::uint64_t count_satisfying() const {
    if (const Dense* d = std::get_if<Dense>(&repr_)) {
      std::uint64_t c = 0;
      for (std::uint64_t w : d->words) c += static_cast<std::uint64_t>(popcount64(w));
      return c;
    }
    if (const Junta* j = std::get_if<Junta>(&repr_))
      return j->core->count_satisfying() << (n_ - j->sigma.h);
    const Dtree& t = std::get<Dtree>(repr_);
    return dtree_count(t.nodes, 0, 0);
  }

  BooleanFunction complement() const {
    if (const Dense* d = std::get_if<Dense>(&repr_)) {
      std::vector<std::uint64_t> w = d->words;
      for (auto& x : w) x = ~x;
      std::uint64_t total = 1ULL << n_;
      if (total % 64 != 0) w.back() &= mask_n(static_cast<int>(total % 64));
      return BooleanFunction(n_, Dense{std::move(w)});
    }
    if (const Junta* j = std::get_if<Junta>(&repr_)) {
      Junta out;
      out.sigma = j->sigma;
      out.core = std::make_shared<const BooleanFunction>(j->core->complement());
      return BooleanFunction(n_, std::move(out));
    }
    Dtree t = std::get<Dtree>(repr_);
    for (auto& nd : t.nodes)
      if (nd.var < 0) nd.child[0] = nd.child[0] ? 0 : 1;
    return BooleanFunction(n_, std::move(t));
  }

  static size_t table_words(int n) { return static_cast<size_t>(((1ULL << n) + 63) / 64); }

 private:
  BooleanFunction(int n, Repr repr) : n_(n), repr_(std::move(repr)) {}

  static void check_n(int n, int cap) {
    if (n < 1 || n > cap) throw std::invalid_argument("BooleanFunction: n out of range");
  }

  std::uint64_t dtree_count(const std::vector<DtNode>& nodes, int idx, int depth) const {
    const DtNode& nd = nodes[static_cast<size_t>(idx)];
    if (nd.var < 0) return nd.child[0] ? (1ULL << (n_ - depth)) : 0;
    return dtree_count(nodes, nd.child[0], depth + 1) + dtree_count(nodes, nd.child[1], depth + 1);
  }

  // Returns the reachable leaf count; rejects repeated variables on a path.
  static int validate_tree(const std::vector<DtNode>& nodes, int n);

  int n_;
  Repr repr_;
};

// ---- operations on assignments ------------------------------------------

// u_S composed with w off S; w is full-width, only its bits outside s_mask are read.
inline Assignment compose_partial(const Assignment& u, std::uint64_t s_mask, const Assignment& w) {
  if (w.n != u.n) throw std::invalid_argument("compose_partial: dimension mismatch");
  s_mask &= mask_n(u.n);
  return Assignment(u.n, (u.bits & s_mask) | (w.bits & ~s_mask));
}

// Same, with w given compactly over the complement of S in ascending position order.
inline Assignment compose_partial_compact(const Assignment& u, std::uint64_t s_mask,
                                          const Assignment& w_compact) {
  s_mask &= mask_n(u.n);
  int free_count = u.n - popcount64(s_mask);
  if (w_compact.n != free_count)
    throw std::invalid_argument("compose_partial: partial assignment does not cover the complement");
  std::uint64_t out = u.bits & s_mask;
  int j = 0;
  for (int i = 0; i < u.n; ++i) {
    if (s_mask & (1ULL << i)) continue;
    if (w_compact.bit(j)) out |= 1ULL << i;
    ++j;
  }
  return Assignment(u.n, out);
}

inline Assignment flip_block(const Assignment& x, std::uint64_t block_mask) {
  return Assignment(x.n, x.bits ^ (block_mask & mask_n(x.n)));
}

// f_pi with f_pi(x) = f(pi(x)). See Permutation for the composition law.
BooleanFunction apply_permutation(const BooleanFunction& f, const Permutation& pi);

// Materializes the 2^n-bit truth table (n <= kMaxDenseVars).
std::vector<std::uint64_t> dense_words(const BooleanFunction& f);

// ---- textual function format ---------------------------------------------
//
//   table n=<n> hex=<2^n bits as hex, LSB-first>
//   junta n=<n> vars=<i1,...,ih> core=<2^h bits hex>
//   dtree n=<n> expr=<(x<i> <expr0> <expr1>) | 0 | 1>
//
// Hex is LSB-first: the first hex digit holds table bits 0..3.

std::string format_function(const BooleanFunction& f);
BooleanFunction parse_function(const std::string& line);
BooleanFunction load_function_file(const std::string& path);

std::string table_to_hex(const std::vector<std::uint64_t>& words, int n);
std::vector<std::uint64_t> hex_to_table(const std::string& hex, int n);

}  // namespace reltest
