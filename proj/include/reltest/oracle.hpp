#pragma once

// The relative-error access model: membership queries MQ(f) plus uniform
// samples from f^{-1}(1), with exact call counting. A QueryOracle owns its
// RNG and is single-threaded; run one oracle per trial for parallelism.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "reltest/bits.hpp"
#include "reltest/boolfn.hpp"

namespace reltest {

struct QueryStats {
  std::uint64_t mq_count = 0;
  std::uint64_t samp_count = 0;
  std::uint64_t total() const { return mq_count + samp_count; }
};

// f^{-1}(1) is empty; callers must handle the constant-0 case before sampling.
class EmptyFunctionError : public std::runtime_error {
 public:
  EmptyFunctionError() : std::runtime_error("sample_satisfying: f^{-1}(1) is empty") {}
};

namespace detail {

// Exact uniform sampling over f^{-1}(1), per representation:
//   dense  -- index into the satisfier list;
//   junta  -- uniform core satisfier, free bits uniform;
//   dtree  -- 1-leaf chosen with probability 2^(-depth), free bits uniform.
class SatSampler {
 public:
  explicit SatSampler(const BooleanFunction& f) : n_(f.n()) {
    if (const auto* d = std::get_if<BooleanFunction::Dense>(&f.repr())) {
      std::vector<std::uint32_t> sat;
      std::uint64_t total = 1ULL << n_;
      for (std::uint64_t x = 0; x < total; ++x)
        if ((d->words[x >> 6] >> (x & 63)) & 1ULL) sat.push_back(static_cast<std::uint32_t>(x));
      state_ = DenseState{std::move(sat)};
    } else if (const auto* j = std::get_if<BooleanFunction::Junta>(&f.repr())) {
      JuntaState s;
      s.core = std::make_unique<SatSampler>(*j->core);
      s.sigma = j->sigma;
      s.free_mask = mask_n(n_) & ~j->sigma.image_mask();
      state_ = std::move(s);
    } else {
      const auto& t = std::get<BooleanFunction::Dtree>(f.repr());
      DtreeState s;
      collect_leaves(t.nodes, 0, 0, 0, 0, s);
      state_ = std::move(s);
    }
  }

  std::uint64_t count() const {
    if (const auto* d = std::get_if<DenseState>(&state_)) return d->sat.size();
    if (const auto* j = std::get_if<JuntaState>(&state_))
      return j->core->count() << popcount64(j->free_mask);
    return std::get<DtreeState>(state_).total;
  }

  std::uint64_t draw(Rng& rng) const {
    if (const auto* d = std::get_if<DenseState>(&state_)) {
      if (d->sat.empty()) throw EmptyFunctionError();
      return d->sat[rng.below(d->sat.size())];
    }
    if (const auto* j = std::get_if<JuntaState>(&state_)) {
      std::uint64_t core_bits = j->core->draw(rng);
      return j->sigma.scatter(core_bits) | rng.draw_mask(j->free_mask);
    }
    const auto& t = std::get<DtreeState>(state_);
    if (t.total == 0) throw EmptyFunctionError();
    std::uint64_t r = rng.below(t.total);
    size_t lo = 0, hi = t.cum.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (t.cum[mid] <= r)
        lo = mid;
      else
        hi = mid;
    }
    const Leaf& leaf = t.leaves[lo];
    return leaf.fixed_bits | rng.draw_mask(mask_n(n_) & ~leaf.fixed_mask);
  }

 private:
  struct DenseState {
    std::vector<std::uint32_t> sat;
  };
  struct JuntaState {
    std::unique_ptr<SatSampler> core;
    InjectiveMap sigma;
    std::uint64_t free_mask = 0;
  };
  struct Leaf {
    std::uint64_t fixed_mask = 0;
    std::uint64_t fixed_bits = 0;
  };
  struct DtreeState {
    std::vector<Leaf> leaves;
    std::vector<std::uint64_t> cum;  // cum[i] = weight before leaf i
    std::uint64_t total = 0;
  };

  void collect_leaves(const std::vector<DtNode>& nodes, int idx, std::uint64_t fm,
                      std::uint64_t fb, int depth, DtreeState& s) {
    const DtNode& nd = nodes[static_cast<size_t>(idx)];
    if (nd.var < 0) {
      if (nd.child[0]) {
        s.cum.push_back(s.total);
        s.leaves.push_back(Leaf{fm, fb});
        s.total += 1ULL << (n_ - depth);
      }
      return;
    }
    std::uint64_t bit = 1ULL << nd.var;
    collect_leaves(nodes, nd.child[0], fm | bit, fb, depth + 1, s);
    collect_leaves(nodes, nd.child[1], fm | bit, fb | bit, depth + 1, s);
  }

  int n_;
  std::variant<DenseState, JuntaState, DtreeState> state_;
};

}  // namespace detail

class QueryOracle {
 public:
  QueryOracle(BooleanFunction f, std::uint64_t seed)
      : f_(std::move(f)), rng_(seed), seed_(seed), count_(f_.count_satisfying()) {}

  int n() const { return f_.n(); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t satisfying_count() const { return count_; }
  const QueryStats& stats() const { return stats_; }
  Rng& rng() { return rng_; }

  bool mq_bits(std::uint64_t x) {
    ++stats_.mq_count;
    return f_.evaluate_bits(x);
  }

  bool mq(const Assignment& x) {
    if (x.n != f_.n()) throw std::invalid_argument("mq: dimension mismatch");
    return mq_bits(x.bits);
  }

  std::uint64_t sample_bits() {
    if (count_ == 0) throw EmptyFunctionError();
    if (!sampler_) sampler_ = std::make_unique<detail::SatSampler>(f_);
    ++stats_.samp_count;
    return sampler_->draw(rng_);
  }

  Assignment sample_satisfying() { return Assignment(f_.n(), sample_bits()); }

  const BooleanFunction& function() const { return f_; }

 private:
  BooleanFunction f_;
  Rng rng_;
  std::uint64_t seed_;
  std::uint64_t count_;
  QueryStats stats_;
  std::unique_ptr<detail::SatSampler> sampler_;
};

// View of a block restriction f^l(x) = f(v_{outside block} o x). Queries route
// through the parent oracle and are counted there. Inputs keep their original
// bit positions; only bits inside `block_mask` are read.
template <class Oracle>
struct BlockRestriction {
  Oracle* oracle;
  std::uint64_t block_mask;
  std::uint64_t witness;  // v^l

  bool operator()(std::uint64_t x) const {
    return oracle->mq_bits((witness & ~block_mask) | (x & block_mask));
  }
};

}  // namespace reltest
