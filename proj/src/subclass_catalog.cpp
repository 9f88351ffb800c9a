#include "reltest/subclass_catalog.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>

namespace reltest {

namespace {

// Mask, within a 2^k-bit table, of the points x with x_v = 1.
std::uint64_t var_one_mask(int k, int v) {
  std::uint64_t m = 0;
  for (std::uint64_t x = 0; x < (1ULL << k); ++x)
    if ((x >> v) & 1ULL) m |= 1ULL << x;
  return m;
}

std::uint64_t table_mask(int k) { return mask_n(1 << k); }

// All truth tables of decision trees over the variables in avail_vars with at
// most max_leaves leaves, canonical recursive shape generation, deduplicated.
std::set<std::uint64_t> dt_tables(int k, std::uint64_t avail_vars, int max_leaves,
                                  std::map<std::pair<std::uint64_t, int>, std::set<std::uint64_t>>& memo) {
  auto key = std::make_pair(avail_vars, max_leaves);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::set<std::uint64_t> out;
  if (max_leaves >= 1) {
    out.insert(0);
    out.insert(table_mask(k));
  }
  if (max_leaves >= 2) {
    for (int v = 0; v < k; ++v) {
      if (!((avail_vars >> v) & 1ULL)) continue;
      std::uint64_t vmask = var_one_mask(k, v);
      std::uint64_t rest = avail_vars & ~(1ULL << v);
      for (int l0 = 1; l0 < max_leaves; ++l0) {
        auto left = dt_tables(k, rest, l0, memo);
        auto right = dt_tables(k, rest, max_leaves - l0, memo);
        for (std::uint64_t t0 : left)
          for (std::uint64_t t1 : right) out.insert((t0 & ~vmask) | (t1 & vmask));
      }
    }
  }
  memo[key] = out;
  return out;
}

std::vector<std::uint64_t> build_tables(const SubclassSpec& spec) {
  int k = spec.k;
  if (k < 1) throw std::invalid_argument("subclass: k must be >= 1");
  std::set<std::uint64_t> tables;
  switch (spec.name) {
    case SubclassName::Juntas: {
      if (k > 4) throw std::invalid_argument("subclass juntas: k > 4 not enumerable");
      std::uint64_t count = 1ULL << (1ULL << k);
      for (std::uint64_t t = 0; t < count; ++t) tables.insert(t);
      break;
    }
    case SubclassName::DecisionTrees: {
      if (k > 4) throw std::invalid_argument("subclass dt: k > 4 not enumerable");
      std::map<std::pair<std::uint64_t, int>, std::set<std::uint64_t>> memo;
      tables = dt_tables(k, mask_n(k), k, memo);
      break;
    }
    case SubclassName::Conjunctions: {
      if (k > 6) throw std::invalid_argument("subclass conj: k > 6 not supported");
      for (std::uint64_t vars = 0; vars < (1ULL << k); ++vars) {
        int c = popcount64(vars);
        for (std::uint64_t signs = 0; signs < (1ULL << c); ++signs) {
          std::uint64_t t = 0;
          for (std::uint64_t x = 0; x < (1ULL << k); ++x) {
            bool sat = true;
            int j = 0;
            for (int i = 0; i < k && sat; ++i) {
              if (!((vars >> i) & 1ULL)) continue;
              bool want = (signs >> j) & 1ULL;
              if ((((x >> i) & 1ULL) != 0) != want) sat = false;
              ++j;
            }
            if (sat) t |= 1ULL << x;
          }
          tables.insert(t);
        }
      }
      break;
    }
    case SubclassName::Parities: {
      if (k > 6) throw std::invalid_argument("subclass parity: k > 6 not supported");
      tables.insert(table_mask(k));  // the empty parity is taken as constant-1
      for (std::uint64_t vars = 1; vars < (1ULL << k); ++vars) {
        std::uint64_t t = 0;
        for (std::uint64_t x = 0; x < (1ULL << k); ++x)
          if (popcount64(x & vars) & 1) t |= 1ULL << x;
        tables.insert(t);
      }
      break;
    }
  }
  return std::vector<std::uint64_t>(tables.begin(), tables.end());
}

}  // namespace

std::string SubclassSpec::id() const {
  switch (name) {
    case SubclassName::Juntas: return "juntas";
    case SubclassName::DecisionTrees: return "dt";
    case SubclassName::Conjunctions: return "conj";
    case SubclassName::Parities: return "parity";
  }
  return "?";
}

SubclassSpec SubclassSpec::from_id(const std::string& id, int k) {
  SubclassSpec s;
  s.k = k;
  if (id == "juntas")
    s.name = SubclassName::Juntas;
  else if (id == "dt")
    s.name = SubclassName::DecisionTrees;
  else if (id == "conj")
    s.name = SubclassName::Conjunctions;
  else if (id == "parity")
    s.name = SubclassName::Parities;
  else
    throw std::invalid_argument("unknown class '" + id + "' (expected dt|juntas|conj|parity)");
  return s;
}

const std::vector<std::uint64_t>& core_tables(const SubclassSpec& spec) {
  struct CacheKey {
    SubclassName name;
    int k;
    bool operator<(const CacheKey& o) const {
      return name != o.name ? name < o.name : k < o.k;
    }
  };
  static std::map<CacheKey, std::vector<std::uint64_t>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace(CacheKey{spec.name, spec.k});
  if (inserted) it->second = build_tables(spec);
  return it->second;
}

ApproxSet build_approx(const SubclassSpec& spec, int h, const Rational& kappa, int n) {
  int k = spec.k;
  if (h < 0 || h > k) throw std::invalid_argument("build_approx: need 0 <= h <= k");
  if (n < k) throw std::invalid_argument("build_approx: need n >= k");
  ApproxSet out;
  out.h = h;
  out.kappa = kappa;
  std::uint64_t slice = 1ULL << (k - h);  // completions of the free k-cube coordinates
  std::set<std::uint64_t> seen;
  for (std::uint64_t f : core_tables(spec)) {
    std::uint64_t ones_k = static_cast<std::uint64_t>(popcount64(f));
    if (ones_k == 0) continue;  // rel-dist to an empty candidate is undefined
    std::vector<std::uint64_t> cnt(1ULL << h, 0);
    for (std::uint64_t x = 0; x < (1ULL << k); ++x)
      if ((f >> x) & 1ULL) ++cnt[x & mask_n(h)];
    std::uint64_t g = 0, sym = 0;
    for (std::uint64_t z = 0; z < (1ULL << h); ++z) {
      bool maj = 2 * cnt[z] > slice;  // ties go to 0
      if (maj) {
        g |= 1ULL << z;
        sym += slice - cnt[z];
      } else {
        sym += cnt[z];
      }
    }
    if (Rational(static_cast<long long>(sym), static_cast<long long>(ones_k)) <= kappa)
      seen.insert(g);
  }
  for (std::uint64_t g : seen)
    out.members.push_back(ApproxMember{g, static_cast<std::uint32_t>(popcount64(g))});
  return out;
}

void dump_approx(const ApproxSet& set, std::ostream& out) {
  for (const ApproxMember& m : set.members) {
    std::vector<std::uint64_t> words{m.table};
    out << table_to_hex(words, set.h) << " " << m.ones << "\n";
  }
}

BooleanFunction lift_member(std::uint64_t table, int h, const InjectiveMap& sigma) {
  if (sigma.h != h) throw std::invalid_argument("lift_member: arity mismatch");
  if (h == 0) return BooleanFunction::constant(sigma.n, table & 1ULL);
  std::vector<std::uint64_t> words{table};
  return BooleanFunction::junta(sigma.n, sigma, BooleanFunction::dense(h, std::move(words)));
}

std::pair<RelDistResult, BooleanFunction> rel_dist_to_subclass(const BooleanFunction& f,
                                                               const SubclassSpec& spec) {
  int n = f.n();
  int k = spec.k;
  if (n < k) throw std::invalid_argument("rel_dist_to_subclass: n < k");
  std::vector<std::uint64_t> fw = dense_words(f);
  std::uint64_t ones = detail::popcount_words(fw);
  if (ones == 0) throw EmptyFunctionError();

  std::uint64_t cell_size = 1ULL << (n - k);
  std::uint64_t best_sym = ~0ULL;
  std::vector<int> best_support;
  std::uint64_t best_table = 0;
  const auto& tables = core_tables(spec);
  for_each_subset(n, k, [&](const std::vector<int>& support) {
    std::vector<std::uint64_t> cnt = detail::cell_counts(fw, n, support);
    if (spec.name == SubclassName::Juntas) {
      // The per-cell majority table is the unconstrained argmin.
      std::uint64_t sym = 0, t = 0;
      for (std::uint64_t c = 0; c < cnt.size(); ++c) {
        if (2 * cnt[c] > cell_size) {
          t |= 1ULL << c;
          sym += cell_size - cnt[c];
        } else {
          sym += cnt[c];
        }
      }
      if (sym < best_sym) {
        best_sym = sym;
        best_support = support;
        best_table = t;
      }
      return;
    }
    for (std::uint64_t t : tables) {
      std::uint64_t sym = 0;
      for (std::uint64_t c = 0; c < cnt.size(); ++c)
        sym += ((t >> c) & 1ULL) ? cell_size - cnt[c] : cnt[c];
      if (sym < best_sym) {
        best_sym = sym;
        best_support = support;
        best_table = t;
      }
    }
  });

  RelDistResult r;
  r.sym_diff = best_sym;
  r.f_ones = ones;
  r.value = Rational(static_cast<long long>(best_sym), static_cast<long long>(ones));
  std::vector<std::uint64_t> words{best_table};
  BooleanFunction witness = BooleanFunction::junta(
      n, InjectiveMap(n, best_support), BooleanFunction::dense(k, std::move(words)));
  return {r, std::move(witness)};
}

bool simple2_check(const BooleanFunction& f, const ApproxMember& g, int h,
                   const InjectiveMap& sigma, const Rational& kappa, const SubclassSpec& spec) {
  BooleanFunction lifted = lift_member(g.table, h, sigma);
  Rational to_g = rel_dist(f, lifted).value;
  if (to_g > Rational(1, 1)) throw PreconditionError("simple2_check: rel_dist(f, g_sigma) > 1");
  Rational lhs = rel_dist_to_subclass(f, spec).first.value;
  return lhs <= to_g + Rational(4, 1) * kappa;
}

}  // namespace reltest
