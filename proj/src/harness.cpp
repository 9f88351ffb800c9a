#include "reltest/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace reltest {

namespace {

using ordered_json = nlohmann::ordered_json;

int resolve_threads(int requested, int trials) {
  int t = requested;
  if (t <= 0) {
    if (const char* env = std::getenv("RELTEST_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  if (t <= 0) t = 1;
  return std::max(1, std::min(t, trials));
}

std::vector<int> random_support(int n, int k, Rng& rng) {
  std::vector<int> pool(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  std::vector<int> support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  return support;
}

BooleanFunction parity_function(int n, std::uint64_t vars_mask) {
  std::vector<std::uint64_t> words(BooleanFunction::table_words(n), 0);
  std::uint64_t total = 1ULL << n;
  for (std::uint64_t x = 0; x < total; ++x)
    if (popcount64(x & vars_mask) & 1) words[x >> 6] |= 1ULL << (x & 63);
  return BooleanFunction::dense(n, std::move(words));
}

}  // namespace

double wilson_lower(int successes, int trials, double z) {
  if (trials == 0) return 0.0;
  double p = static_cast<double>(successes) / trials;
  double z2 = z * z;
  double denom = 1.0 + z2 / trials;
  double center = p + z2 / (2.0 * trials);
  double margin = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  return (center - margin) / denom;
}

double wilson_upper(int successes, int trials, double z) {
  if (trials == 0) return 1.0;
  double p = static_cast<double>(successes) / trials;
  double z2 = z * z;
  double denom = 1.0 + z2 / trials;
  double center = p + z2 / (2.0 * trials);
  double margin = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  return (center + margin) / denom;
}

BooleanFunction generate_member(const SubclassSpec& spec, int n, Rng& rng) {
  if (n < spec.k) throw std::invalid_argument("generate_member: n < k");
  const auto& tables = core_tables(spec);
  std::uint64_t table = tables[rng.below(tables.size())];
  std::vector<int> support = random_support(n, spec.k, rng);
  std::vector<std::uint64_t> words{table};
  return BooleanFunction::junta(n, InjectiveMap(n, support),
                                BooleanFunction::dense(spec.k, std::move(words)));
}

FarInstance generate_far(const SubclassSpec& spec, int n, const Rational& eps, Rng& rng) {
  if (n > 14) throw std::invalid_argument("generate_far: certification needs n <= 14");
  constexpr int kRetryBudget = 200;
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    BooleanFunction f = BooleanFunction::constant(n, false);
    switch (attempt % 3) {
      case 0: {  // parity on k+1 placed variables
        int arity = std::min(spec.k + 1, n);
        std::vector<int> vars = random_support(n, arity, rng);
        std::uint64_t mask = 0;
        for (int v : vars) mask |= 1ULL << v;
        f = parity_function(n, mask);
        break;
      }
      case 1: {  // member with planted satisfier noise
        std::vector<std::uint64_t> words = dense_words(generate_member(spec, n, rng));
        std::uint64_t ones = 0;
        for (std::uint64_t w : words) ones += static_cast<std::uint64_t>(popcount64(w));
        std::uint64_t total = 1ULL << n;
        double target = 2.0 * eps.to_double() * static_cast<double>(std::max<std::uint64_t>(ones, total / 8));
        std::uint64_t flips = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(target) * (1 + attempt / 6));
        for (std::uint64_t i = 0; i < flips; ++i) {
          std::uint64_t pos = rng.below(total);
          words[pos >> 6] ^= 1ULL << (pos & 63);
        }
        f = BooleanFunction::dense(n, std::move(words));
        break;
      }
      default: {  // random dense table, varying density
        std::vector<std::uint64_t> words(BooleanFunction::table_words(n));
        int density = 1 + static_cast<int>(rng.below(3));  // AND of 1..3 random words
        for (auto& w : words) {
          w = rng.next();
          for (int d = 1; d < density; ++d) w &= rng.next();
        }
        std::uint64_t total = 1ULL << n;
        if (total < 64) words[0] &= mask_n(static_cast<int>(total));
        f = BooleanFunction::dense(n, std::move(words));
        break;
      }
    }
    if (f.count_satisfying() == 0) continue;
    auto [dist, witness] = rel_dist_to_subclass(f, spec);
    (void)witness;
    if (dist.value > eps) return FarInstance{std::move(f), dist.value};
  }
  throw std::runtime_error("generate_far: retry budget exhausted without a certificate");
}

std::string record_to_json(const TrialRecord& r) {
  ordered_json j;
  j["trial"] = r.trial;
  j["instance"] = r.instance;
  j["truth"] = r.truth;
  if (r.certificate) j["certificate"] = r.certificate->to_string();
  j["verdict"] = r.verdict.accepted() ? "accept" : "reject";
  j["phase"] = phase_name(r.verdict.phase);
  j["reason"] = r.verdict.reason;
  j["mq"] = r.verdict.stats.mq_count;
  j["samp"] = r.verdict.stats.samp_count;
  j["total"] = r.verdict.stats.total();
  j["seed"] = r.seed;
  return j.dump();
}

std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentSummary& s) {
  ordered_json j;
  j["summary"] = true;
  j["tester"] = cfg.tester == TesterKind::Junta ? "junta" : "subclass";
  j["class"] = cfg.spec.id();
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["eps"] = cfg.eps.to_string();
  j["case"] = cfg.which ? (*cfg.which == CaseKind::Yes ? "yes" : "no") : "none";
  j["trials"] = s.trials;
  j["accepts"] = s.accepts;
  j["accept_rate"] = s.accept_rate;
  j["correct_rate"] = s.correct_rate;
  j["wilson_lo"] = s.wilson_lo;
  j["wilson_hi"] = s.wilson_hi;
  j["mq_mean"] = s.mq_mean;
  j["samp_mean"] = s.samp_mean;
  j["total_mean"] = s.total_mean;
  j["mq_max"] = s.mq_max;
  j["samp_max"] = s.samp_max;
  j["total_max"] = s.total_max;
  j["budget"] = s.budget;
  ordered_json hist = ordered_json::object();
  for (const auto& [key, count] : s.phase_hist) hist[key] = count;
  j["phase_hist"] = hist;
  j["pass"] = s.pass;
  if (!s.note.empty()) j["note"] = s.note;
  return j.dump();
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::vector<TrialRecord>* records_out,
                                 std::ostream* jsonl_out) {
  if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (cfg.k < 1) throw std::invalid_argument("run_experiment: k must be >= 1");
  if (cfg.spec.k != cfg.k) throw std::invalid_argument("run_experiment: spec.k != k");

  // Parameters are shared across trials; construction also validates the
  // analysis-side inequalities.
  std::optional<JuntaTesterParams> jp;
  std::optional<SubclassTesterParams> sp;
  long long budget = 0;
  if (cfg.tester == TesterKind::Junta) {
    jp = JuntaTesterParams::make(cfg.k, cfg.eps, cfg.consts.c_T, cfg.consts.c_M, cfg.consts.c_h,
                                 cfg.consts.c_uj);
    budget = jp->query_budget();
  } else {
    sp = SubclassTesterParams::make(cfg.spec, cfg.eps, cfg.consts.c1, cfg.consts.c_fv,
                                    cfg.consts.c_uj);
    budget = sp->query_budget();
  }

  // A file-backed instance is shared by all trials; certify it when a case is
  // declared (possible for n <= 12 only).
  std::optional<BooleanFunction> file_fn;
  std::optional<Rational> file_cert;
  if (cfg.function_file) {
    file_fn = load_function_file(*cfg.function_file);
    if (file_fn->n() != cfg.n)
      throw std::invalid_argument("run_experiment: function file arity != configured n");
    if (cfg.which) {
      if (cfg.n > 12)
        throw std::invalid_argument("run_experiment: cannot certify a declared case at n > 12");
      auto [dist, witness] = rel_dist_to_subclass(*file_fn, cfg.spec);
      (void)witness;
      if (*cfg.which == CaseKind::No) {
        if (!(dist.value > cfg.eps))
          throw std::invalid_argument("run_experiment: declared-far function is not eps-far");
        file_cert = dist.value;
      } else if (!dist.value.is_zero()) {
        throw std::invalid_argument("run_experiment: declared-member function is not in the class");
      }
    }
  }

  if (cfg.which && *cfg.which == CaseKind::No && !cfg.function_file && cfg.n > 14)
    throw std::invalid_argument(
        "run_experiment: far-instance certification needs n <= 14 (use --function for larger n)");

  std::vector<TrialRecord> records(static_cast<size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::mutex error_mu;
  std::string first_error;
  auto worker = [&]() {
    while (true) {
      int t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error.empty()) return;  // another trial already failed
      }
      try {
      std::uint64_t trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
      Rng gen_rng(mix_seed(trial_seed, 1));
      std::uint64_t oracle_seed = mix_seed(trial_seed, 2);

      TrialRecord rec;
      rec.trial = t;
      rec.instance = file_fn ? 0 : t;
      rec.seed = trial_seed;

      BooleanFunction f = BooleanFunction::constant(1, false);
      if (file_fn) {
        f = *file_fn;
        rec.truth = cfg.which ? (*cfg.which == CaseKind::Yes ? "member" : "far") : "unknown";
        rec.certificate = file_cert;
      } else if (!cfg.which || *cfg.which == CaseKind::Yes) {
        f = generate_member(cfg.spec, cfg.n, gen_rng);
        rec.truth = "member";
      } else {
        FarInstance far = generate_far(cfg.spec, cfg.n, cfg.eps, gen_rng);
        f = std::move(far.f);
        rec.truth = "far";
        rec.certificate = far.certificate;
      }

      auto t0 = std::chrono::steady_clock::now();
      QueryOracle o(std::move(f), oracle_seed);
      rec.verdict = jp ? junta_test(o, *jp) : subclass_test(o, *sp);
      rec.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      records[static_cast<size_t>(t)] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.empty())
          first_error = "trial " + std::to_string(t) + ": " + e.what();
      }
    }
  };

  int nthreads = resolve_threads(cfg.threads, cfg.trials);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw std::runtime_error("run_experiment: " + first_error);

  ExperimentSummary s;
  s.trials = cfg.trials;
  s.budget = budget;
  double mq_sum = 0, samp_sum = 0, tot_sum = 0;
  for (const TrialRecord& r : records) {
    if (r.verdict.accepted()) ++s.accepts;
    const QueryStats& st = r.verdict.stats;
    mq_sum += static_cast<double>(st.mq_count);
    samp_sum += static_cast<double>(st.samp_count);
    tot_sum += static_cast<double>(st.total());
    s.mq_max = std::max(s.mq_max, st.mq_count);
    s.samp_max = std::max(s.samp_max, st.samp_count);
    s.total_max = std::max(s.total_max, st.total());
    if (!r.verdict.accepted())
      ++s.phase_hist[std::string(phase_name(r.verdict.phase)) + "/" + r.verdict.reason];
  }
  s.accept_rate = static_cast<double>(s.accepts) / cfg.trials;
  s.mq_mean = mq_sum / cfg.trials;
  s.samp_mean = samp_sum / cfg.trials;
  s.total_mean = tot_sum / cfg.trials;

  int correct = s.accepts;
  if (cfg.which && *cfg.which == CaseKind::No) correct = cfg.trials - s.accepts;
  s.correct_rate = static_cast<double>(correct) / cfg.trials;
  s.wilson_lo = wilson_lower(correct, cfg.trials);
  s.wilson_hi = wilson_upper(correct, cfg.trials);

  if (s.total_max > static_cast<std::uint64_t>(budget)) {
    s.pass = false;
    s.note = "query budget exceeded";
  }
  if (cfg.which && s.wilson_lo < cfg.threshold) {
    s.pass = false;
    s.note += std::string(s.note.empty() ? "" : "; ") + "correct-verdict rate below threshold";
  }

  if (jsonl_out) {
    for (const TrialRecord& r : records) (*jsonl_out) << record_to_json(r) << "\n";
    (*jsonl_out) << summary_to_json(cfg, s) << "\n";
  }
  if (records_out) *records_out = std::move(records);
  return s;
}

}  // namespace reltest
