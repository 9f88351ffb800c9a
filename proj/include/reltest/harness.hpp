#pragma once

// Instance generation with brute-force certification, repeated-trial
// statistics, and the experiment runner behind the CLI.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "reltest/junta_tester.hpp"
#include "reltest/subclass_catalog.hpp"
#include "reltest/subclass_tester.hpp"

namespace reltest {

enum class TesterKind { Junta, Subclass };
enum class CaseKind { Yes, No };

struct HarnessConstants {
  double c_T = 6.0, c_M = 24.0, c_h = 8.0;  // junta tester
  double c1 = 10.0;                         // subclass tester
  double c_fv = 2.0;                        // FindVarValue
  double c_uj = 12.0;                       // UniformJunta rounds
};

struct ExperimentConfig {
  TesterKind tester = TesterKind::Junta;
  SubclassSpec spec;  // class under test; the junta tester uses {juntas, k}
  int n = 16;
  int k = 2;
  Rational eps = Rational(1, 10);
  int trials = 100;
  std::uint64_t seed = 1;
  HarnessConstants consts;
  std::optional<CaseKind> which;
  std::optional<std::string> function_file;
  std::string out_path;     // empty: no JSONL file
  double threshold = 0.60;  // Wilson 95% lower-bound target for the correct verdict
  int threads = 0;          // 0: RELTEST_THREADS or hardware concurrency
};

struct TrialRecord {
  int trial = 0;
  int instance = 0;
  std::string truth;  // "member", "far" or "unknown"
  std::optional<Rational> certificate;
  TesterVerdict verdict;
  std::uint64_t seed = 0;
  double wall_ms = 0;  // in-memory only; omitted from JSONL so output is reproducible
};

struct ExperimentSummary {
  int trials = 0;
  int accepts = 0;
  double accept_rate = 0;
  // Correct-verdict rate and its Wilson 95% interval; equals the accept rate
  // when no case is declared.
  double correct_rate = 0, wilson_lo = 0, wilson_hi = 0;
  double mq_mean = 0, samp_mean = 0, total_mean = 0;
  std::uint64_t mq_max = 0, samp_max = 0, total_max = 0;
  long long budget = 0;
  std::map<std::string, int> phase_hist;  // "phase/reason" -> count
  bool pass = true;
  std::string note;
};

double wilson_lower(int successes, int trials, double z = 1.959964);
double wilson_upper(int successes, int trials, double z = 1.959964);

// Uniform-ish member of C(k) over n variables: a random core from C(k)*
// placed on a random k-subset of the variables.
BooleanFunction generate_member(const SubclassSpec& spec, int n, Rng& rng);

struct FarInstance {
  BooleanFunction f;
  Rational certificate;  // exact rel_dist(f, C(k)), > eps
};

// Candidate generators (parity on k+1 placed variables, member with planted
// noise, random dense table) filtered by exact certification
// rel_dist(f, C(k)) > eps. Throws after 200 failed attempts.
FarInstance generate_far(const SubclassSpec& spec, int n, const Rational& eps, Rng& rng);

std::string record_to_json(const TrialRecord& r);
std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentSummary& s);

// Runs cfg.trials independent trials (one fresh oracle each, seeds derived
// from (seed, trial id)), deterministically and in parallel. Writes one JSONL
// line per trial plus a final summary line when a sink is given.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::vector<TrialRecord>* records_out = nullptr,
                                 std::ostream* jsonl_out = nullptr);

}  // namespace reltest
