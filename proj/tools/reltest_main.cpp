// reltest: relative-error testing of k-juntas and permutation-closed
// subclasses, with query-counting oracles and brute-force certification.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "reltest/harness.hpp"

namespace {

using reltest::CaseKind;
using reltest::ExperimentConfig;
using reltest::Rational;
using reltest::SubclassSpec;
using reltest::TesterKind;

struct RunFlags {
  std::string klass = "juntas";
  int n = 16;
  int k = 2;
  std::string eps = "0.1";
  int trials = 100;
  std::uint64_t seed = 1;
  std::string which;  // "", "yes", "no"
  std::string function_file;
  std::string out;
  double threshold = 0.60;
  int threads = 0;
  reltest::HarnessConstants consts;
  std::string config_file;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_class) {
  if (with_class)
    cmd->add_option("--class", f.klass, "class: dt|juntas|conj|parity")->capture_default_str();
  cmd->add_option("--n", f.n, "number of variables")->capture_default_str();
  cmd->add_option("--k", f.k, "junta arity / class size parameter")->capture_default_str();
  cmd->add_option("--eps", f.eps, "distance parameter in (0,1/2), e.g. 0.1 or 1/10")
      ->capture_default_str();
  cmd->add_option("--trials", f.trials, "independent trials")->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed")->capture_default_str();
  cmd->add_option("--case", f.which, "yes (members) or no (certified-far instances)");
  cmd->add_option("--function", f.function_file, "run on a fixed function from this file");
  cmd->add_option("--out", f.out, "write JSONL records here");
  cmd->add_option("--threshold", f.threshold, "Wilson lower-bound target")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (0 = RELTEST_THREADS or auto)");
  cmd->add_option("--c-T", f.consts.c_T, "junta tester T constant")->capture_default_str();
  cmd->add_option("--c-M", f.consts.c_M, "junta tester M constant")->capture_default_str();
  cmd->add_option("--c-h", f.consts.c_h, "junta tester h constant")->capture_default_str();
  cmd->add_option("--c1", f.consts.c1, "subclass tester T1 constant")->capture_default_str();
  cmd->add_option("--c-fv", f.consts.c_fv, "FindVarValue rounds constant")->capture_default_str();
  cmd->add_option("--c-uj", f.consts.c_uj, "UniformJunta rounds constant")->capture_default_str();
  cmd->add_option("--config", f.config_file, "load the full configuration from a JSON file");
}

ExperimentConfig config_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  ExperimentConfig cfg;
  std::string tester = j.value("tester", "junta");
  cfg.tester = tester == "subclass" ? TesterKind::Subclass : TesterKind::Junta;
  cfg.k = j.value("k", 2);
  cfg.spec = SubclassSpec::from_id(j.value("class", "juntas"), cfg.k);
  cfg.n = j.value("n", 16);
  cfg.eps = Rational::parse(j.value("eps", "0.1"));
  cfg.trials = j.value("trials", 100);
  cfg.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("case") && !j["case"].is_null()) {
    std::string c = j["case"].get<std::string>();
    if (c == "yes")
      cfg.which = CaseKind::Yes;
    else if (c == "no")
      cfg.which = CaseKind::No;
    else if (!c.empty() && c != "none")
      throw std::runtime_error("config: case must be yes|no");
  }
  if (j.contains("function") && !j["function"].is_null())
    cfg.function_file = j["function"].get<std::string>();
  cfg.out_path = j.value("out", "");
  cfg.threshold = j.value("threshold", 0.60);
  cfg.threads = j.value("threads", 0);
  if (j.contains("constants")) {
    const auto& c = j["constants"];
    cfg.consts.c_T = c.value("c_T", cfg.consts.c_T);
    cfg.consts.c_M = c.value("c_M", cfg.consts.c_M);
    cfg.consts.c_h = c.value("c_h", cfg.consts.c_h);
    cfg.consts.c1 = c.value("c1", cfg.consts.c1);
    cfg.consts.c_fv = c.value("c_fv", cfg.consts.c_fv);
    cfg.consts.c_uj = c.value("c_uj", cfg.consts.c_uj);
  }
  return cfg;
}

ExperimentConfig config_from_flags(const RunFlags& f, TesterKind kind) {
  ExperimentConfig cfg;
  cfg.tester = kind;
  cfg.k = f.k;
  cfg.spec = SubclassSpec::from_id(kind == TesterKind::Junta ? "juntas" : f.klass, f.k);
  cfg.n = f.n;
  cfg.eps = Rational::parse(f.eps);
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  if (f.which == "yes")
    cfg.which = CaseKind::Yes;
  else if (f.which == "no")
    cfg.which = CaseKind::No;
  else if (!f.which.empty())
    throw std::runtime_error("--case must be yes or no");
  if (!f.function_file.empty()) cfg.function_file = f.function_file;
  cfg.out_path = f.out;
  cfg.threshold = f.threshold;
  cfg.threads = f.threads;
  cfg.consts = f.consts;
  return cfg;
}

int run_command(const RunFlags& flags, TesterKind kind) {
  ExperimentConfig cfg = flags.config_file.empty() ? config_from_flags(flags, kind)
                                                   : config_from_json(flags.config_file);
  std::optional<std::ofstream> file;
  std::ostream* sink = nullptr;
  if (!cfg.out_path.empty()) {
    file.emplace(cfg.out_path, std::ios::trunc);
    if (!*file) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    sink = &*file;
  }
  reltest::ExperimentSummary s = reltest::run_experiment(cfg, nullptr, sink);
  std::cout << reltest::summary_to_json(cfg, s) << "\n";
  return s.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relative-error property testing of k-juntas and junta subclasses"};
  app.require_subcommand(1);

  RunFlags junta_flags;
  CLI::App* junta = app.add_subcommand("junta", "run the relative-error k-junta tester");
  add_run_flags(junta, junta_flags, false);

  RunFlags sub_flags;
  sub_flags.n = 10;
  sub_flags.eps = "0.2";
  sub_flags.klass = "dt";
  CLI::App* subclass = app.add_subcommand("subclass", "run the junta-subclass tester");
  add_run_flags(subclass, sub_flags, true);

  std::string cert_function, cert_class = "juntas";
  int cert_k = 2;
  CLI::App* certify =
      app.add_subcommand("certify", "print the exact rel-dist from a function to a class");
  certify->add_option("--function", cert_function, "function file")->required();
  certify->add_option("--class", cert_class, "class: dt|juntas|conj|parity")
      ->capture_default_str();
  certify->add_option("--k", cert_k, "class size parameter")->capture_default_str();

  std::string ap_class = "dt", ap_kappa = "1/20", ap_dump;
  int ap_k = 2, ap_h = 1, ap_n = 0;
  CLI::App* approx = app.add_subcommand("approx", "build and dump Approx(h, kappa)");
  approx->set_help_flag("--help", "print help");  // frees -h/--h for the arity option
  approx->add_option("--class", ap_class, "class: dt|juntas|conj|parity")->capture_default_str();
  approx->add_option("--k", ap_k, "class size parameter")->capture_default_str();
  approx->add_option("--h", ap_h, "approximator arity (0..k)")->capture_default_str();
  approx->add_option("--kappa", ap_kappa, "inclusion threshold, e.g. 1/20")
      ->capture_default_str();
  approx->add_option("--n", ap_n, "ambient variable count (default k)");
  approx->add_option("--dump", ap_dump, "write members here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(junta)) return run_command(junta_flags, TesterKind::Junta);
    if (app.got_subcommand(subclass)) return run_command(sub_flags, TesterKind::Subclass);
    if (app.got_subcommand(certify)) {
      reltest::BooleanFunction f = reltest::load_function_file(cert_function);
      SubclassSpec spec = SubclassSpec::from_id(cert_class, cert_k);
      auto [dist, witness] = reltest::rel_dist_to_subclass(f, spec);
      std::cout << "rel-dist = " << dist.value.to_string() << " (~" << dist.value.to_double()
                << ")\n";
      std::cout << "witness: " << reltest::format_function(witness) << "\n";
      return 0;
    }
    if (app.got_subcommand(approx)) {
      SubclassSpec spec = SubclassSpec::from_id(ap_class, ap_k);
      if (ap_n == 0) ap_n = ap_k;
      reltest::ApproxSet set =
          reltest::build_approx(spec, ap_h, Rational::parse(ap_kappa), ap_n);
      if (ap_dump.empty()) {
        reltest::dump_approx(set, std::cout);
      } else {
        std::ofstream out(ap_dump, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open dump file: " + ap_dump);
        reltest::dump_approx(set, out);
      }
      std::cerr << "approx members: " << set.members.size() << " (|C(k)*| = "
                << reltest::core_count(spec) << ")\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
