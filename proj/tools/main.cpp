#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "ampdist/runner.hpp"

using ampdist::ExperimentConfig;

namespace {

struct Shared {
  std::string output;
  std::string format = "json";
};

void add_common(CLI::App* sub, ExperimentConfig& c, Shared& s) {
  sub->add_option("--seed", c.seed, "base seed; trial t uses seed + t");
  sub->add_option("--trials", c.trials, "number of independent trials")->check(CLI::PositiveNumber);
  sub->add_option("--parallel", c.parallel, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("-o,--output", s.output, "output file (default: $AMPDIST_OUTPUT_DIR/<command>.<ext> or stdout)");
  sub->add_flag("--timing", c.timing, "include wall time in the report");
}

void add_distribution(CLI::App* sub, ExperimentConfig& c, bool required = true) {
  auto* opt = sub->add_option("--input", c.input, "input file (JSON list)");
  if (required) opt->required();
  sub->add_option("--input-kind", c.input_kind, "weights, array or amplitudes")
      ->check(CLI::IsMember({"weights", "array", "amplitudes"}));
}

void add_filter_knobs(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--relaxed-k", c.relaxed_k, "override the majority size (may break guarantees)");
  sub->add_option("--precision", c.precision, "override the stage-one estimation precision");
  sub->add_option("--engine", c.engine, "auto, full or factored")->check(CLI::IsMember({"auto", "full", "factored"}));
}

std::string default_path(const std::string& command, const std::string& ext) {
  const char* dir = std::getenv(ampdist::kOutputDirEnv);
  if (!dir || !*dir) return {};
  return (std::filesystem::path(dir) / (command + "." + ext)).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Amplitude and distribution property estimation on a statevector simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ampdist 0.1.0");

  ExperimentConfig c;
  Shared s;

  auto* qae = app.add_subcommand("qae", "canonical amplitude estimation");
  qae->add_option("--m", c.m, "estimation qubits")->required();
  qae->add_option("--p", c.p, "Bernoulli probability of the good state");
  add_distribution(qae, c, false);
  qae->add_option("--target", c.target, "marked outcome when --input is used");

  auto* tae = app.add_subcommand("true-amp-est", "estimate a complex amplitude");
  tae->add_option("--alpha-re", c.alpha_re, "real part")->required();
  tae->add_option("--alpha-im", c.alpha_im, "imaginary part");
  tae->add_option("--eps", c.eps)->required();
  tae->add_option("--delta", c.delta)->required();
  tae->add_option("--backend", c.backend, "qae or mdist")->check(CLI::IsMember({"qae", "mdist"}));

  auto* mda = app.add_subcommand("mdist-audit", "query-count audit of multi-distribution estimation");
  mda->add_option("--m", c.m)->required();
  mda->add_option("--k", c.k, "calls to W per branch");
  mda->add_option("--branches", c.branches, "index-register sizes")->delimiter(',');

  auto* baa = app.add_subcommand("biased-aa", "amplitude amplification with a biased oracle");
  baa->add_option("--n", c.n, "input qubits")->required();
  baa->add_option("--p", c.p, "oracle correctness")->required();
  baa->add_option("--good", c.good, "planted solutions")->delimiter(',');
  baa->add_option("--lambda", c.lambda, "lower bound on the good mass")->required();
  baa->add_option("--delta", c.delta)->required();
  baa->add_option("--relaxed-k", c.relaxed_k);
  baa->add_option("--engine", c.engine)->check(CLI::IsMember({"auto", "full", "factored"}));
  baa->add_flag("--verify", c.verify, "repeat with a classical check of the witness");

  auto* pf = app.add_subcommand("profil", "probability threshold filter");
  auto* af = app.add_subcommand("ampfil", "amplitude threshold filter");
  for (auto* sub : {pf, af}) {
    add_distribution(sub, c);
    sub->add_option("--tau", c.tau)->required();
    sub->add_option("--eps", c.eps)->required();
    sub->add_option("--delta", c.delta)->required();
    add_filter_knobs(sub, c);
  }
  af->add_option("--mode", c.mode, "real, signed or complex")->check(CLI::IsMember({"real", "signed", "complex"}));

  auto* kd = app.add_subcommand("kdist", "k-distinctness on an integer array");
  kd->add_option("--input", c.input, "JSON integer list")->required();
  kd->add_option("--k", c.k)->required();
  kd->add_option("--delta", c.delta);
  add_filter_knobs(kd, c);

  auto* md = app.add_subcommand("mode", "modal outcome under a gap promise");
  add_distribution(md, c);
  md->add_option("--gap", c.gap)->required();
  md->add_option("--delta", c.delta)->required();
  add_filter_knobs(md, c);

  auto* nl = app.add_subcommand("nonlin", "nonlinearity of a Boolean function");
  nl->add_option("--truth-table", c.truth_table, "file with a 0/1 string of length 2^n")->required();
  nl->add_option("--lambda", c.lambda)->required();
  nl->add_option("--delta", c.delta)->required();
  add_filter_knobs(nl, c);

  auto* st = app.add_subcommand("selftest", "quick internal consistency checks");

  for (auto* sub : {qae, tae, mda, baa, pf, af, kd, md, nl, st}) add_common(sub, c, s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ampdist::kExitConfig;
  }

  c.command = app.get_subcommands().front()->get_name();
  c.format = s.format == "csv" ? ampdist::OutputFormat::Csv : ampdist::OutputFormat::Json;

  try {
    const auto report = ampdist::run_experiment(c);
    const std::string text = ampdist::render(report, c.format);
    std::string path = s.output.empty() ? default_path(c.command, s.format) : s.output;
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw ampdist::ConfigError("cannot write " + path);
      out << text;
    }
    if (c.command == "selftest" || c.command == "mdist-audit") {
      for (const auto& t : report["trials"]) {
        if (!t["pass"].get<bool>()) return ampdist::kExitFailure;
      }
    }
    return ampdist::kExitOk;
  } catch (const ampdist::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return ampdist::kExitParse;
  } catch (const ampdist::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return ampdist::kExitBudget;
  } catch (const ampdist::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ampdist::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ampdist::kExitFailure;
  }
}
