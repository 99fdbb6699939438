#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ampdist/apps.hpp"
#include "json.hpp"

namespace ampdist {

enum class OutputFormat { Json, Csv };

enum ExitStatus : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitParse = 3, kExitBudget = 4 };

inline constexpr const char* kOutputDirEnv = "AMPDIST_OUTPUT_DIR";

struct ExperimentConfig {
  std::string command;
  std::string input;                    // path to the input file
  std::string input_kind = "weights";   // weights | array | amplitudes
  std::string truth_table;              // path (nonlin)
  std::optional<double> tau, eps, delta, lambda, gap, p, alpha_re, alpha_im;
  std::optional<int> k, m, n, relaxed_k, precision;
  std::optional<Index> target;
  std::vector<int> branches;            // mdist-audit index sizes
  std::vector<Index> good;              // biased-aa planted inputs
  std::string mode = "real";            // real | signed | complex
  std::string engine = "auto";          // auto | full | factored
  std::string backend = "qae";          // qae | mdist
  bool verify = false;
  std::uint64_t seed = 0;
  int trials = 1;
  int parallel = 1;
  bool timing = false;
  OutputFormat format = OutputFormat::Json;

  nlohmann::json to_json() const;
  // Range checks that need no simulation; throws ConfigError.
  void validate() const;
};

// Input parsing; ParseError on malformed content, ConfigError on unreadable paths.
std::string read_text_file(const std::string& path);
std::vector<Index> parse_array(const std::string& text);
std::vector<double> parse_weights(const std::string& text);
// Numbers or [re, im] pairs.
std::vector<Complex> parse_amplitudes(const std::string& text);

nlohmann::json ledger_json(const QueryLedger& l);

// One seeded run of the configured algorithm.
nlohmann::json run_trial(const ExperimentConfig& config, std::uint64_t seed);
// All trials (seed + t for trial t) over `parallel` workers, plus config echo and summary.
nlohmann::json run_experiment(const ExperimentConfig& config);
std::string render(const nlohmann::json& report, OutputFormat format);

// Quick internal checks; each entry has a name and a pass flag.
nlohmann::json selftest();

}  // namespace ampdist
