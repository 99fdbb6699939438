#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ampdist/filters.hpp"

namespace ampdist {

// ---- arrays ----

std::map<Index, std::size_t> brute_force_freq(const std::vector<Index>& values);

// O_D|0> = n^{-1/2} sum_i |A_i>|i>: value register on the low qubits, index register as
// the ancilla. Padded index branches get zero amplitude; `alphabet` 0 means the
// smallest power of two above every value.
DistributionOracle array_to_oracle(const std::vector<Index>& values, Index alphabet = 0);

struct KDistResult {
  bool answer = false;
  std::optional<Index> witness;
  bool truth = false;
  double exact_success_prob = 0;
  FilterOutcome filter;
};

// Does some value occur at least k times? ProFil at tau = k/n, eps = 1/n.
KDistResult kdistinctness(const std::vector<Index>& values, int k, double delta, const FilterOptions& options = {});

// ---- binary searches ----

struct SearchRound {
  double tau = 0;
  bool yes = false;
  bool queried = true;  // false when the answer was forced without a filter call
};

struct ModeResult {
  std::optional<Index> mode;
  double estimate = 0;
  Index true_mode = 0;
  double true_max = 0;
  double exact_success_prob = 0;
  int rounds = 0;
  double eps_per_call = 0;
  double delta_per_call = 0;
  std::vector<SearchRound> path;
  QueryLedger queries;  // along the sampled path
};

// Modal outcome under a gap promise g between the two largest probabilities.
ModeResult mode_search(const DistributionOracle& od, double gap, double delta, const FilterOptions& options = {});

// ---- Boolean functions ----

struct BooleanFunction {
  int n = 0;
  std::vector<std::uint8_t> table;  // table[x] = f(x)

  bool operator()(Index x) const { return table[x] != 0; }
  // Text truth table of length 2^n; position i is the input whose binary value is i.
  static BooleanFunction parse(const std::string& text);
  static BooleanFunction from_predicate(int n, const std::function<bool(Index)>& f);
};

inline constexpr int kMaxWalshArity = 16;

// f-hat(x) = 2^{-n} sum_z (-1)^{f(z) + x.z}
std::vector<double> walsh_spectrum(const BooleanFunction& f);
double max_walsh(const BooleanFunction& f);
double nonlinearity_value(const BooleanFunction& f);

// H, phase query to f, H: |0> -> sum_x f-hat(x)|x>. `phase` counts the f queries.
struct DjOracle {
  OracleFactory prep;
  OracleFactory phase;
};
DjOracle dj_prep(const BooleanFunction& f);

struct NonlinResult {
  double estimate = 0;
  double eta = 0;
  double fmax_estimate = 0;
  double fmax = 0;
  double exact_success_prob = 0;
  int rounds = 0;
  double delta_per_call = 0;
  std::vector<SearchRound> path;
  QueryLedger queries;  // DJ-prep calls (one f query each) along the sampled path
};

NonlinResult nonlinearity(const BooleanFunction& f, double lambda, double delta, const FilterOptions& options = {});

}  // namespace ampdist
