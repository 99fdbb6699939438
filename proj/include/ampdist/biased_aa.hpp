#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ampdist/unitary.hpp"

namespace ampdist {

// Flag statistics of one oracle application: Pr[flag = 1 | x] for each basis input,
// plus the ledger of the oracle(s) it queries during one forward application.
struct FlagProfile {
  std::vector<double> flag_one;
  QueryLedger per_call;
};

// A marking oracle that is only correct with probability >= p on every input.
// `bind` places it on an input register and a scratch register; the flag is the
// scratch qubit at `flag_offset`. `goodness` is the reference predicate, used by
// tests and analysis only.
struct BiasedOracle {
  using Binder = std::function<UnitaryPtr(const Register& input, const Register& scratch)>;

  std::string label = "O_p";
  int input_width = 0;
  int scratch_width = 1;
  int flag_offset = 0;
  double p = 1.0;
  std::function<bool(Index)> goodness;
  Binder bind;
  // Ledger of whatever the oracle queries internally.
  std::function<QueryLedger()> ledger;
  // Optional closed route to the flag statistics; when empty they are simulated.
  std::function<FlagProfile()> profile_override;

  FlagProfile profile() const;
  void validate() const;
};

// Per-input flag probabilities given exactly (rotation on the flag qubit per x).
BiasedOracle synthetic_oracle(int input_width, std::vector<double> flag_one, std::function<bool(Index)> goodness);
// Uniform bias: good inputs read 1 with probability p, bad inputs with 1 - p.
BiasedOracle synthetic_oracle(int input_width, double p, std::function<bool(Index)> goodness);

// Smallest odd k with k >= 2p/(p - 1/2)^2 ln(1/delta_prime).
int choose_k(double p, double delta_prime);

struct BiasedAAParams {
  int k = 1;
  double delta = 0.1;
  double lambda = 1.0;
  double delta_prime = 0.0;
  bool relaxed = false;
};

BiasedAAParams make_params(double p, double lambda, double delta, std::optional<int> relaxed_k = std::nullopt);

// A-hat over [A register | k scratch copies | majority qubit].
struct BoostedPrep {
  RegisterLayout layout;
  Register prep;
  Register input;  // low input_width qubits of prep
  std::vector<Register> copies;
  Register majority;
  UnitaryPtr op;
  int qubits() const { return layout.width(); }
};

BoostedPrep build_boosted_prep(const OracleFactory& a, const BiasedOracle& oracle, int k);

// Fixed-point schedule with L = 2 * iterations + 1 oracle-phase steps.
inline constexpr double kFixedPointConstant = 1.0;  // iterations <= C * ln(2/delta)/sqrt(lambda)

struct FpaaSchedule {
  double lambda = 1;
  double delta = 0.1;  // target failure probability
  int iterations = 0;
  std::vector<double> alpha;  // in application order
  std::vector<double> beta;
  int length() const { return 2 * iterations + 1; }
};

int fpaa_iteration_cap(double lambda, double delta);
FpaaSchedule fpaa_schedule(double lambda, double delta);
// Closed-form success probability of the schedule at initial good mass w.
double fpaa_success_formula(const FpaaSchedule& schedule, double w);

// Two-level evolution: returns final amplitudes on the normalized good and bad components.
std::pair<Complex, Complex> fpaa_two_level(const FpaaSchedule& schedule, double w);

// Runs the schedule on a full state that starts at |0>: prep, then the phased
// iterations. `zero_mask` is the prep's register, `flag` the target qubit.
void fpaa_full(StateVector& s, const Unitary& prep, Index zero_mask, int flag, const FpaaSchedule& schedule);

enum class AmplifyEngine { Auto, Full, Factored };

struct AmplifyOptions {
  AmplifyEngine engine = AmplifyEngine::Auto;
  std::optional<int> relaxed_k;
  std::function<bool(Index)> verifier;  // classical witness check, optional
  std::uint64_t seed = 0;
  int full_qubit_limit = 22;
};

struct AmplifyOutcome {
  bool witness_found = false;
  Index witness = 0;
  bool solution_exists = false;
  double flag_one_prob = 0;               // after amplification
  double exact_success_prob = 0;          // verdict correct
  double witness_good_given_flag = 0;     // Pr[witness good | flag = 1]
  double initial_good_mass = 0;           // flag mass of A-hat|0>
  double max_flag_error = 0;              // worst per-input majority error
  std::vector<double> witness_distribution;  // Pr[flag = 1, x]
  BiasedAAParams params;
  int iterations = 0;
  int repetitions = 1;
  int qubits = 0;                         // width of the A-hat register set
  AmplifyEngine engine_used = AmplifyEngine::Factored;
  QueryLedger prep_calls;
  QueryLedger oracle_calls;               // ledger of the biased oracle's internal queries
  std::uint64_t oracle_applications = 0;  // forward + inverse applications of the biased oracle
};

AmplifyOutcome errored_amplify(const OracleFactory& a, const BiasedOracle& oracle, double lambda, double delta,
                               const AmplifyOptions& options = {});

// Swaps forward and inverse entries (the ledger of an adjoint application).
QueryLedger reversed(const QueryLedger& l);

}  // namespace ampdist
