#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ampdist/biased_aa.hpp"
#include "ampdist/hadamard_est.hpp"

namespace ampdist {

// O_D on [outcome | ancilla]: prep|0> = sum_x alpha_x |x>|0> + (rest). `probs` are the
// outcome marginals, `amps` the amplitudes with the ancilla at zero.
struct DistributionOracle {
  int outcome_width = 0;
  int ancilla_width = 0;
  OracleFactory prep;
  std::vector<double> probs;
  std::vector<Complex> amps;

  Index outcomes() const { return bit(outcome_width); }
  int width() const { return outcome_width + ancilla_width; }
  double max_prob() const;
  double max_modulus() const;
  void validate() const;
};

// Reads the exact tables off a simulation of `prep` (on a fresh ledger).
DistributionOracle make_distribution_oracle(OracleFactory prep, int outcome_width);
// Non-negative weights, normalized; amplitudes sqrt(p_x), no ancilla.
DistributionOracle weights_oracle(const std::vector<double>& weights);
// Explicit amplitude vector (normalized internally), no ancilla.
DistributionOracle amplitudes_oracle(const std::vector<Complex>& amps);

enum class FilterVariant { Prob, Amp };
// Which quantity the amplitude filter thresholds: Re alpha >= tau; |Re alpha| >= tau
// (both tails); or |alpha| from separate real and imaginary pipelines.
enum class AmpMode { Real, Signed, Complex };

struct FilterParams {
  double tau = 0.5;
  double eps = 0.1;
  double delta = 0.1;
  FilterVariant variant = FilterVariant::Prob;
  int q = 0;
  int l = 0;
  double tau_prime = 0;
  Index tau1 = 0;
  double tau2_target = 0;  // lower-tail threshold in the estimate domain (signed mode)
  Index tau2 = 0;

  // Overrides the estimation width (tests at small precision); recomputes tau1, tau2.
  FilterParams with_precision(int width) const;
  void validate() const;
};

FilterParams make_filter_params(double tau, double eps, double delta, FilterVariant variant);

// Per-input distribution of the raw Stage-1 estimate, read from one run with the input
// register in uniform superposition (the run is block diagonal in the input).
struct StageOneTable {
  int l = 0;
  std::vector<std::vector<double>> raw;  // raw[x][a]
  QueryLedger per_call;                  // O_D calls of one forward application
  QueryLedger marker_calls;              // EQ calls (probability variant)
  int qubits = 0;
};

StageOneTable prob_stage_one(const DistributionOracle& od, int l);
StageOneTable amp_stage_one(const DistributionOracle& od, int l, TestPart part);

// Flag predicates on raw estimates; identical to threshold_mark's condition.
bool marks_at_least(Index raw, Index threshold, int l);
bool marks_at_most(Index raw, Index threshold, int l);

// Caches Stage-1 tables per (variant, part, width) for one distribution oracle.
class FilterOracleCache {
 public:
  explicit FilterOracleCache(DistributionOracle od) : od_(std::move(od)) {}
  const DistributionOracle& od() const { return od_; }
  const StageOneTable& prob(int l);
  const StageOneTable& amp(int l, TestPart part);

 private:
  DistributionOracle od_;
  std::map<int, StageOneTable> prob_;
  std::map<std::pair<int, int>, StageOneTable> amp_;
};

// Explicit Stage 2 with scratch registers: thr must hold tau1 in every branch.
// flag ^= [HD(est) <= HD(thr)], scratch returned to zero.
void explicit_threshold_stage(StateVector& s, const Register& est, const Register& thr, const Register& hd_thr,
                              const Register& hd_est, int flag, Index tau1);

// The biased marking oracles. Scratch layout: [work, flag, est] (complex mode:
// [work_re, work_im, flag, est_re, est_im]).
BiasedOracle prob_fil_borcl(const DistributionOracle& od, const FilterParams& params,
                            std::shared_ptr<FilterOracleCache> cache = nullptr);
BiasedOracle amp_fil_borcl(const DistributionOracle& od, const FilterParams& params, AmpMode mode,
                           std::shared_ptr<FilterOracleCache> cache = nullptr);

enum class Truth { Yes, No, Gap };

struct FilterOutcome {
  bool flag = false;
  std::optional<Index> witness;
  double exact_success_prob = 0;
  double flag_one_prob = 0;
  Truth truth = Truth::No;
  FilterParams params;
  AmpMode mode = AmpMode::Real;
  double oracle_p = 0;
  double max_flag_error = 0;  // worst boosted flag error outside the promise gap
  double min_oracle_correctness = 1;  // worst single-call correctness outside the gap
  std::vector<double> witness_distribution;
  int k = 0;
  int iterations = 0;
  int qubits = 0;
  QueryLedger queries;       // O_D over the whole run
  QueryLedger marker_calls;  // EQ markers (probability variant)
  std::uint64_t oracle_applications = 0;
};

struct FilterOptions {
  AmpMode mode = AmpMode::Real;
  std::uint64_t seed = 0;
  std::optional<int> relaxed_k;
  std::optional<int> precision;  // estimation width override
  AmplifyEngine engine = AmplifyEngine::Factored;
  std::shared_ptr<FilterOracleCache> cache;
};

// Per-outcome classification against (tau, eps) for the measured quantity.
Truth classify(const std::vector<double>& values, double tau, double eps);
std::vector<double> filtered_values(const DistributionOracle& od, FilterVariant variant, AmpMode mode);

FilterOutcome profil(const DistributionOracle& od, double tau, double eps, double delta,
                     const FilterOptions& options = {});
FilterOutcome ampfil(const DistributionOracle& od, double tau, double eps, double delta,
                     const FilterOptions& options = {});

}  // namespace ampdist
