#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ampdist/unitary.hpp"

namespace ampdist {

struct AEConfig {
  int m = 4;  // estimation-register width

  // Accuracy exponent of the confidence bound; meaningful for m >= 4.
  int q() const { return m - 3; }
  static AEConfig for_accuracy(int q) { return AEConfig{q + 3}; }
  void validate() const;
};

struct PhaseEstimate {
  Index raw = 0;
  int l = 0;
  double decoded() const;
};

double decode_estimate(Index raw, int l);
// Half-width of the QAE confidence interval at k = 1.
double qae_error_bound(double p, int m);

// How the controlled powers of the Grover iterator are realised.
//  ControlledPowers: the literal product of controlled G^(2^j) blocks; works on any state.
//  PowerTable: when the estimation register is zeroed, uncontrolled and the most
//  significant register, the state after H^m and the controlled powers is
//  sum_e |e> G^e |phi> / 2^{m/2}; this is built with exactly 2^m - 1 applications of G
//  on the lower block. Same state, same ledger totals.
//  Auto: PowerTable whenever its preconditions hold.
enum class PowerStrategy { Auto, PowerTable, ControlledPowers };

// G = -A S0 A^dagger M. S0 reflects about |0> on `reflect_mask` (the prep's support
// when 0). Each application charges one forward and one inverse prep call and one
// marker call.
UnitaryPtr grover_iterator(CountedOraclePtr prep, UnitaryPtr marker, Index reflect_mask = 0);

// H on `est`, the controlled powers of g, inverse QFT on `est`. Returns the strategy used.
PowerStrategy phase_estimate(StateVector& s, const Unitary& g, const Register& est,
                             PowerStrategy strategy = PowerStrategy::Auto, const Controls& c = {});

// Exact adjoint of phase_estimate: forward QFT, inverse controlled powers in reverse
// order, H. Always uses controlled powers.
void phase_estimate_adjoint(StateVector& s, const Unitary& g, const Register& est, const Controls& c = {});

struct QaeLedgers {
  QueryLedger prep;
  QueryLedger marker;
};

// Prep on its register, then phase estimation of the Grover iterator.
QaeLedgers apply_qae(StateVector& s, const CountedOraclePtr& prep, const CountedOraclePtr& marker,
                     const Register& est, PowerStrategy strategy = PowerStrategy::Auto,
                     const Controls& c = {}, Index reflect_mask = 0);

struct QaeResult {
  StateVector state;
  Register work;
  Register est;
  QaeLedgers calls;

  std::vector<double> raw_distribution() const { return state.distribution(est); }
  // Exact probability that the decoded estimate lies within `bound` of p.
  double mass_within(double p, double bound) const;
};

using MarkerBuilder = std::function<UnitaryPtr(const Register& work)>;

// Standalone amplitude estimation on a fresh (work, est) layout.
QaeResult qae(const OracleFactory& prep, const MarkerBuilder& marker, AEConfig config,
              PowerStrategy strategy = PowerStrategy::Auto);

// Marker flipping the sign of one basis value of the work register.
MarkerBuilder basis_marker(Index good);

// EQAmpEst: amplitude estimation in superposition over the input register, with the
// marker replaced by EQ between `input` and the low input.width qubits of `work`.
// `est` must be zeroed.
QaeLedgers eq_amp_est(StateVector& s, const OracleFactory& od, const Register& input, const Register& work,
                      const Register& est, PowerStrategy strategy = PowerStrategy::Auto,
                      const Controls& c = {});

// eq_amp_est as a procedure with an adjoint, for use inside larger oracles.
UnitaryPtr eq_amp_est_unitary(const OracleFactory& od, const Register& input, const Register& work,
                              const Register& est);

// Exact probability mass on raw values whose decoded estimate is within bound of p.
double estimate_mass_within(const std::vector<double>& raw_dist, int l, double p, double bound);

}  // namespace ampdist
