#pragma once

#include <cstdint>
#include <map>

#include "ampdist/amp_est.hpp"

namespace ampdist {

enum class TestPart { Real, Imag };

// Hadamard test on `reg`: qubit 0 is the test qubit, the remaining qubits hold the
// compared states. psi runs on the test-qubit-0 branch, phi on the 1 branch. Real:
// Pr[test = 0] = (1 + Re<psi|phi>)/2. Imag adds S-dagger after the first H, giving
// (1 + Im<psi|phi>)/2.
UnitaryPtr hadamard_test(const Register& reg, const OracleFactory& psi, const OracleFactory& phi, TestPart part);
UnitaryPtr hadamard_test_real(const Register& reg, const OracleFactory& psi, const OracleFactory& phi);
UnitaryPtr hadamard_test_imag(const Register& reg, const OracleFactory& psi, const OracleFactory& phi);

// Relocatable form (width n + 1) with its own ledger; inner calls still land on the
// ledgers of psi and phi.
OracleFactory hadamard_test_factory(const OracleFactory& psi, const OracleFactory& phi, TestPart part);

// Exact Pr[test qubit = 0] read from the statevector.
double hadamard_zero_probability(const OracleFactory& psi, const OracleFactory& phi, TestPart part);

// |0..0> -> |value> as a counted preparation.
OracleFactory basis_factory(int width, Index value, std::string label = "A_y");

enum class EstimationBackend { Qae, MDist };

struct InnerProductEstimate {
  double real_part = 0;
  double imag_part = 0;
  double norm = 0;
  double epsilon = 0;
  double delta = 0;
  int m = 0;            // estimation width per component
  int repetitions = 0;  // median runs per component
  double exact_success_prob = 0;
  double true_modulus = 0;
  QueryLedger calls;  // calls to A over the whole procedure
  int qubits = 0;
  std::map<double, double> real_median_distribution;
  std::map<double, double> imag_median_distribution;
};

int true_amp_est_width(double epsilon);
int median_runs(double delta);
double combine_components(double real_part, double imag_part);

// Estimates |<y|A|0^n>| to additive epsilon with probability >= 1 - delta.
InnerProductEstimate true_amp_est(const OracleFactory& a, Index y, double epsilon, double delta,
                                  EstimationBackend backend = EstimationBackend::Qae, std::uint64_t seed = 0);

}  // namespace ampdist
