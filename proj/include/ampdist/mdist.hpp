#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ampdist/amp_est.hpp"
#include "ampdist/hadamard_est.hpp"

namespace ampdist {

// One call of the shared inner oracle inside a family member. The slot is applied to
// every branch at once; `control_*` are work-local qubit conditions (not branch ones).
struct OracleSlot {
  bool inverse = false;
  int offset = 0;
  Index control_mask = 0;
  Index control_value = 0;
};

// A family {A_y} of preparations on a work register, all of the form
//   step_k(y) slot_{k-1} ... slot_0 step_0(y)
// so each member makes exactly k calls to the inner oracle.
struct PrepFamily {
  using Step = std::function<UnitaryPtr(Index branch, int step, const Register& work)>;

  int index_width = 0;
  int work_width = 0;
  OracleFactory inner;
  std::vector<OracleSlot> slots;
  Step step;  // may return nullptr for identity
  int good_offset = 0;
  int good_width = 0;
  std::function<Index(Index branch)> good_state;

  int k() const { return static_cast<int>(slots.size()); }
  Index branches() const { return bit(index_width); }
  void validate() const;
};

// Appends identity-separated forward/inverse slot pairs until the family makes
// `k` calls; the pairs cancel in every branch.
PrepFamily pad_family(PrepFamily family, int k);

UnitaryPtr member_prep(const PrepFamily& family, Index branch, const Register& work);
OracleFactory member_factory(const PrepFamily& family, Index branch);
// V = sum_y |y><y| (x) A_y: branch-controlled steps, unconditional oracle slots.
UnitaryPtr controlled_prep_family(const PrepFamily& family, const Register& index, const Register& work);
// Sign flip where the good region of work equals the branch's good state.
UnitaryPtr family_marker(const PrepFamily& family, const Register& index, const Register& work);
// -V S0 V^dagger M with S0 on the work register.
UnitaryPtr joint_grover(const PrepFamily& family, const Register& index, const Register& work);
// W = product over j of G_joint^(2^j) controlled on est qubit j.
UnitaryPtr w_operator(const PrepFamily& family, const Register& index, const Register& work, const Register& est);

// V then phase estimation of G_joint. Returns the inner-oracle ledger delta.
struct MDistCalls {
  QueryLedger v;
  QueryLedger w;
  std::uint64_t total() const { return v.total() + w.total(); }
};
MDistCalls apply_mdist(StateVector& s, const PrepFamily& family, const Register& index, const Register& work,
                       const Register& est, PowerStrategy strategy = PowerStrategy::Auto, const Controls& c = {});
// The same map as a procedure with an adjoint (the adjoint uses controlled powers).
UnitaryPtr mdist_unitary(const PrepFamily& family, const Register& index, const Register& work,
                         const Register& est);

struct BranchEstimate {
  Index branch = 0;
  double weight = 0;               // |alpha_y|^2 of the index superposition
  double target_prob = 0;          // |<good_y|A_y|0>|^2
  std::vector<double> raw;         // conditional distribution over raw estimates
  double good_mass = 0;            // mass within the k = 1 confidence bound
};

struct MDistResult {
  StateVector state;
  Register index;
  Register work;
  Register est;
  MDistCalls calls;
  int m = 0;
  int k = 0;
  std::vector<BranchEstimate> branches;
};

// Index register prepared with `index_amplitudes` (empty: |0>), work and est zeroed.
MDistResult mdist_amp_est(const PrepFamily& family, int m, std::vector<Complex> index_amplitudes = {},
                          PowerStrategy strategy = PowerStrategy::Auto);

inline std::uint64_t mdist_call_bound(int m, int k) {
  return bit(m + 2) * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(k);
}

struct QueryAudit {
  int m = 0;
  int k = 0;
  Index branches = 0;
  std::uint64_t v_calls = 0;
  std::uint64_t w_calls = 0;
  std::uint64_t total = 0;
  std::uint64_t w_bound = 0;  // 2^{m+2} k
  std::uint64_t bound = 0;    // 2^{m+2} k + k
  bool pass = false;
};

QueryAudit audit_query_count(const MDistResult& run);
// Per-branch construction: each branch runs its own controlled Grover powers.
QueryAudit naive_audit(const PrepFamily& family, int m);

// Seeded family of random small unitaries around a random inner oracle.
PrepFamily random_family(int index_width, int work_width, int k, std::uint64_t seed);

// sum_y |y><y| (x) HT_{A_y, phi}: work = [test qubit, phi register]; A_y prepares
// |target(y)> on the phi register; the good state is test qubit = 0.
PrepFamily hadamard_test_family(const OracleFactory& phi, int index_width, TestPart part,
                                std::function<Index(Index)> target);

}  // namespace ampdist
