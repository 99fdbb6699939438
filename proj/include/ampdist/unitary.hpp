#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ampdist/state.hpp"

namespace ampdist {

// A unitary procedure bound to absolute qubits of some layout. `apply` and
// `apply_adjoint` act only on the subspace selected by the extra controls.
class Unitary {
 public:
  virtual ~Unitary() = default;
  virtual void apply(StateVector& s, const Controls& c = {}) const = 0;
  virtual void apply_adjoint(StateVector& s, const Controls& c = {}) const = 0;
  // Mask of qubits the procedure may touch; 0 when unknown.
  virtual Index support() const { return 0; }
};

using UnitaryPtr = std::shared_ptr<const Unitary>;
using Action = std::function<void(StateVector&, const Controls&)>;

UnitaryPtr make_unitary(Action forward, Action adjoint, Index support = 0);
// Self-inverse procedures (XOR writes, sign flips).
UnitaryPtr make_involution(Action action, Index support = 0);
UnitaryPtr identity_unitary();
// Applies parts in order; the adjoint runs the adjoints in reverse order.
UnitaryPtr sequence(std::vector<UnitaryPtr> parts);
UnitaryPtr adjoint_of(UnitaryPtr u);
UnitaryPtr with_controls(UnitaryPtr u, Controls extra);

struct QueryLedger {
  std::uint64_t forward = 0;
  std::uint64_t inverse = 0;
  std::uint64_t controlled_forward = 0;
  std::uint64_t controlled_inverse = 0;

  std::uint64_t total() const { return forward + inverse + controlled_forward + controlled_inverse; }
  std::uint64_t forward_calls() const { return forward + controlled_forward; }
  std::uint64_t inverse_calls() const { return inverse + controlled_inverse; }
  QueryLedger operator-(const QueryLedger& o) const;
  QueryLedger operator+(const QueryLedger& o) const;
  QueryLedger scaled(std::uint64_t factor) const;
  bool operator==(const QueryLedger&) const = default;
};

// An oracle instance: a procedure plus the invocation ledger it shares with every
// other instance built from the same OracleFactory.
class CountedOracle final : public Unitary {
 public:
  CountedOracle(UnitaryPtr action, std::string label, std::shared_ptr<QueryLedger> ledger);

  void apply(StateVector& s, const Controls& c = {}) const override;
  void apply_adjoint(StateVector& s, const Controls& c = {}) const override;
  Index support() const override { return action_->support(); }

  const std::string& label() const { return label_; }
  const QueryLedger& ledger() const { return *ledger_; }
  std::shared_ptr<QueryLedger> ledger_handle() const { return ledger_; }
  UnitaryPtr action() const { return action_; }

 private:
  UnitaryPtr action_;
  std::string label_;
  std::shared_ptr<QueryLedger> ledger_;
};

using CountedOraclePtr = std::shared_ptr<const CountedOracle>;

CountedOraclePtr make_counted(UnitaryPtr action, std::string label);

// A relocatable oracle: builds counted instances on any register of `width` qubits.
class OracleFactory {
 public:
  using Builder = std::function<UnitaryPtr(const Register&)>;

  OracleFactory() = default;
  OracleFactory(int width, std::string label, Builder builder);

  int width() const { return width_; }
  const std::string& label() const { return label_; }
  CountedOraclePtr on(const Register& target) const;
  const QueryLedger& ledger() const { return *ledger_; }
  std::shared_ptr<QueryLedger> ledger_handle() const { return ledger_; }
  // Same procedure, fresh ledger.
  OracleFactory fresh() const;

 private:
  int width_ = 0;
  std::string label_;
  Builder builder_;
  std::shared_ptr<QueryLedger> ledger_ = std::make_shared<QueryLedger>();
};

}  // namespace ampdist
