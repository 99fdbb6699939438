#include "ampdist/unitary.hpp"

namespace ampdist {

namespace {

class LambdaUnitary final : public Unitary {
 public:
  LambdaUnitary(Action f, Action a, Index support)
      : forward_(std::move(f)), adjoint_(std::move(a)), support_(support) {}
  void apply(StateVector& s, const Controls& c) const override { forward_(s, c); }
  void apply_adjoint(StateVector& s, const Controls& c) const override { adjoint_(s, c); }
  Index support() const override { return support_; }

 private:
  Action forward_, adjoint_;
  Index support_;
};

class Sequence final : public Unitary {
 public:
  explicit Sequence(std::vector<UnitaryPtr> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_) support_ |= p->support();
  }
  void apply(StateVector& s, const Controls& c) const override {
    for (const auto& p : parts_) p->apply(s, c);
  }
  void apply_adjoint(StateVector& s, const Controls& c) const override {
    for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) (*it)->apply_adjoint(s, c);
  }
  Index support() const override { return support_; }

 private:
  std::vector<UnitaryPtr> parts_;
  Index support_ = 0;
};

class Adjoint final : public Unitary {
 public:
  explicit Adjoint(UnitaryPtr u) : u_(std::move(u)) {}
  void apply(StateVector& s, const Controls& c) const override { u_->apply_adjoint(s, c); }
  void apply_adjoint(StateVector& s, const Controls& c) const override { u_->apply(s, c); }
  Index support() const override { return u_->support(); }

 private:
  UnitaryPtr u_;
};

class Controlled final : public Unitary {
 public:
  Controlled(UnitaryPtr u, Controls extra) : u_(std::move(u)), extra_(extra) {
    if (u_->support() & extra_.mask) throw ConfigError("control register overlaps the controlled body");
  }
  void apply(StateVector& s, const Controls& c) const override { u_->apply(s, c & extra_); }
  void apply_adjoint(StateVector& s, const Controls& c) const override {
    u_->apply_adjoint(s, c & extra_);
  }
  Index support() const override { return u_->support() | extra_.mask; }

 private:
  UnitaryPtr u_;
  Controls extra_;
};

}  // namespace

UnitaryPtr make_unitary(Action forward, Action adjoint, Index support) {
  return std::make_shared<LambdaUnitary>(std::move(forward), std::move(adjoint), support);
}

UnitaryPtr make_involution(Action action, Index support) {
  Action copy = action;
  return std::make_shared<LambdaUnitary>(std::move(action), std::move(copy), support);
}

UnitaryPtr identity_unitary() {
  return make_involution([](StateVector&, const Controls&) {});
}

UnitaryPtr sequence(std::vector<UnitaryPtr> parts) { return std::make_shared<Sequence>(std::move(parts)); }

UnitaryPtr adjoint_of(UnitaryPtr u) { return std::make_shared<Adjoint>(std::move(u)); }

UnitaryPtr with_controls(UnitaryPtr u, Controls extra) {
  return std::make_shared<Controlled>(std::move(u), extra);
}

QueryLedger QueryLedger::operator-(const QueryLedger& o) const {
  return {forward - o.forward, inverse - o.inverse, controlled_forward - o.controlled_forward,
          controlled_inverse - o.controlled_inverse};
}

QueryLedger QueryLedger::operator+(const QueryLedger& o) const {
  return {forward + o.forward, inverse + o.inverse, controlled_forward + o.controlled_forward,
          controlled_inverse + o.controlled_inverse};
}

QueryLedger QueryLedger::scaled(std::uint64_t f) const {
  return {forward * f, inverse * f, controlled_forward * f, controlled_inverse * f};
}

CountedOracle::CountedOracle(UnitaryPtr action, std::string label, std::shared_ptr<QueryLedger> ledger)
    : action_(std::move(action)), label_(std::move(label)), ledger_(std::move(ledger)) {}

void CountedOracle::apply(StateVector& s, const Controls& c) const {
  action_->apply(s, c);
  if (c.empty()) {
    ++ledger_->forward;
  } else {
    ++ledger_->controlled_forward;
  }
}

void CountedOracle::apply_adjoint(StateVector& s, const Controls& c) const {
  action_->apply_adjoint(s, c);
  if (c.empty()) {
    ++ledger_->inverse;
  } else {
    ++ledger_->controlled_inverse;
  }
}

CountedOraclePtr make_counted(UnitaryPtr action, std::string label) {
  return std::make_shared<CountedOracle>(std::move(action), std::move(label),
                                         std::make_shared<QueryLedger>());
}

OracleFactory::OracleFactory(int width, std::string label, Builder builder)
    : width_(width), label_(std::move(label)), builder_(std::move(builder)) {}

CountedOraclePtr OracleFactory::on(const Register& target) const {
  if (target.width != width_) {
    throw ConfigError("oracle " + label_ + " needs " + std::to_string(width_) + " qubits, register " +
                      target.name + " has " + std::to_string(target.width));
  }
  return std::make_shared<CountedOracle>(builder_(target), label_, ledger_);
}

OracleFactory OracleFactory::fresh() const { return OracleFactory(width_, label_, builder_); }

}  // namespace ampdist
