#include "ampdist/mdist.hpp"

#include <cmath>
#include <numbers>
#include <memory>
#include <random>

#include "ampdist/gates.hpp"

namespace ampdist {

void PrepFamily::validate() const {
  if (index_width < 0 || work_width < 1) throw ConfigError("family register widths out of range");
  if (!step) throw ConfigError("family has no step builder");
  if (!good_state) throw ConfigError("family has no good states");
  if (good_width < 1 || good_offset < 0 || good_offset + good_width > work_width) {
    throw ConfigError("good region does not fit the work register");
  }
  for (const auto& slot : slots) {
    if (slot.offset < 0 || slot.offset + inner.width() > work_width) {
      throw ConfigError("oracle slot does not fit the work register");
    }
    const Index oracle_mask = low_mask(inner.width()) << slot.offset;
    if (slot.control_mask & oracle_mask) throw ConfigError("slot control overlaps the oracle qubits");
    if (slot.control_mask & ~low_mask(work_width)) throw ConfigError("slot control outside the work register");
  }
}

PrepFamily pad_family(PrepFamily family, int k) {
  const int have = family.k();
  if (k < have) throw ConfigError("family already makes more oracle calls than requested");
  if ((k - have) % 2 != 0) throw ConfigError("padding adds calls in forward/inverse pairs; parity differs");
  const OracleSlot base = family.slots.empty() ? OracleSlot{} : family.slots.back();
  auto old_step = family.step;
  for (int i = have; i < k; i += 2) {
    OracleSlot fwd = base, inv = base;
    fwd.inverse = base.inverse;
    inv.inverse = !base.inverse;
    family.slots.push_back(fwd);
    family.slots.push_back(inv);
  }
  // Steps after the original last slot move to the very end; the new ones are identity.
  family.step = [old_step, have, k](Index y, int step, const Register& work) -> UnitaryPtr {
    if (step < have) return old_step(y, step, work);
    if (step == k) return old_step(y, have, work);
    return nullptr;
  };
  return family;
}

namespace {

struct Built {
  std::vector<std::vector<UnitaryPtr>> steps;  // [step][branch]
  std::vector<CountedOraclePtr> oracles;       // one per slot
  std::vector<Controls> slot_controls;
  std::vector<bool> slot_inverse;
};

std::shared_ptr<const Built> build(const PrepFamily& f, const Register& work, Index branches) {
  f.validate();
  if (work.width != f.work_width) throw ConfigError("work register does not match the family");
  auto b = std::make_shared<Built>();
  b->steps.resize(static_cast<std::size_t>(f.k()) + 1);
  for (int j = 0; j <= f.k(); ++j) {
    for (Index y = 0; y < branches; ++y) b->steps[j].push_back(f.step(y, j, work));
  }
  for (const auto& slot : f.slots) {
    b->oracles.push_back(f.inner.on(work.slice(slot.offset, f.inner.width(), work.name + ".O")));
    b->slot_controls.push_back(Controls{slot.control_mask << work.offset, slot.control_value << work.offset});
    b->slot_inverse.push_back(slot.inverse);
  }
  return b;
}

void run_slot(const Built& b, std::size_t j, StateVector& s, const Controls& c, bool adjoint) {
  const Controls cc = c & b.slot_controls[j];
  const bool inverse = b.slot_inverse[j] != adjoint;
  if (inverse) {
    b.oracles[j]->apply_adjoint(s, cc);
  } else {
    b.oracles[j]->apply(s, cc);
  }
}

}  // namespace

UnitaryPtr member_prep(const PrepFamily& family, Index branch, const Register& work) {
  if (branch >= family.branches()) throw ConfigError("missing family member");
  auto b = build(family, work, family.branches());
  const std::size_t k = b->oracles.size();
  auto forward = [b, branch, k](StateVector& s, const Controls& c) {
    for (std::size_t j = 0; j <= k; ++j) {
      if (const auto& u = b->steps[j][branch]) u->apply(s, c);
      if (j < k) run_slot(*b, j, s, c, false);
    }
  };
  auto adjoint = [b, branch, k](StateVector& s, const Controls& c) {
    for (std::size_t jj = k + 1; jj-- > 0;) {
      if (jj < k) run_slot(*b, jj, s, c, true);
      if (const auto& u = b->steps[jj][branch]) u->apply_adjoint(s, c);
    }
  };
  return make_unitary(forward, adjoint, work.mask());
}

OracleFactory member_factory(const PrepFamily& family, Index branch) {
  return OracleFactory(family.work_width, "A_" + std::to_string(branch),
                       [family, branch](const Register& r) { return member_prep(family, branch, r); });
}

UnitaryPtr controlled_prep_family(const PrepFamily& family, const Register& index, const Register& work) {
  if (index.width != family.index_width) throw ConfigError("index register does not match the family");
  if (index.mask() & work.mask()) throw ConfigError("index and work registers overlap");
  const Index n = family.branches();
  auto b = build(family, work, n);
  const std::size_t k = b->oracles.size();
  auto forward = [b, index, n, k](StateVector& s, const Controls& c) {
    for (std::size_t j = 0; j <= k; ++j) {
      for (Index y = 0; y < n; ++y) {
        if (const auto& u = b->steps[j][y]) u->apply(s, c & Controls::on(index, y));
      }
      if (j < k) run_slot(*b, j, s, c, false);
    }
  };
  auto adjoint = [b, index, n, k](StateVector& s, const Controls& c) {
    for (std::size_t jj = k + 1; jj-- > 0;) {
      if (jj < k) run_slot(*b, jj, s, c, true);
      for (Index y = n; y-- > 0;) {
        if (const auto& u = b->steps[jj][y]) u->apply_adjoint(s, c & Controls::on(index, y));
      }
    }
  };
  return make_unitary(forward, adjoint, index.mask() | work.mask());
}

UnitaryPtr family_marker(const PrepFamily& family, const Register& index, const Register& work) {
  family.validate();
  const Register good = work.slice(family.good_offset, family.good_width, work.name + ".good");
  std::vector<Index> targets(family.branches());
  for (Index y = 0; y < targets.size(); ++y) {
    targets[y] = family.good_state(y);
    if (targets[y] >= good.dimension()) throw ConfigError("good state does not fit the good region");
  }
  return make_involution(
      [index, good, targets](StateVector& s, const Controls& c) {
        s.negate_where(c, [&](Index i) { return good.value(i) == targets[index.value(i)]; });
      },
      index.mask() | good.mask());
}

namespace {
UnitaryPtr grover_from(UnitaryPtr v, UnitaryPtr marker, Index reflect_mask, Index support) {
  auto forward = [v, marker, reflect_mask](StateVector& s, const Controls& c) {
    marker->apply(s, c);
    v->apply_adjoint(s, c);
    reflect_about_zero(s, reflect_mask, c);
    v->apply(s, c);
    global_phase(s, -1.0, c);
  };
  auto adjoint = [v, marker, reflect_mask](StateVector& s, const Controls& c) {
    global_phase(s, -1.0, c);
    v->apply_adjoint(s, c);
    reflect_about_zero(s, reflect_mask, c);
    v->apply(s, c);
    marker->apply_adjoint(s, c);
  };
  return make_unitary(forward, adjoint, support);
}
}  // namespace

UnitaryPtr joint_grover(const PrepFamily& family, const Register& index, const Register& work) {
  return grover_from(controlled_prep_family(family, index, work), family_marker(family, index, work), work.mask(),
                     index.mask() | work.mask());
}

UnitaryPtr w_operator(const PrepFamily& family, const Register& index, const Register& work, const Register& est) {
  if (est.mask() & (index.mask() | work.mask())) throw ConfigError("estimation register collides");
  const auto g = joint_grover(family, index, work);
  auto forward = [g, est](StateVector& s, const Controls& c) {
    for (int j = 0; j < est.width; ++j) {
      const Controls cj = c & Controls::qubit(est.qubit(j));
      for (Index r = 0; r < bit(j); ++r) g->apply(s, cj);
    }
  };
  auto adjoint = [g, est](StateVector& s, const Controls& c) {
    for (int j = est.width - 1; j >= 0; --j) {
      const Controls cj = c & Controls::qubit(est.qubit(j));
      for (Index r = 0; r < bit(j); ++r) g->apply_adjoint(s, cj);
    }
  };
  return make_unitary(forward, adjoint, index.mask() | work.mask() | est.mask());
}

MDistCalls apply_mdist(StateVector& s, const PrepFamily& family, const Register& index, const Register& work,
                       const Register& est, PowerStrategy strategy, const Controls& c) {
  if (est.mask() & (index.mask() | work.mask())) throw ConfigError("estimation register collides");
  const auto v = controlled_prep_family(family, index, work);
  const auto g = grover_from(v, family_marker(family, index, work), work.mask(), index.mask() | work.mask());
  const QueryLedger start = family.inner.ledger();
  v->apply(s, c);
  const QueryLedger after_v = family.inner.ledger();
  phase_estimate(s, *g, est, strategy, c);
  return {after_v - start, family.inner.ledger() - after_v};
}

UnitaryPtr mdist_unitary(const PrepFamily& family, const Register& index, const Register& work,
                         const Register& est) {
  if (est.mask() & (index.mask() | work.mask())) throw ConfigError("estimation register collides");
  const auto v = controlled_prep_family(family, index, work);
  const auto g = grover_from(v, family_marker(family, index, work), work.mask(), index.mask() | work.mask());
  auto forward = [v, g, est](StateVector& s, const Controls& c) {
    v->apply(s, c);
    phase_estimate(s, *g, est, PowerStrategy::Auto, c);
  };
  auto adjoint = [v, g, est](StateVector& s, const Controls& c) {
    phase_estimate_adjoint(s, *g, est, c);
    v->apply_adjoint(s, c);
  };
  return make_unitary(forward, adjoint, index.mask() | work.mask() | est.mask());
}

MDistResult mdist_amp_est(const PrepFamily& family, int m, std::vector<Complex> index_amplitudes,
                          PowerStrategy strategy) {
  AEConfig{m}.validate();
  RegisterLayout layout;
  const Register index = layout.add("index", family.index_width);
  const Register work = layout.add("work", family.work_width);
  const Register est = layout.add("est", m);
  StateVector s(layout);
  if (!index_amplitudes.empty()) amplitude_prep(index, index_amplitudes)->apply(s);
  const auto calls = apply_mdist(s, family, index, work, est, strategy);

  MDistResult result{std::move(s), index, work, est, calls, m, family.k(), {}};
  std::vector<Register> regs{index, est};
  const auto joint = result.state.distribution(regs);
  const Index n = family.branches();
  for (Index y = 0; y < n; ++y) {
    BranchEstimate b;
    b.branch = y;
    b.raw.assign(est.dimension(), 0.0);
    for (Index a = 0; a < est.dimension(); ++a) b.weight += joint[y | (a << index.width)];
    if (b.weight <= 1e-15) continue;
    for (Index a = 0; a < est.dimension(); ++a) b.raw[a] = joint[y | (a << index.width)] / b.weight;
    // target probability from a standalone run of the member, on a private ledger
    PrepFamily solo_family = family;
    solo_family.inner = family.inner.fresh();
    RegisterLayout solo;
    const Register w = solo.add("work", family.work_width);
    StateVector t(solo);
    member_prep(solo_family, y, w)->apply(t);
    b.target_prob = t.marginal_probability(w.slice(family.good_offset, family.good_width), family.good_state(y));
    b.good_mass = estimate_mass_within(b.raw, m, b.target_prob, qae_error_bound(b.target_prob, m));
    result.branches.push_back(std::move(b));
  }
  return result;
}

QueryAudit audit_query_count(const MDistResult& run) {
  QueryAudit a;
  a.m = run.m;
  a.k = run.k;
  a.branches = bit(run.index.width);
  a.v_calls = run.calls.v.total();
  a.w_calls = run.calls.w.total();
  a.total = a.v_calls + a.w_calls;
  a.w_bound = bit(run.m + 2) * static_cast<std::uint64_t>(run.k);
  a.bound = mdist_call_bound(run.m, run.k);
  a.pass = a.total <= a.bound && a.w_calls <= a.w_bound;
  return a;
}

QueryAudit naive_audit(const PrepFamily& family, int m) {
  RegisterLayout layout;
  const Register index = layout.add("index", family.index_width);
  const Register work = layout.add("work", family.work_width);
  const Register est = layout.add("est", m);
  StateVector s(layout);
  const QueryLedger start = family.inner.ledger();
  const auto marker = family_marker(family, index, work);
  for (Index y = 0; y < family.branches(); ++y) {
    const auto a_y = member_prep(family, y, work);
    const Controls branch = Controls::on(index, y);
    a_y->apply(s, branch);
  }
  const QueryLedger after_v = family.inner.ledger();
  apply_h(s, est);
  for (Index y = 0; y < family.branches(); ++y) {
    const auto a_y = member_prep(family, y, work);
    const auto g_y = grover_from(a_y, marker, work.mask(), index.mask() | work.mask());
    const Controls branch = Controls::on(index, y);
    for (int j = 0; j < m; ++j) {
      const Controls cj = branch & Controls::qubit(est.qubit(j));
      for (Index r = 0; r < bit(j); ++r) g_y->apply(s, cj);
    }
  }
  QueryAudit a;
  a.m = m;
  a.k = family.k();
  a.branches = family.branches();
  a.v_calls = (after_v - start).total();
  a.w_calls = (family.inner.ledger() - after_v).total();
  a.total = a.v_calls + a.w_calls;
  a.w_bound = bit(m + 2) * static_cast<std::uint64_t>(a.k);
  a.bound = mdist_call_bound(m, a.k);
  a.pass = a.total <= a.bound && a.w_calls <= a.w_bound;
  return a;
}

namespace {
std::vector<Complex> random_unitary_matrix(int qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t d = std::size_t{1} << qubits;
  std::vector<Complex> col(d);
  double n = 0;
  for (auto& x : col) {
    x = Complex(g(rng), g(rng));
    n += std::norm(x);
  }
  for (auto& x : col) x /= std::sqrt(n);
  return unitary_with_first_column(col);
}

std::vector<int> all_qubits(const Register& r) {
  std::vector<int> q;
  for (int i = 0; i < r.width; ++i) q.push_back(r.qubit(i));
  return q;
}
}  // namespace

PrepFamily random_family(int index_width, int work_width, int k, std::uint64_t seed) {
  if (work_width < 1 || work_width > 3) throw ConfigError("random families use 1 to 3 work qubits");
  std::mt19937_64 rng(seed);
  const auto inner_matrix = random_unitary_matrix(work_width, rng);
  const Index n = bit(index_width);
  std::vector<std::vector<Complex>> steps;
  for (Index y = 0; y < n; ++y) {
    for (int j = 0; j <= k; ++j) steps.push_back(random_unitary_matrix(work_width, rng));
  }
  std::vector<Index> goods(n);
  for (auto& g : goods) g = rng() % bit(work_width);

  PrepFamily f;
  f.index_width = index_width;
  f.work_width = work_width;
  f.inner = OracleFactory(work_width, "O", [inner_matrix](const Register& r) {
    return dense_unitary(all_qubits(r), inner_matrix);
  });
  f.slots.assign(static_cast<std::size_t>(k), OracleSlot{});
  f.step = [steps, k](Index y, int j, const Register& work) -> UnitaryPtr {
    return dense_unitary(all_qubits(work), steps[y * static_cast<Index>(k + 1) + static_cast<Index>(j)]);
  };
  f.good_offset = 0;
  f.good_width = work_width;
  f.good_state = [goods](Index y) { return goods[y]; };
  return f;
}

PrepFamily hadamard_test_family(const OracleFactory& phi, int index_width, TestPart part,
                                std::function<Index(Index)> target) {
  PrepFamily f;
  f.index_width = index_width;
  f.work_width = phi.width() + 1;
  f.inner = phi;
  f.slots = {OracleSlot{false, 1, 1, 1}};
  const Mat2 s_dag = mat2::phase(-std::numbers::pi / 2);
  f.step = [target, part, s_dag](Index y, int j, const Register& work) -> UnitaryPtr {
    const int test = work.qubit(0);
    if (j == 1) return gate_unitary(test, mat2::hadamard());
    const Register body = work.slice(1, work.width - 1, work.name + ".body");
    const Index t = target(y);
    if (t >= body.dimension()) throw ConfigError("Hadamard-test target does not fit the register");
    std::vector<UnitaryPtr> parts{gate_unitary(test, mat2::hadamard())};
    if (part == TestPart::Imag) parts.push_back(gate_unitary(test, s_dag));
    parts.push_back(with_controls(basis_prep(body, t), Controls::qubit(test, false)));
    return sequence(std::move(parts));
  };
  f.good_offset = 0;
  f.good_width = 1;
  f.good_state = [](Index) { return Index{0}; };
  return f;
}

}  // namespace ampdist
