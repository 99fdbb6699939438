#include "ampdist/amp_est.hpp"

#include <cmath>
#include <numbers>

#include "ampdist/gadgets.hpp"
#include "ampdist/gates.hpp"

namespace ampdist {

void AEConfig::validate() const {
  if (m < 1 || m > kMaxQubits) throw ConfigError("estimation width out of range");
}

double decode_estimate(Index raw, int l) {
  if (l < 1 || l > 62 || raw >= bit(l)) throw ConfigError("raw estimate out of range");
  const double s = std::sin(std::numbers::pi * static_cast<double>(raw) / static_cast<double>(bit(l)));
  return s * s;
}

double PhaseEstimate::decoded() const { return decode_estimate(raw, l); }

double qae_error_bound(double p, int m) {
  const double scale = static_cast<double>(bit(m));
  return 2 * std::numbers::pi * std::sqrt(p * (1 - p)) / scale +
         std::numbers::pi * std::numbers::pi / (scale * scale);
}

double estimate_mass_within(const std::vector<double>& raw_dist, int l, double p, double bound) {
  double mass = 0;
  for (Index a = 0; a < raw_dist.size(); ++a) {
    if (raw_dist[a] > 0 && std::abs(decode_estimate(a, l) - p) <= bound) mass += raw_dist[a];
  }
  return mass;
}

double QaeResult::mass_within(double p, double bound) const {
  return estimate_mass_within(raw_distribution(), est.width, p, bound);
}

UnitaryPtr grover_iterator(CountedOraclePtr prep, UnitaryPtr marker, Index reflect_mask) {
  const Index zero_mask = reflect_mask ? reflect_mask : prep->support();
  if (zero_mask == 0) throw ConfigError("Grover iterator needs the prep register");
  if (marker->support() && !(marker->support() & zero_mask)) {
    throw ConfigError("marker and prep act on different register blocks");
  }
  auto forward = [prep, marker, zero_mask](StateVector& s, const Controls& c) {
    marker->apply(s, c);
    prep->apply_adjoint(s, c);
    reflect_about_zero(s, zero_mask, c);
    prep->apply(s, c);
    global_phase(s, -1.0, c);
  };
  auto adjoint = [prep, marker, zero_mask](StateVector& s, const Controls& c) {
    global_phase(s, -1.0, c);
    prep->apply_adjoint(s, c);
    reflect_about_zero(s, zero_mask, c);
    prep->apply(s, c);
    marker->apply_adjoint(s, c);
  };
  return make_unitary(forward, adjoint, zero_mask | marker->support());
}

namespace {

bool power_table_applicable(const StateVector& s, const Unitary& g, const Register& est, const Controls& c) {
  if (!c.empty()) return false;
  if (est.offset + est.width != s.width()) return false;
  if (g.support() == 0 || (g.support() & est.mask())) return false;
  const auto& amps = s.amplitudes();
  for (Index i = bit(est.offset); i < amps.size(); ++i) {
    if (amps[i] != Complex{}) return false;
  }
  return true;
}

void power_table(StateVector& s, const Unitary& g, const Register& est) {
  const Index block = bit(est.offset);
  RegisterLayout lower;
  for (const auto& r : s.layout().registers()) {
    if (r.offset + r.width <= est.offset) lower.add(r.name, r.width);
  }
  // a register that straddles est (est carved out of a larger scratch block)
  if (lower.width() < est.offset) lower.add("lower", est.offset - lower.width());
  auto& amps = s.amplitudes();
  StateVector cur(lower, std::vector<Complex>(amps.begin(), amps.begin() + static_cast<std::ptrdiff_t>(block)));
  const Index count = est.dimension();
  const double scale = 1.0 / std::sqrt(static_cast<double>(count));
  for (Index e = 0; e < count; ++e) {
    if (e > 0) g.apply(cur);
    const auto& v = cur.amplitudes();
    for (Index i = 0; i < block; ++i) amps[e * block + i] = v[i] * scale;
  }
}

}  // namespace

PowerStrategy phase_estimate(StateVector& s, const Unitary& g, const Register& est, PowerStrategy strategy,
                             const Controls& c) {
  const bool table_ok = power_table_applicable(s, g, est, c);
  if (strategy == PowerStrategy::PowerTable && !table_ok) {
    throw ConfigError("power-table phase estimation needs a zeroed top estimation register");
  }
  const PowerStrategy used =
      (strategy == PowerStrategy::ControlledPowers || !table_ok) ? PowerStrategy::ControlledPowers
                                                                  : PowerStrategy::PowerTable;
  if (used == PowerStrategy::PowerTable) {
    power_table(s, g, est);
  } else {
    apply_h(s, est, c);
    for (int j = 0; j < est.width; ++j) {
      const Controls cj = c & Controls::qubit(est.qubit(j));
      for (Index r = 0; r < bit(j); ++r) g.apply(s, cj);
    }
  }
  apply_qft(s, est, /*inverse=*/true, c);
  s.settle();
  return used;
}

void phase_estimate_adjoint(StateVector& s, const Unitary& g, const Register& est, const Controls& c) {
  apply_qft(s, est, /*inverse=*/false, c);
  for (int j = est.width - 1; j >= 0; --j) {
    const Controls cj = c & Controls::qubit(est.qubit(j));
    for (Index r = 0; r < bit(j); ++r) g.apply_adjoint(s, cj);
  }
  apply_h(s, est, c);
  s.settle();
}

QaeLedgers apply_qae(StateVector& s, const CountedOraclePtr& prep, const CountedOraclePtr& marker,
                     const Register& est, PowerStrategy strategy, const Controls& c, Index reflect_mask) {
  const QueryLedger p0 = prep->ledger(), m0 = marker->ledger();
  prep->apply(s, c);
  const auto g = grover_iterator(prep, marker, reflect_mask);
  phase_estimate(s, *g, est, strategy, c);
  return {prep->ledger() - p0, marker->ledger() - m0};
}

QaeResult qae(const OracleFactory& prep, const MarkerBuilder& marker, AEConfig config, PowerStrategy strategy) {
  config.validate();
  RegisterLayout layout;
  const Register work = layout.add("work", prep.width());
  const Register est = layout.add("est", config.m);
  StateVector s(layout);
  const auto prep_on = prep.on(work);
  const auto mark = make_counted(marker(work), "marker");
  auto calls = apply_qae(s, prep_on, mark, est, strategy);
  return QaeResult{std::move(s), work, est, calls};
}

MarkerBuilder basis_marker(Index good) {
  return [good](const Register& work) {
    return make_involution(
        [work, good](StateVector& s, const Controls& c) {
          s.negate_where(c & Controls::on(work, good), [](Index) { return true; });
        },
        work.mask());
  };
}

namespace {
void require_zero_estimate(const StateVector& s, const Register& est) {
  for (Index i = 0; i < s.dimension(); ++i) {
    if (est.value(i) != 0 && s.amplitudes()[i] != Complex{}) {
      throw ConfigError("estimation register is not zeroed");
    }
  }
}
}  // namespace

QaeLedgers eq_amp_est(StateVector& s, const OracleFactory& od, const Register& input, const Register& work,
                      const Register& est, PowerStrategy strategy, const Controls& c) {
  if (work.width != od.width()) throw ConfigError("work register does not match the distribution oracle");
  if (input.width > work.width) throw ConfigError("input register wider than the oracle outcome");
  require_zero_estimate(s, est);
  const auto prep = od.on(work);
  const auto marker = make_counted(gadgets::eq_prefix_unitary(input, work, input.width), "EQ");
  return apply_qae(s, prep, marker, est, strategy, c, work.mask());
}

UnitaryPtr eq_amp_est_unitary(const OracleFactory& od, const Register& input, const Register& work,
                              const Register& est) {
  if (work.width != od.width()) throw ConfigError("work register does not match the distribution oracle");
  if (input.width > work.width) throw ConfigError("input register wider than the oracle outcome");
  const auto prep = od.on(work);
  const auto marker = make_counted(gadgets::eq_prefix_unitary(input, work, input.width), "EQ");
  const auto g = grover_iterator(prep, marker, work.mask());
  auto forward = [prep, g, est](StateVector& s, const Controls& c) {
    prep->apply(s, c);
    phase_estimate(s, *g, est, PowerStrategy::Auto, c);
  };
  auto adjoint = [prep, g, est](StateVector& s, const Controls& c) {
    phase_estimate_adjoint(s, *g, est, c);
    prep->apply_adjoint(s, c);
  };
  return make_unitary(forward, adjoint, input.mask() | work.mask() | est.mask());
}

}  // namespace ampdist
