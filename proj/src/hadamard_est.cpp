#include "ampdist/hadamard_est.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ampdist/gates.hpp"
#include "ampdist/mdist.hpp"
#include "ampdist/stats.hpp"

namespace ampdist {

UnitaryPtr hadamard_test(const Register& reg, const OracleFactory& psi, const OracleFactory& phi, TestPart part) {
  if (psi.width() != phi.width()) throw ConfigError("Hadamard test needs equal-width preparations");
  if (reg.width != psi.width() + 1) throw ConfigError("Hadamard test register must hold the test qubit plus n");
  const int test = reg.qubit(0);
  const Register body = reg.slice(1, psi.width(), reg.name + ".body");
  const auto a_psi = psi.on(body);
  const auto a_phi = phi.on(body);
  const Mat2 h = mat2::hadamard();
  const Mat2 s_dag = mat2::phase(-std::numbers::pi / 2);
  const Mat2 s = mat2::phase(std::numbers::pi / 2);
  auto forward = [=](StateVector& st, const Controls& c) {
    st.apply_matrix2(test, h, c);
    if (part == TestPart::Imag) st.apply_matrix2(test, s_dag, c);
    a_psi->apply(st, c & Controls::qubit(test, false));
    a_phi->apply(st, c & Controls::qubit(test, true));
    st.apply_matrix2(test, h, c);
  };
  auto adjoint = [=](StateVector& st, const Controls& c) {
    st.apply_matrix2(test, h, c);
    a_phi->apply_adjoint(st, c & Controls::qubit(test, true));
    a_psi->apply_adjoint(st, c & Controls::qubit(test, false));
    if (part == TestPart::Imag) st.apply_matrix2(test, s, c);
    st.apply_matrix2(test, h, c);
  };
  return make_unitary(forward, adjoint, reg.mask());
}

UnitaryPtr hadamard_test_real(const Register& reg, const OracleFactory& psi, const OracleFactory& phi) {
  return hadamard_test(reg, psi, phi, TestPart::Real);
}

UnitaryPtr hadamard_test_imag(const Register& reg, const OracleFactory& psi, const OracleFactory& phi) {
  return hadamard_test(reg, psi, phi, TestPart::Imag);
}

OracleFactory hadamard_test_factory(const OracleFactory& psi, const OracleFactory& phi, TestPart part) {
  if (psi.width() != phi.width()) throw ConfigError("Hadamard test needs equal-width preparations");
  return OracleFactory(psi.width() + 1, part == TestPart::Real ? "HT" : "HT_im",
                       [psi, phi, part](const Register& r) { return hadamard_test(r, psi, phi, part); });
}

double hadamard_zero_probability(const OracleFactory& psi, const OracleFactory& phi, TestPart part) {
  RegisterLayout layout;
  const Register reg = layout.add("ht", psi.width() + 1);
  StateVector s(layout);
  hadamard_test(reg, psi, phi, part)->apply(s);
  return s.marginal_probability(reg.slice(0, 1), 0);
}

OracleFactory basis_factory(int width, Index value, std::string label) {
  if (value >= bit(width)) throw ConfigError("basis value does not fit");
  return OracleFactory(width, std::move(label), [value](const Register& r) { return basis_prep(r, value); });
}

int true_amp_est_width(double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw ConfigError("epsilon must lie in (0, 1)");
  return static_cast<int>(std::ceil(std::log2(2 * std::numbers::sqrt2 / epsilon))) + 3;
}

int median_runs(double delta) {
  if (!(delta > 0 && delta < 1)) throw ConfigError("delta must lie in (0, 1)");
  return 2 * static_cast<int>(std::ceil(6 * std::log(2 / delta))) + 1;
}

double combine_components(double real_part, double imag_part) {
  return std::clamp(std::sqrt(real_part * real_part + imag_part * imag_part), 0.0, 1.0);
}

namespace {

struct Component {
  std::map<double, double> single;  // signed component value -> probability
  QueryLedger calls;                // calls to A for one estimation run
};

Component estimate_component(const OracleFactory& a, Index y, int m, TestPart part, EstimationBackend backend) {
  const OracleFactory a_y = basis_factory(a.width(), y);
  const QueryLedger before = a.ledger();
  std::vector<double> raw;
  if (backend == EstimationBackend::Qae) {
    const auto ht = hadamard_test_factory(a_y, a, part);
    auto zero_marker = [](const Register& work) {
      const Register test = work.slice(0, 1, work.name + ".test");
      return make_involution(
          [test](StateVector& s, const Controls& c) {
            s.negate_where(c & Controls::on(test, 0), [](Index) { return true; });
          },
          test.mask());
    };
    raw = qae(ht, zero_marker, AEConfig{m}).raw_distribution();
  } else {
    const auto family = hadamard_test_family(a, 0, part, [y](Index) { return y; });
    raw = mdist_amp_est(family, m).branches.at(0).raw;
  }
  Component out;
  out.calls = a.ledger() - before;
  for (Index r = 0; r < raw.size(); ++r) {
    if (raw[r] <= 0) continue;
    out.single[2 * decode_estimate(r, m) - 1] += raw[r];
  }
  return out;
}

double sample_median(const std::map<double, double>& single, int runs, std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> draws;
  for (int i = 0; i < runs; ++i) draws.push_back(draw(single, seeded_uniform(seed, stream * 1000003 + i)));
  std::nth_element(draws.begin(), draws.begin() + runs / 2, draws.end());
  return draws[runs / 2];
}

}  // namespace

InnerProductEstimate true_amp_est(const OracleFactory& a, Index y, double epsilon, double delta,
                                  EstimationBackend backend, std::uint64_t seed) {
  InnerProductEstimate out;
  out.epsilon = epsilon;
  out.delta = delta;
  out.m = true_amp_est_width(epsilon);
  out.repetitions = median_runs(delta);
  if (y >= bit(a.width())) throw ConfigError("target basis value does not fit the preparation");

  {
    RegisterLayout l;
    const Register r = l.add("a", a.width());
    StateVector s(l);
    a.fresh().on(r)->apply(s);
    out.true_modulus = std::abs(s.amplitude(y));
  }

  const Component re = estimate_component(a, y, out.m, TestPart::Real, backend);
  const Component im = estimate_component(a, y, out.m, TestPart::Imag, backend);
  out.real_median_distribution = median_distribution(re.single, out.repetitions);
  out.imag_median_distribution = median_distribution(im.single, out.repetitions);
  // Every repetition is the same circuit; the ledger of one run scales exactly.
  out.calls = (re.calls + im.calls).scaled(static_cast<std::uint64_t>(out.repetitions));
  out.qubits = a.width() + 1 + out.m;

  double success = 0;
  for (const auto& [c, pc] : out.real_median_distribution) {
    for (const auto& [d, pd] : out.imag_median_distribution) {
      if (std::abs(combine_components(std::abs(c), std::abs(d)) - out.true_modulus) <= epsilon) success += pc * pd;
    }
  }
  out.exact_success_prob = std::min(success, 1.0);
  out.real_part = sample_median(re.single, out.repetitions, seed, 1);
  out.imag_part = sample_median(im.single, out.repetitions, seed, 2);
  out.norm = combine_components(out.real_part, out.imag_part);
  return out;
}

}  // namespace ampdist
