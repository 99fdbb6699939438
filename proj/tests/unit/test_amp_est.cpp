#include <cmath>
#include <numbers>

#include "ampdist/amp_est.hpp"
#include "ampdist/gates.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ampdist;

namespace {

OracleFactory bernoulli_prep(double p) {
  const double angle = 2 * std::asin(std::sqrt(p));
  return OracleFactory(1, "A", [angle](const Register& r) { return gate_unitary(r.qubit(0), mat2::ry(angle)); });
}

OracleFactory weights_prep(std::vector<double> probs) {
  const int w = static_cast<int>(std::log2(probs.size()));
  std::vector<Complex> amps;
  for (double p : probs) amps.emplace_back(std::sqrt(p));
  return OracleFactory(w, "O_D", [amps](const Register& r) { return amplitude_prep(r, amps); });
}

}  // namespace

TEST_SUITE("amp-est") {

TEST_CASE("decode examples") {
  CHECK(decode_estimate(0, 5) == 0.0);
  CHECK(decode_estimate(16, 5) == doctest::Approx(1.0));
  CHECK(decode_estimate(2, 3) == doctest::Approx(0.5));
  CHECK(decode_estimate(3, 5) == doctest::Approx(decode_estimate(29, 5)));
  CHECK_THROWS_AS(decode_estimate(8, 3), ConfigError);
}

TEST_CASE("one Grover step on H^2 with one marked state of four reaches certainty") {
  RegisterLayout l;
  const auto w = l.add("w", 2);
  StateVector s(l);
  auto prep = make_counted(hadamard_on(w), "A");
  auto marker = make_counted(basis_marker(3)(w), "M");
  prep->apply(s);
  CHECK(s.marginal_probability(w, 3) == doctest::Approx(0.25));
  auto g = grover_iterator(prep, marker);
  g->apply(s);
  CHECK(s.marginal_probability(w, 3) == doctest::Approx(1.0));
  for (int j = 1; j < 5; ++j) g->apply(s);
  CHECK(prep->ledger().forward == 6);
  CHECK(prep->ledger().inverse == 5);
  CHECK(marker->ledger().forward == 5);
}

TEST_CASE("Grover iterator rotates by twice the marked angle") {
  for (double p : {0.03, 0.2, 0.45}) {
    const double theta = std::asin(std::sqrt(p));
    RegisterLayout l;
    const auto w = l.add("w", 1);
    StateVector s(l);
    auto prep = bernoulli_prep(p).on(w);
    auto marker = make_counted(basis_marker(1)(w), "M");
    prep->apply(s);
    auto g = grover_iterator(prep, marker);
    for (int j = 1; j <= 4; ++j) {
      g->apply(s);
      CHECK(s.marginal_probability(w, 1) == doctest::Approx(std::pow(std::sin((2 * j + 1) * theta), 2)));
    }
  }
}

TEST_CASE("QAE exact cases") {
  auto r0 = qae(bernoulli_prep(0.0), basis_marker(1), AEConfig{5});
  CHECK(r0.raw_distribution()[0] == doctest::Approx(1.0));
  auto r1 = qae(bernoulli_prep(1.0), basis_marker(1), AEConfig{5});
  CHECK(r1.raw_distribution()[16] == doctest::Approx(1.0));
  auto rh = qae(bernoulli_prep(0.5), basis_marker(1), AEConfig{3});
  const auto d = rh.raw_distribution();
  CHECK(d[2] + d[6] == doctest::Approx(1.0));
  CHECK(d[2] == doctest::Approx(0.5));
}

TEST_CASE("QAE charges exactly 2^m - 1 marker calls") {
  for (int m = 1; m <= 7; ++m) {
    auto r = qae(bernoulli_prep(0.3), basis_marker(1), AEConfig{m});
    CHECK(r.calls.marker.total() == bit(m) - 1);
    CHECK(r.calls.prep.forward_calls() == bit(m));
    CHECK(r.calls.prep.inverse_calls() == bit(m) - 1);
  }
}

TEST_CASE("QAE confidence bound holds for random p") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = u(rng);
    for (int q : {2, 4}) {
      auto r = qae(bernoulli_prep(p), basis_marker(1), AEConfig::for_accuracy(q));
      CHECK(r.mass_within(p, std::ldexp(1.0, -q)) >= 8 / (std::numbers::pi * std::numbers::pi) - 1e-9);
      CHECK(r.mass_within(p, qae_error_bound(p, q + 3)) >= 8 / (std::numbers::pi * std::numbers::pi) - 1e-9);
    }
  }
}

TEST_CASE("raw distribution is symmetric under reflection") {
  auto r = qae(bernoulli_prep(0.37), basis_marker(1), AEConfig{6});
  const auto d = r.raw_distribution();
  for (Index a = 1; a < 64; ++a) CHECK(d[a] == doctest::Approx(d[64 - a]).epsilon(1e-9));
}

TEST_CASE("exact-phase probabilities estimate deterministically") {
  for (int m = 3; m <= 6; ++m) {
    for (Index j = 0; j <= bit(m - 1); ++j) {
      const double p = decode_estimate(j, m);
      auto r = qae(bernoulli_prep(p), basis_marker(1), AEConfig{m});
      CHECK(r.mass_within(p, 1e-12) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("power table and controlled powers give the same state and ledger totals") {
  for (int m = 1; m <= 5; ++m) {
    auto a = qae(weights_prep({0.1, 0.2, 0.3, 0.4}), basis_marker(2), AEConfig{m}, PowerStrategy::PowerTable);
    auto b = qae(weights_prep({0.1, 0.2, 0.3, 0.4}), basis_marker(2), AEConfig{m}, PowerStrategy::ControlledPowers);
    CHECK(a.state.distance(b.state) < 1e-9);
    CHECK(a.calls.marker.total() == b.calls.marker.total());
    CHECK(a.calls.prep.total() == b.calls.prep.total());
    CHECK(b.calls.marker.controlled_forward == bit(m) - 1);
  }
}

TEST_CASE("EQAmpEst on a basis input equals QAE with a dedicated marker") {
  const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
  const auto od = weights_prep(probs);
  for (int m = 1; m <= 5; ++m) {
    for (Index x = 0; x < 4; ++x) {
      RegisterLayout l;
      const auto in = l.add("in", 2);
      const auto work = l.add("work", 2);
      const auto est = l.add("est", m);
      StateVector s(l);
      s.set_basis(in.place(x));
      auto calls = eq_amp_est(s, od, in, work, est);
      CHECK(calls.marker.total() == bit(m) - 1);
      auto ref = qae(od, basis_marker(x), AEConfig{m});
      double err = 0;
      for (Index i = 0; i < ref.state.dimension(); ++i) {
        const Index j = in.place(x) | work.place(ref.work.value(i)) | est.place(ref.est.value(i));
        err += std::norm(ref.state.amplitude(i) - s.amplitude(j));
      }
      CHECK(std::sqrt(err) < 1e-9);
    }
  }
}

TEST_CASE("EQAmpEst is linear in the input superposition") {
  std::mt19937_64 rng(4);
  const auto od = weights_prep({0.25, 0.25, 0.5, 0.0});
  RegisterLayout l;
  const auto in = l.add("in", 2);
  const auto work = l.add("work", 2);
  const auto est = l.add("est", 4);
  const auto alpha = testutil::random_unit_vector(4, rng);
  StateVector sup(l);
  amplitude_prep(in, alpha)->apply(sup);
  eq_amp_est(sup, od, in, work, est);
  std::vector<Complex> combo(sup.dimension());
  for (Index x = 0; x < 4; ++x) {
    StateVector b(l);
    b.set_basis(in.place(x));
    eq_amp_est(b, od, in, work, est);
    for (Index i = 0; i < combo.size(); ++i) combo[i] += alpha[x] * b.amplitude(i);
  }
  double err = 0;
  for (Index i = 0; i < combo.size(); ++i) err += std::norm(combo[i] - sup.amplitude(i));
  CHECK(std::sqrt(err) < 1e-9);
}

TEST_CASE("EQAmpEst branch facts") {
  SUBCASE("point mass decodes to one with certainty") {
    const auto od = weights_prep({0, 0, 1, 0});
    RegisterLayout l;
    const auto in = l.add("in", 2);
    const auto work = l.add("work", 2);
    const auto est = l.add("est", 4);
    StateVector s(l);
    s.set_basis(in.place(2));
    eq_amp_est(s, od, in, work, est);
    CHECK(s.marginal_probability(est, 8) == doctest::Approx(1.0));
  }
  SUBCASE("uniform over four: each branch has good mass above 8/pi^2") {
    const auto od = weights_prep({0.25, 0.25, 0.25, 0.25});
    RegisterLayout l;
    const auto in = l.add("in", 2);
    const auto work = l.add("work", 2);
    const auto est = l.add("est", 6);
    StateVector s(l);
    apply_h(s, in);
    eq_amp_est(s, od, in, work, est);
    std::vector<Register> regs{in, est};
    const auto joint = s.distribution(regs);
    for (Index x = 0; x < 4; ++x) {
      std::vector<double> cond(64);
      for (Index a = 0; a < 64; ++a) cond[a] = joint[x | (a << 2)] * 4;
      CHECK(estimate_mass_within(cond, 6, 0.25, 1.0 / 8) >= 8 / (std::numbers::pi * std::numbers::pi) - 1e-9);
    }
  }
  SUBCASE("a dirty estimation register is rejected") {
    const auto od = weights_prep({0.5, 0.5});
    RegisterLayout l;
    const auto in = l.add("in", 1);
    const auto work = l.add("work", 1);
    const auto est = l.add("est", 3);
    StateVector s(l);
    s.set_basis(est.place(1));
    CHECK_THROWS_AS(eq_amp_est(s, od, in, work, est), ConfigError);
  }
}

}  // TEST_SUITE
