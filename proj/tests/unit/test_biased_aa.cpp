#include <cmath>

#include "ampdist/biased_aa.hpp"
#include "ampdist/gates.hpp"
#include "ampdist/stats.hpp"
#include "doctest.h"

using namespace ampdist;

namespace {

OracleFactory uniform(int n) {
  return OracleFactory(n, "A", [](const Register& r) { return hadamard_on(r); });
}

double brute_binomial_tail(int k, double p, int at_least) {
  double total = 0;
  for (Index mask = 0; mask < bit(k); ++mask) {
    const int ones = std::popcount(mask);
    if (ones >= at_least) total += std::pow(p, ones) * std::pow(1 - p, k - ones);
  }
  return total;
}

}  // namespace

TEST_SUITE("biased-aa") {

TEST_CASE("choose_k examples") {
  CHECK(choose_k(0.9, 0.1) == 27);
  CHECK(choose_k(0.9, 0.999999) == 1);
  CHECK(choose_k(0.75, 0.5) % 2 == 1);
  CHECK(choose_k(0.6, 0.01) > choose_k(0.9, 0.01));
  CHECK_THROWS_AS(choose_k(0.5, 0.1), ConfigError);
  const auto params = make_params(0.9, 0.5, 0.1);
  CHECK(params.delta_prime == doctest::Approx(0.0625 * 0.01));
  CHECK(make_params(0.9, 0.5, 0.1, 3).k == 3);
}

TEST_CASE("majority statistics match enumeration") {
  for (int k : {1, 3, 5, 9, 11}) {
    for (double p : {0.55, 0.7, 0.9}) {
      const double exact = brute_binomial_tail(k, p, (k + 1) / 2);
      CHECK(binomial_tail(k, p, (k + 1) / 2) == doctest::Approx(exact).epsilon(1e-12));
      CHECK(majority_error(k, p, true) == doctest::Approx(1 - exact).epsilon(1e-12));
      const auto dist = count_distribution(std::vector<double>(k, p));
      double tail = 0;
      for (int j = (k + 1) / 2; j <= k; ++j) tail += dist[j];
      CHECK(tail == doctest::Approx(exact).epsilon(1e-12));
    }
  }
  double last = 1;
  for (int k = 1; k < 80; k += 2) {
    const double err = majority_error(k, 0.7, true);
    CHECK(err <= last + 1e-15);
    last = err;
  }
  // the chosen k meets its Chernoff target
  for (double p : {0.6, 0.75, 0.9}) {
    for (double dp : {0.1, 0.01, 1e-4}) CHECK(majority_error(choose_k(p, dp), p, true) <= dp);
  }
}

TEST_CASE("fixed-point schedule agrees with its closed form") {
  for (double lambda : {1.0, 0.5, 0.25, 0.05}) {
    for (double delta : {0.2, 0.1, 0.01}) {
      const auto sc = fpaa_schedule(lambda, delta);
      CHECK(sc.iterations <= fpaa_iteration_cap(lambda, delta));
      for (double w : {lambda, std::min(1.0, 1.5 * lambda), 1.0, 0.3 * lambda, 0.0}) {
        const auto [g, b] = fpaa_two_level(sc, w);
        CHECK(std::norm(g) + std::norm(b) == doctest::Approx(1.0));
        CHECK(std::norm(g) == doctest::Approx(fpaa_success_formula(sc, w)).epsilon(1e-9));
        if (w >= lambda) CHECK(std::norm(g) >= 1 - delta - 1e-12);
      }
    }
  }
  const auto sc = fpaa_schedule(0.25, 0.1);
  CHECK(std::norm(fpaa_two_level(sc, 0.25).first) >= 0.9);
  // when the good mass is at the false-positive floor it stays small
  const double floor = std::pow(0.25, 4) * 0.01;
  CHECK(std::norm(fpaa_two_level(sc, floor).first) <= 0.1);
}

TEST_CASE("full statevector follows the two-level picture") {
  for (int good : {1, 3}) {
    RegisterLayout full;
    const Register rr = full.add("r", 2);
    const Register f = full.add("f", 1);
    std::vector<Complex> amps(8, 0.0);
    for (Index x = 0; x < 4; ++x) amps[x | (x < static_cast<Index>(good) ? 4 : 0)] = 0.5;
    const auto a = amplitude_prep(Register{"all", 0, 3}, amps);
    const auto sc = fpaa_schedule(0.25, 0.05);
    StateVector s(full);
    fpaa_full(s, *a, low_mask(3), f.qubit(0), sc);
    const double w = good / 4.0;
    CHECK(s.marginal_probability(f, 1) == doctest::Approx(std::norm(fpaa_two_level(sc, w).first)).epsilon(1e-10));
  }
}

TEST_CASE("full and factored engines agree") {
  const auto oracle = synthetic_oracle(2, 0.85, [](Index x) { return x == 2; });
  for (int k : {1, 3, 5}) {
    AmplifyOptions full, fact;
    full.engine = AmplifyEngine::Full;
    fact.engine = AmplifyEngine::Factored;
    full.relaxed_k = fact.relaxed_k = k;
    const auto a = uniform(2);
    const auto x = errored_amplify(a, oracle, 0.25, 0.1, full);
    const auto y = errored_amplify(uniform(2), oracle, 0.25, 0.1, fact);
    CHECK(x.engine_used == AmplifyEngine::Full);
    CHECK(y.engine_used == AmplifyEngine::Factored);
    CHECK(x.qubits == 2 + k + 1);
    CHECK(x.initial_good_mass == doctest::Approx(y.initial_good_mass).epsilon(1e-10));
    CHECK(x.flag_one_prob == doctest::Approx(y.flag_one_prob).epsilon(1e-10));
    for (Index i = 0; i < 4; ++i) {
      CHECK(x.witness_distribution[i] == doctest::Approx(y.witness_distribution[i]).epsilon(1e-9));
    }
    CHECK(x.prep_calls == y.prep_calls);
    CHECK(x.oracle_calls == y.oracle_calls);
    CHECK(x.oracle_applications == y.oracle_applications);
  }
}

TEST_CASE("amplification finds a planted witness") {
  const auto oracle = synthetic_oracle(3, 0.9, [](Index x) { return x == 5; });
  const auto out = errored_amplify(uniform(3), oracle, 0.125, 0.1);
  CHECK(out.solution_exists);
  CHECK(out.params.k == choose_k(0.9, out.params.delta_prime));
  CHECK(out.exact_success_prob >= 0.9);
  CHECK(out.witness_good_given_flag >= 0.99);
  CHECK(out.max_flag_error <= out.params.delta_prime);
  CHECK(out.iterations <= fpaa_iteration_cap(0.125, 0.1) + 0);
  const auto l = static_cast<std::uint64_t>(out.iterations);
  CHECK(out.prep_calls.forward == l + 1);
  CHECK(out.prep_calls.inverse == l);
  CHECK(out.oracle_applications == static_cast<std::uint64_t>(out.params.k) * (2 * l + 1));
  CHECK(out.oracle_calls.forward == static_cast<std::uint64_t>(out.params.k) * (l + 1));
  CHECK(out.oracle_calls.inverse == static_cast<std::uint64_t>(out.params.k) * l);
}

TEST_CASE("no solution and three-quarter cases") {
  const auto none = synthetic_oracle(2, 0.8, [](Index) { return false; });
  const auto a = errored_amplify(uniform(2), none, 0.25, 0.1);
  CHECK_FALSE(a.solution_exists);
  CHECK(a.exact_success_prob >= 0.9);

  const auto most = synthetic_oracle(2, 0.8, [](Index x) { return x != 0; });
  const auto b = errored_amplify(uniform(2), most, 0.25, 0.1);
  CHECK(b.solution_exists);
  CHECK(b.exact_success_prob >= 0.9);

  // zero amplitude on the only good input means no solution
  const auto only_zero = synthetic_oracle(2, 0.9, [](Index x) { return x == 3; });
  const auto prep0 = OracleFactory(2, "A0", [](const Register& r) { return hadamard_on(r.slice(0, 1)); });
  const auto c = errored_amplify(prep0, only_zero, 0.5, 0.1);
  CHECK_FALSE(c.solution_exists);
  CHECK(c.exact_success_prob >= 0.9);
}

TEST_CASE("verifier boosting and determinism") {
  const auto oracle = synthetic_oracle(3, 0.9, [](Index x) { return x == 1; });
  AmplifyOptions opt;
  opt.verifier = [](Index x) { return x == 1; };
  opt.seed = 7;
  const auto one = errored_amplify(uniform(3), oracle, 0.125, 0.01, opt);
  CHECK(one.repetitions == static_cast<int>(std::ceil(std::log2(100.0) / 2)));
  CHECK(one.exact_success_prob >= 0.99);
  const auto two = errored_amplify(uniform(3), oracle, 0.125, 0.01, opt);
  CHECK(one.witness_found == two.witness_found);
  CHECK(one.witness == two.witness);
}

TEST_CASE("qubit budget is enforced for the full engine") {
  const auto oracle = synthetic_oracle(3, 0.55, [](Index x) { return x == 1; });
  AmplifyOptions opt;
  opt.engine = AmplifyEngine::Full;
  CHECK_THROWS_AS(errored_amplify(uniform(3), oracle, 0.125, 0.1, opt), BudgetExceeded);
  opt.engine = AmplifyEngine::Auto;
  const auto out = errored_amplify(uniform(3), oracle, 0.125, 0.1, opt);
  CHECK(out.engine_used == AmplifyEngine::Factored);
  CHECK(out.qubits == 3 + out.params.k + 1);
}

}  // TEST_SUITE
