#include <cmath>
#include <random>

#include "ampdist/apps.hpp"
#include "ampdist/gates.hpp"
#include "doctest.h"

using namespace ampdist;

namespace {

// Direct O(4^n) transform, independent of the butterfly.
std::vector<double> slow_walsh(const BooleanFunction& f) {
  std::vector<double> out(bit(f.n));
  for (Index x = 0; x < out.size(); ++x) {
    double s = 0;
    for (Index z = 0; z < out.size(); ++z) s += ((f(z) + std::popcount(x & z)) % 2) ? -1.0 : 1.0;
    out[x] = s / static_cast<double>(out.size());
  }
  return out;
}

BooleanFunction bent4() {
  return BooleanFunction::from_predicate(4, [](Index x) { return (((x & 1) & (x >> 1)) ^ ((x >> 2) & (x >> 3) & 1)) & 1; });
}

}  // namespace

TEST_SUITE("apps") {

TEST_CASE("array oracle examples") {
  const auto od = array_to_oracle({1, 1, 2, 3});
  CHECK(od.probs[1] == doctest::Approx(0.5));
  CHECK(od.probs[2] == doctest::Approx(0.25));
  CHECK(od.probs[3] == doctest::Approx(0.25));
  CHECK(od.probs[0] == doctest::Approx(0.0));
  CHECK(array_to_oracle({0, 0, 0, 0}).probs[0] == doctest::Approx(1.0));
  for (double p : array_to_oracle({0, 1, 2, 3}).probs) CHECK(p == doctest::Approx(0.25));
  // three entries: the padded index branch carries no weight
  const auto odd = array_to_oracle({2, 2, 0});
  CHECK(odd.probs[2] == doctest::Approx(2.0 / 3));
  CHECK(odd.probs[0] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(array_to_oracle({5}, 4), ConfigError);
  CHECK(array_to_oracle({1, 2}, 8).outcome_width == 3);

  const auto freq = brute_force_freq({1, 1, 2, 3});
  CHECK(freq.at(1) == 2);
  CHECK(freq.at(2) == 1);
  CHECK(freq.at(3) == 1);
}

TEST_CASE("k-distinctness examples") {
  const auto yes = kdistinctness({1, 1, 2, 3}, 2, 0.1, {.seed = 5});
  CHECK(yes.truth);
  CHECK(yes.exact_success_prob >= 0.9);
  if (yes.answer) {
    REQUIRE(yes.witness.has_value());
  }
  const auto no = kdistinctness({0, 1, 2, 3}, 2, 0.1);
  CHECK_FALSE(no.truth);
  CHECK(no.exact_success_prob >= 0.9);
  CHECK(kdistinctness({3, 1}, 1, 0.1).answer);
  CHECK_THROWS_AS(kdistinctness({3, 1}, 3, 0.1), ConfigError);
}

TEST_CASE("k-distinctness on random arrays of eight") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> value(0, 7);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Index> arr(8);
    for (auto& v : arr) v = static_cast<Index>(value(rng));
    for (int k : {2, 3}) {
      const auto r = kdistinctness(arr, k, 0.1);
      std::size_t most = 0;
      for (const auto& [v, c] : brute_force_freq(arr)) most = std::max(most, c);
      CHECK(r.truth == (static_cast<int>(most) >= k));
      CHECK(r.exact_success_prob >= 0.9);
    }
  }
}

TEST_CASE("walsh spectrum") {
  const auto zero = BooleanFunction::parse("0000");
  const auto w0 = walsh_spectrum(zero);
  CHECK(w0[0] == doctest::Approx(1.0));
  for (Index x = 1; x < 4; ++x) CHECK(w0[x] == doctest::Approx(0.0));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 6;
    const auto f = BooleanFunction::from_predicate(n, [&](Index) { return (rng() & 1) != 0; });
    const auto w = walsh_spectrum(f);
    double energy = 0;
    for (double c : w) energy += c * c;
    CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
    if (n <= 4) {
      const auto slow = slow_walsh(f);
      for (Index x = 0; x < w.size(); ++x) CHECK(w[x] == doctest::Approx(slow[x]));
    }
  }
  CHECK(max_walsh(bent4()) == doctest::Approx(0.25));
  CHECK(nonlinearity_value(bent4()) == doctest::Approx(0.375));
  // 16-bit string of weight 4
  const auto quarter = BooleanFunction::parse("1001000000010010");
  CHECK(walsh_spectrum(quarter)[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(BooleanFunction::parse("010"), ParseError);
  CHECK_THROWS_AS(BooleanFunction::parse("01x0"), ParseError);
}

TEST_CASE("DJ preparation") {
  for (const auto& text : {std::string("0000"), std::string("0101"), std::string("0001"), std::string("01101001")}) {
    const auto f = BooleanFunction::parse(text);
    const auto dj = dj_prep(f);
    RegisterLayout l;
    const auto r = l.add("x", f.n);
    StateVector s(l);
    dj.prep.on(r)->apply(s);
    const auto w = walsh_spectrum(f);
    for (Index x = 0; x < w.size(); ++x) CHECK(s.amplitude(x).real() == doctest::Approx(w[x]).epsilon(1e-12));
    CHECK(dj.phase.ledger().forward == 1);
  }
}

TEST_CASE("mode search") {
  const auto point = mode_search(weights_oracle({0, 0, 1, 0}), 0.5, 0.1);
  CHECK(point.exact_success_prob >= 0.9);
  CHECK(std::abs(point.estimate - 1) <= 0.25 + 1e-12);
  const auto skew = mode_search(weights_oracle({5, 1, 1, 1}), 0.25, 0.1, {.seed = 11});
  CHECK(skew.true_mode == 0);
  CHECK(skew.exact_success_prob >= 0.9);
  CHECK(skew.path.size() == static_cast<std::size_t>(skew.rounds) + 1);
  const auto again = mode_search(weights_oracle({5, 1, 1, 1}), 0.25, 0.1, {.seed = 11});
  CHECK(again.mode == skew.mode);
  CHECK(again.estimate == skew.estimate);
}

TEST_CASE("nonlinearity fixtures") {
  const auto zero = nonlinearity(BooleanFunction::parse("00000000"), 0.1, 0.2);
  CHECK(zero.eta == doctest::Approx(0.0));
  CHECK(zero.exact_success_prob >= 0.8);
  const auto bent = nonlinearity(bent4(), 0.1, 0.2, {.seed = 2});
  CHECK(bent.eta == doctest::Approx(0.375));
  CHECK(bent.exact_success_prob >= 0.8);
  CHECK(bent.rounds == 2);
  CHECK_THROWS_AS(nonlinearity(bent4(), 0.6, 0.2), ConfigError);
}

}  // TEST_SUITE
