#include <cmath>
#include <numbers>

#include "ampdist/gadgets.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ampdist;
using namespace ampdist::gadgets;

namespace {

// Applies `op` to |i> and returns (target index, amplitude) of the single nonzero entry.
template <class Op>
std::pair<Index, Complex> image_of(const RegisterLayout& l, Index i, Op op) {
  StateVector s(l);
  s.set_basis(i);
  op(s);
  Index where = 0;
  int nonzero = 0;
  for (Index j = 0; j < s.dimension(); ++j) {
    if (std::abs(s.amplitude(j)) > 1e-12) {
      where = j;
      ++nonzero;
    }
  }
  REQUIRE(nonzero == 1);
  return {where, s.amplitude(where)};
}

// Bits written qubit 0 first, e.g. "101" -> q0=1, q1=0, q2=1.
Index from_bits(const char* s) {
  Index v = 0;
  for (int i = 0; s[i]; ++i) {
    if (s[i] == '1') v |= bit(i);
  }
  return v;
}

}  // namespace

TEST_SUITE("gadgets") {

TEST_CASE("EQ examples") {
  RegisterLayout l;
  const auto a = l.add("a", 3);
  const auto b = l.add("b", 3);
  auto run = [&](const char* x, const char* y, int m) {
    return image_of(l, a.place(from_bits(x)) | b.place(from_bits(y)),
                    [&](StateVector& s) { eq_prefix_phase(s, a, b, m); })
        .second;
  };
  CHECK(run("101", "101", 3).real() == doctest::Approx(-1));
  CHECK(run("101", "100", 3).real() == doctest::Approx(1));
  CHECK(run("101", "100", 2).real() == doctest::Approx(-1));
  StateVector s(l);
  CHECK_THROWS_AS(eq_prefix_phase(s, a, b, 4), ConfigError);
}

TEST_CASE("EQ exhaustive and phase-only") {
  for (int w = 1; w <= 5; ++w) {
    RegisterLayout l;
    const auto a = l.add("a", w);
    const auto b = l.add("b", w);
    for (int m = 0; m <= w; ++m) {
      for (Index x = 0; x < bit(w); ++x) {
        for (Index y = 0; y < bit(w); ++y) {
          const auto [where, amp] = image_of(l, a.place(x) | b.place(y),
                                             [&](StateVector& s) { eq_prefix_phase(s, a, b, m); });
          bool equal = true;
          for (int i = 0; i < m; ++i) equal &= ((x >> i) & 1) == ((y >> i) & 1);
          CHECK(where == (a.place(x) | b.place(y)));
          CHECK(amp.real() == doctest::Approx(equal ? -1.0 : 1.0));
        }
      }
    }
  }
  std::mt19937_64 rng(2);
  RegisterLayout l;
  const auto a = l.add("a", 3);
  const auto b = l.add("b", 3);
  auto s = testutil::random_state(l, rng);
  const auto before = s;
  eq_prefix_phase(s, a, b, 2);
  for (Index i = 0; i < s.dimension(); ++i) CHECK(std::abs(s.amplitude(i)) == doctest::Approx(std::abs(before.amplitude(i))));
}

TEST_CASE("HD examples and exhaustive check") {
  CHECK(half_distance_value(6, 4) == 2);
  CHECK(half_distance_value(8, 4) == 0);
  CHECK(half_distance_value(15, 4) == 7);
  for (int w = 1; w <= 5; ++w) {
    RegisterLayout l;
    const auto y = l.add("y", w);
    const auto o = l.add("o", w);
    for (Index v = 0; v < bit(w); ++v) {
      for (Index b = 0; b < bit(w); ++b) {
        const Index mid = bit(w - 1);
        const Index expect = static_cast<Index>(std::llabs(static_cast<long long>(mid) - static_cast<long long>(v)));
        const auto [where, amp] = image_of(l, y.place(v) | o.place(b), [&](StateVector& s) { half_distance(s, y, o); });
        CHECK(where == (y.place(v) | o.place(b ^ expect)));
        CHECK(amp.real() == doctest::Approx(1.0));
      }
    }
  }
  RegisterLayout bad;
  const auto y = bad.add("y", 3);
  const auto o = bad.add("o", 2);
  StateVector s(bad);
  CHECK_THROWS_AS(half_distance(s, y, o), ConfigError);
}

TEST_CASE("CMP examples and exhaustive check") {
  RegisterLayout l;
  const auto y1 = l.add("y1", 3);
  const auto y2 = l.add("y2", 3);
  const auto f = l.add("f", 1);
  auto flag_after = [&](Index a, Index b, Index fl) {
    const auto [where, amp] = image_of(l, y1.place(a) | y2.place(b) | f.place(fl),
                                       [&](StateVector& s) { compare_mark(s, y1, y2, f.qubit(0)); });
    return f.value(where);
  };
  CHECK(flag_after(5, 3, 0) == 1);
  CHECK(flag_after(3, 5, 0) == 0);
  CHECK(flag_after(4, 4, 1) == 0);
  for (int w = 1; w <= 5; ++w) {
    RegisterLayout lw;
    const auto a = lw.add("a", w);
    const auto b = lw.add("b", w);
    const auto fl = lw.add("f", 1);
    for (Index x = 0; x < bit(w); ++x) {
      for (Index y = 0; y < bit(w); ++y) {
        for (Index fv = 0; fv < 2; ++fv) {
          const auto [where, amp] = image_of(lw, a.place(x) | b.place(y) | fl.place(fv),
                                             [&](StateVector& s) { compare_mark(s, a, b, fl.qubit(0)); });
          CHECK(where == (a.place(x) | b.place(y) | fl.place(fv ^ (y <= x ? 1 : 0))));
        }
      }
    }
  }
}

TEST_CASE("Cond-MAJ examples and exhaustive check") {
  for (int k = 1; k <= 5; ++k) {
    RegisterLayout l;
    const auto ctl = l.add("c", 1);
    const auto bits = l.add("bits", k);
    const auto out = l.add("out", 1);
    std::vector<int> qs;
    for (int i = 0; i < k; ++i) qs.push_back(bits.qubit(i));
    for (Index c = 0; c < 2; ++c) {
      for (Index v = 0; v < bit(k); ++v) {
        for (Index o = 0; o < 2; ++o) {
          int ones = 0;
          for (int i = 0; i < k; ++i) ones += static_cast<int>((v >> i) & 1);
          const Index flip = (2 * ones >= k) ? 1 : 0;
          const auto [where, amp] = image_of(l, ctl.place(c) | bits.place(v) | out.place(o),
                                             [&](StateVector& s) { cond_majority(s, ctl, qs, out.qubit(0)); });
          CHECK(where == (ctl.place(c) | bits.place(v) | out.place(o ^ flip)));
        }
      }
    }
  }
  RegisterLayout l;
  const auto ctl = l.add("c", 1);
  const auto bits = l.add("bits", 3);
  const auto out = l.add("out", 1);
  std::vector<int> qs{bits.qubit(0), bits.qubit(1), bits.qubit(2)};
  auto flips = [&](Index v) {
    return out.value(image_of(l, bits.place(v), [&](StateVector& s) { cond_majority(s, ctl, qs, out.qubit(0)); }).first);
  };
  CHECK(flips(from_bits("110")) == 1);
  CHECK(flips(from_bits("001")) == 0);
  StateVector s(l);
  std::vector<int> overlap{bits.qubit(0), out.qubit(0)};
  CHECK_THROWS_AS(cond_majority(s, ctl, overlap, out.qubit(0)), ConfigError);
  // k = 2 tie counts as majority
  RegisterLayout l2;
  const auto c2 = l2.add("c", 1);
  const auto b2 = l2.add("b", 2);
  const auto o2 = l2.add("o", 1);
  std::vector<int> q2{b2.qubit(0), b2.qubit(1)};
  CHECK(o2.value(image_of(l2, b2.place(1), [&](StateVector& st) { cond_majority(st, c2, q2, o2.qubit(0)); }).first) == 1);
}

TEST_CASE("HD ordering tracks sin^2 ordering exhaustively for l <= 8") {
  for (int l = 1; l <= 8; ++l) {
    const double n = static_cast<double>(bit(l));
    for (Index a = 0; a < bit(l); ++a) {
      for (Index t = 0; t < bit(l); ++t) {
        const double sa = std::pow(std::sin(std::numbers::pi * a / n), 2);
        const double st = std::pow(std::sin(std::numbers::pi * t / n), 2);
        const bool by_sin = sa >= st - 1e-12;
        const bool by_hd = half_distance_value(a, l) <= half_distance_value(t, l);
        CHECK(by_sin == by_hd);
      }
    }
  }
}

TEST_CASE("fused threshold equals HD, CMP, HD-inverse with scratch") {
  // Both sides permute basis states; feeding every est value at once with distinct
  // amplitudes makes equal output states imply equal permutations.
  for (int l = 1; l <= 5; ++l) {
    RegisterLayout lay;
    const auto est = lay.add("est", l);
    const auto thr = lay.add("thr", l);
    const auto s1 = lay.add("s1", l);
    const auto s2 = lay.add("s2", l);
    const auto f = lay.add("f", 1);
    std::vector<Complex> weights(bit(l + 1));
    for (Index i = 0; i < weights.size(); ++i) weights[i] = Complex(1.0 + static_cast<double>(i), 0.5 * static_cast<double>(i));
    for (Index t = 0; t < bit(l); ++t) {
      for (bool at_least : {true, false}) {
        StateVector ex(lay);
        auto& amps = ex.amplitudes();
        amps[0] = 0;
        for (Index a = 0; a < bit(l); ++a) {
          for (Index fv = 0; fv < 2; ++fv) amps[est.place(a) | thr.place(t) | f.place(fv)] = weights[a | (fv << l)];
        }
        StateVector fu = ex;
        half_distance(ex, thr, s1);
        half_distance(ex, est, s2);
        if (at_least) {
          compare_mark(ex, s1, s2, f.qubit(0));
        } else {
          compare_mark(ex, s2, s1, f.qubit(0));
        }
        half_distance(ex, est, s2);
        half_distance(ex, thr, s1);
        threshold_mark(fu, est, t, f.qubit(0), at_least);
        CHECK(ex.distance(fu) < 1e-12);
      }
    }
  }
}

TEST_CASE("gadgets are unitary on random states") {
  std::mt19937_64 rng(9);
  RegisterLayout l;
  const auto a = l.add("a", 3);
  const auto b = l.add("b", 3);
  const auto f = l.add("f", 1);
  std::vector<UnitaryPtr> all{eq_prefix_unitary(a, b, 2), half_distance_unitary(a, b), compare_unitary(a, b, f.qubit(0)),
                              cond_majority_unitary(f, {a.qubit(0), a.qubit(1), b.qubit(2)}, b.qubit(0))};
  for (const auto& u : all) {
    for (int trial = 0; trial < 64; ++trial) {
      auto s = testutil::random_state(l, rng);
      const auto orig = s;
      u->apply(s);
      CHECK(std::abs(s.norm() - 1) < 1e-9);
      u->apply_adjoint(s);
      CHECK(s.distance(orig) < 1e-9);
    }
  }
}

TEST_CASE("gadget spec validation") {
  CHECK_NOTHROW(GadgetSpec{Kind::Compare, {3, 3, 1}, 0}.validate());
  CHECK_THROWS_AS((GadgetSpec{Kind::Compare, {3, 2, 1}, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((GadgetSpec{Kind::HalfDistance, {3, 4}, 3}.validate()), ConfigError);
  CHECK_THROWS_AS((GadgetSpec{Kind::Eq, {2, 3}, 3}.validate()), ConfigError);
  CHECK_NOTHROW(GadgetSpec{Kind::CondMajority, {1, 5, 1}, 5}.validate());
}

}  // TEST_SUITE
