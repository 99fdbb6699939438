#include "ampdist/gadgets.hpp"

#include <bit>

namespace ampdist::gadgets {

void GadgetSpec::validate() const {
  auto need = [&](std::size_t n) {
    if (widths.size() != n) throw ConfigError("gadget expects " + std::to_string(n) + " registers");
  };
  switch (kind) {
    case Kind::Eq:
      need(2);
      if (parameter < 0 || parameter > widths[0] || parameter > widths[1]) {
        throw ConfigError("EQ prefix length exceeds register width");
      }
      break;
    case Kind::HalfDistance:
      need(2);
      if (widths[0] != widths[1] || widths[0] < 1 || (parameter != 0 && parameter != widths[0])) {
        throw ConfigError("HD needs value and scratch registers of equal width");
      }
      break;
    case Kind::Compare:
      need(3);
      if (widths[0] != widths[1] || widths[2] != 1) {
        throw ConfigError("CMP needs two equal-width inputs and a one-qubit flag");
      }
      break;
    case Kind::CondMajority:
      need(3);  // control, bits, out
      if (widths[1] < 1 || widths[2] != 1 || (parameter != 0 && parameter != widths[1])) {
        throw ConfigError("MAJ needs k >= 1 bits and a one-qubit output");
      }
      break;
  }
}

namespace {
void require_disjoint(Index a, Index b, const char* what) {
  if (a & b) throw ConfigError(std::string("overlapping registers in ") + what);
}
}  // namespace

void eq_prefix_phase(StateVector& s, const Register& a, const Register& b, int m, const Controls& c) {
  if (m < 0 || m > a.width || m > b.width) throw ConfigError("EQ prefix length exceeds register width");
  require_disjoint(a.mask(), b.mask(), "EQ");
  const Index pm = low_mask(m);
  s.negate_where(c, [&](Index i) { return (a.value(i) & pm) == (b.value(i) & pm); });
}

void half_distance(StateVector& s, const Register& value, const Register& out, const Controls& c) {
  if (value.width != out.width || value.width < 1) throw ConfigError("HD width mismatch");
  require_disjoint(value.mask(), out.mask(), "HD");
  const int l = value.width;
  s.apply_xor(c, out.mask(), [&](Index i) { return out.place(half_distance_value(value.value(i), l)); });
}

void compare_mark(StateVector& s, const Register& y1, const Register& y2, int flag, const Controls& c) {
  if (y1.width != y2.width) throw ConfigError("CMP width mismatch");
  require_disjoint(y1.mask(), y2.mask(), "CMP");
  require_disjoint(y1.mask() | y2.mask(), bit(flag), "CMP");
  const Index f = bit(flag);
  s.apply_xor(c, f, [&](Index i) { return y2.value(i) <= y1.value(i) ? f : Index{0}; });
}

void cond_majority(StateVector& s, const Register& control, const std::vector<int>& bits, int out,
                   const Controls& c) {
  if (bits.empty()) throw ConfigError("MAJ needs at least one bit");
  Index bmask = 0;
  for (int q : bits) {
    if (bmask & bit(q)) throw ConfigError("repeated MAJ input bit");
    bmask |= bit(q);
  }
  require_disjoint(bmask, bit(out), "MAJ");
  require_disjoint(control.mask(), bmask | bit(out), "MAJ");
  const Index f = bit(out);
  const int k = static_cast<int>(bits.size());
  s.apply_xor(c, f, [&](Index i) {
    const int ones = std::popcount(i & bmask);
    return 2 * ones >= k ? f : Index{0};
  });
}

void threshold_mark(StateVector& s, const Register& estimate, Index threshold, int flag, bool at_least,
                    const Controls& c) {
  require_disjoint(estimate.mask(), bit(flag), "threshold");
  const int l = estimate.width;
  const Index ht = half_distance_value(threshold, l);
  const Index f = bit(flag);
  s.apply_xor(c, f, [&](Index i) {
    const Index he = half_distance_value(estimate.value(i), l);
    const bool hit = at_least ? he <= ht : ht <= he;
    return hit ? f : Index{0};
  });
}

UnitaryPtr eq_prefix_unitary(const Register& a, const Register& b, int m) {
  return make_involution([a, b, m](StateVector& s, const Controls& c) { eq_prefix_phase(s, a, b, m, c); },
                         a.mask() | b.mask());
}

UnitaryPtr half_distance_unitary(const Register& value, const Register& out) {
  return make_involution([value, out](StateVector& s, const Controls& c) { half_distance(s, value, out, c); },
                         value.mask() | out.mask());
}

UnitaryPtr compare_unitary(const Register& y1, const Register& y2, int flag) {
  return make_involution([y1, y2, flag](StateVector& s, const Controls& c) { compare_mark(s, y1, y2, flag, c); },
                         y1.mask() | y2.mask() | bit(flag));
}

UnitaryPtr cond_majority_unitary(const Register& control, std::vector<int> bits, int out) {
  Index support = bit(out);
  for (int q : bits) support |= bit(q);
  return make_involution(
      [control, bits = std::move(bits), out](StateVector& s, const Controls& c) {
        cond_majority(s, control, bits, out, c);
      },
      support);
}

}  // namespace ampdist::gadgets
