#pragma once

#include <string>
#include <vector>

#include "ampdist/unitary.hpp"

namespace ampdist::gadgets {

enum class Kind { Eq, HalfDistance, Compare, CondMajority };

// Shape description used to validate a gadget before wiring it.
struct GadgetSpec {
  Kind kind = Kind::Eq;
  std::vector<int> widths;  // per-register qubit counts, in call order
  int parameter = 0;        // EQ prefix length, HD width, or MAJ k

  void validate() const;
};

// Phase -1 iff the low m qubits of a and b agree.
void eq_prefix_phase(StateVector& s, const Register& a, const Register& b, int m, const Controls& c = {});
// out ^= |2^{l-1} - value|, l = value.width.
void half_distance(StateVector& s, const Register& value, const Register& out, const Controls& c = {});
// flag ^= [y2 <= y1].
void compare_mark(StateVector& s, const Register& y1, const Register& y2, int flag, const Controls& c = {});
// out ^= [#ones(bits) >= k/2]. The control register is only checked for overlap: the
// majority does not depend on its value, so the branch-wise operator is I (x) MAJ.
void cond_majority(StateVector& s, const Register& control, const std::vector<int>& bits, int out,
                   const Controls& c = {});

inline Index half_distance_value(Index y, int l) {
  const Index mid = bit(l - 1);
  return y >= mid ? y - mid : mid - y;
}

// The composed HD / CMP / HD-inverse effect on the flag, without scratch registers:
// flag ^= [HD(estimate) <= HD(threshold)] (at_least = true) or
// flag ^= [HD(threshold) <= HD(estimate)] (at_least = false).
void threshold_mark(StateVector& s, const Register& estimate, Index threshold, int flag, bool at_least,
                    const Controls& c = {});

UnitaryPtr eq_prefix_unitary(const Register& a, const Register& b, int m);
UnitaryPtr half_distance_unitary(const Register& value, const Register& out);
UnitaryPtr compare_unitary(const Register& y1, const Register& y2, int flag);
UnitaryPtr cond_majority_unitary(const Register& control, std::vector<int> bits, int out);

}  // namespace ampdist::gadgets
