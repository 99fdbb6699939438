#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ampdist/errors.hpp"

namespace ampdist {

using Complex = std::complex<double>;
using Index = std::uint64_t;

inline constexpr int kMaxQubits = 28;
inline constexpr double kStateTolerance = 1e-9;
inline constexpr double kDriftTolerance = 1e-12;

inline constexpr Index bit(int q) { return Index{1} << q; }
inline constexpr Index low_mask(int width) { return width >= 64 ? ~Index{0} : bit(width) - 1; }

struct Register {
  std::string name;
  int offset = 0;
  int width = 0;

  Index mask() const { return low_mask(width) << offset; }
  Index dimension() const { return bit(width); }
  int qubit(int i) const { return offset + i; }
  Index value(Index basis) const { return (basis >> offset) & low_mask(width); }
  Index place(Index value) const { return (value & low_mask(width)) << offset; }
  // The low `count` qubits of this register, as a register of its own.
  Register prefix(int count, std::string sub_name = {}) const;
  Register slice(int start, int count, std::string sub_name = {}) const;
};

// Named, disjoint, contiguous segments. Register 0 sits on the least significant bits.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  Register add(std::string name, int width);
  const Register& at(std::string_view name) const;
  bool contains(std::string_view name) const;
  int width() const { return width_; }
  const std::vector<Register>& registers() const { return regs_; }

 private:
  std::vector<Register> regs_;
  int width_ = 0;
};

// Conjunction of fixed qubit values; an empty mask means "always".
struct Controls {
  Index mask = 0;
  Index value = 0;

  bool empty() const { return mask == 0; }
  bool admits(Index i) const { return (i & mask) == value; }
  static Controls qubit(int q, bool set = true) { return {bit(q), set ? bit(q) : 0}; }
  static Controls on(const Register& reg, Index v) { return {reg.mask(), reg.place(v)}; }
  // Throws ConfigError when the two sets disagree on a shared qubit.
  Controls operator&(const Controls& other) const;
};

using Mat2 = std::array<Complex, 4>;  // row-major 2x2

namespace mat2 {
Mat2 hadamard();
Mat2 pauli_x();
Mat2 phase(double angle);  // diag(1, e^{i angle})
Mat2 ry(double angle);
Mat2 adjoint(const Mat2& m);
}  // namespace mat2

// Calls f(i) for every basis index i < 2^width with (i & fixed) == value.
template <class F>
inline void for_each_matching(int width, Index fixed, Index value, F&& f) {
  const Index free = low_mask(width) & ~fixed;
  Index sub = 0;
  do {
    f(sub | value);
    sub = (sub - free) & free;
  } while (sub != 0);
}

class StateVector {
 public:
  explicit StateVector(RegisterLayout layout);
  explicit StateVector(int width);
  StateVector(RegisterLayout layout, std::vector<Complex> amplitudes);

  int width() const { return layout_.width(); }
  Index dimension() const { return amps_.size(); }
  const RegisterLayout& layout() const { return layout_; }
  const Register& reg(std::string_view name) const { return layout_.at(name); }

  std::vector<Complex>& amplitudes() { return amps_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  Complex amplitude(Index i) const { return amps_.at(i); }
  void set_basis(Index i);

  double norm() const;
  // Renormalizes if the norm drifted past kDriftTolerance; returns the drift seen.
  double settle();

  // ---- kernels ----
  void apply_matrix2(int target, const Mat2& m, const Controls& c = {});
  template <class F>
  void apply_matrix2_by(int target, const Controls& c, F&& matrix_for);
  // Dense unitary on up to three targets; targets[0] is the least significant local bit.
  void apply_dense(std::span<const int> targets, std::span<const Complex> matrix,
                   const Controls& c = {});
  template <class F>
  void apply_diagonal(const Controls& c, F&& phase_for);
  template <class F>
  void negate_where(const Controls& c, F&& predicate);
  // Basis permutation i -> i ^ g(i) where g(i) only has bits inside `out` and does
  // not read those bits.
  template <class F>
  void apply_xor(const Controls& c, Index out, F&& g);

  // ---- readout ----
  double marginal_probability(std::string_view reg, Index value) const;
  double marginal_probability(const Register& reg, Index value) const;
  std::map<Index, double> exact_outcome_distribution(std::string_view reg) const;
  // Dense joint distribution; index is the little-endian concatenation of the registers.
  std::vector<double> distribution(std::span<const Register> regs) const;
  std::vector<double> distribution(const Register& reg) const;
  std::pair<Index, StateVector> measure(std::string_view reg, std::uint64_t seed) const;

  double distance(const StateVector& other) const;

 private:
  void check_target(int q) const;

  RegisterLayout layout_;
  std::vector<Complex> amps_;
};

// Uniform double in [0,1) from a seeded 64-bit engine, identical on every platform.
double seeded_uniform(std::uint64_t seed, std::uint64_t stream = 0);

template <class F>
void StateVector::apply_matrix2_by(int target, const Controls& c, F&& matrix_for) {
  check_target(target);
  if (c.mask & bit(target)) throw ConfigError("control overlaps target qubit");
  const Index t = bit(target);
  for_each_matching(width(), c.mask | t, c.value, [&](Index i0) {
    const Mat2 m = matrix_for(i0);
    const Complex a0 = amps_[i0];
    const Complex a1 = amps_[i0 | t];
    amps_[i0] = m[0] * a0 + m[1] * a1;
    amps_[i0 | t] = m[2] * a0 + m[3] * a1;
  });
}

template <class F>
void StateVector::apply_diagonal(const Controls& c, F&& phase_for) {
  for_each_matching(width(), c.mask, c.value, [&](Index i) { amps_[i] *= phase_for(i); });
}

template <class F>
void StateVector::negate_where(const Controls& c, F&& predicate) {
  for_each_matching(width(), c.mask, c.value, [&](Index i) {
    if (predicate(i)) amps_[i] = -amps_[i];
  });
}

template <class F>
void StateVector::apply_xor(const Controls& c, Index out, F&& g) {
  if (c.mask & out) throw ConfigError("control overlaps written register");
  for_each_matching(width(), c.mask, c.value, [&](Index i) {
    const Index j = i ^ (g(i) & out);
    if (j > i) std::swap(amps_[i], amps_[j]);
  });
}

}  // namespace ampdist
