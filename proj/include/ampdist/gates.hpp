#pragma once

#include <span>
#include <vector>

#include "ampdist/unitary.hpp"

namespace ampdist {

// Direct state helpers (no ledger involvement).
void apply_h(StateVector& s, const Register& reg, const Controls& c = {});
// Flips the bits of `value` inside reg: |v> -> |v xor value>.
void xor_constant(StateVector& s, const Register& reg, Index value, const Controls& c = {});
// I - 2|0><0| restricted to the qubits in `mask`.
void reflect_about_zero(StateVector& s, Index mask, const Controls& c = {});
// Multiplies the |0...0> component of `mask` by `phase`.
void phase_on_zero(StateVector& s, Index mask, Complex phase, const Controls& c = {});
void global_phase(StateVector& s, Complex phase, const Controls& c = {});

// QFT |x> -> 2^{-m/2} sum_y e^{2 pi i x y / 2^m} |y> on one register, done as a
// per-column FFT over the other qubits.
void apply_qft(StateVector& s, const Register& reg, bool inverse, const Controls& c = {});
// Textbook H / controlled-phase / swap network; slow, kept as a cross-check.
void apply_qft_gates(StateVector& s, const Register& reg, bool inverse, const Controls& c = {});

// Procedure builders.
UnitaryPtr gate_unitary(int target, const Mat2& m);
UnitaryPtr dense_unitary(std::vector<int> targets, std::vector<Complex> matrix);
UnitaryPtr hadamard_on(const Register& reg);
UnitaryPtr basis_prep(const Register& reg, Index value);  // X gates: |0> -> |value>
// |0..0> -> sum_v amplitudes[v] |v> via a binary tree of uniformly controlled
// rotations followed by a diagonal phase. `amplitudes` must be normalized.
UnitaryPtr amplitude_prep(const Register& reg, std::vector<Complex> amplitudes);

// Completes a unit vector to a dense unitary whose first column is `column`.
std::vector<Complex> unitary_with_first_column(std::span<const Complex> column);

}  // namespace ampdist
