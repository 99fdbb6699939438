#include "ampdist/gates.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace ampdist {

void apply_h(StateVector& s, const Register& reg, const Controls& c) {
  const Mat2 h = mat2::hadamard();
  for (int i = 0; i < reg.width; ++i) s.apply_matrix2(reg.qubit(i), h, c);
}

void xor_constant(StateVector& s, const Register& reg, Index value, const Controls& c) {
  const Index d = reg.place(value);
  if (d == 0) return;
  s.apply_xor(c, d, [d](Index) { return d; });
}

void reflect_about_zero(StateVector& s, Index mask, const Controls& c) {
  s.negate_where(c & Controls{mask, 0}, [](Index) { return true; });
}

void phase_on_zero(StateVector& s, Index mask, Complex phase, const Controls& c) {
  s.apply_diagonal(c & Controls{mask, 0}, [phase](Index) { return phase; });
}

void global_phase(StateVector& s, Complex phase, const Controls& c) {
  s.apply_diagonal(c, [phase](Index) { return phase; });
}

namespace {

void fft_in_place(std::vector<Complex>& a, const std::vector<Complex>& twiddle) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t b = n >> 1;
    for (; j & b; b >>= 1) j ^= b;
    j ^= b;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * twiddle[k * step];
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

}  // namespace

void apply_qft(StateVector& s, const Register& reg, bool inverse, const Controls& c) {
  if (c.mask & reg.mask()) throw ConfigError("QFT controls overlap its register");
  const std::size_t n = reg.dimension();
  if (n == 1) return;
  const double sign = inverse ? -1.0 : 1.0;
  std::vector<Complex> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    twiddle[k] = std::polar(1.0, sign * 2 * std::numbers::pi * static_cast<double>(k) / n);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<Complex> column(n);
  auto& amps = s.amplitudes();
  for_each_matching(s.width(), c.mask | reg.mask(), c.value, [&](Index rest) {
    for (std::size_t v = 0; v < n; ++v) column[v] = amps[rest | reg.place(v)];
    fft_in_place(column, twiddle);
    for (std::size_t v = 0; v < n; ++v) amps[rest | reg.place(v)] = column[v] * scale;
  });
}

void apply_qft_gates(StateVector& s, const Register& reg, bool inverse, const Controls& c) {
  const int m = reg.width;
  const double sign = inverse ? -1.0 : 1.0;
  auto swap_ends = [&] {
    for (int i = 0; i < m / 2; ++i) {
      const int a = reg.qubit(i), b = reg.qubit(m - 1 - i);
      s.apply_xor(c, bit(a) | bit(b), [a, b](Index x) {
        return ((x >> a) & 1) != ((x >> b) & 1) ? (bit(a) | bit(b)) : Index{0};
      });
    }
  };
  auto layer = [&](int j) {
    s.apply_matrix2(reg.qubit(j), mat2::hadamard(), c);
    for (int k = j - 1; k >= 0; --k) {
      const double angle = sign * std::numbers::pi / static_cast<double>(bit(j - k));
      const Complex ph = std::polar(1.0, angle);
      s.apply_diagonal(c & Controls{bit(reg.qubit(j)) | bit(reg.qubit(k)),
                                    bit(reg.qubit(j)) | bit(reg.qubit(k))},
                       [ph](Index) { return ph; });
    }
  };
  if (!inverse) {
    for (int j = m - 1; j >= 0; --j) layer(j);
    swap_ends();
  } else {
    swap_ends();
    for (int j = 0; j < m; ++j) {
      // adjoint of layer(j): phases first, then H
      for (int k = 0; k < j; ++k) {
        const double angle = sign * std::numbers::pi / static_cast<double>(bit(j - k));
        const Complex ph = std::polar(1.0, angle);
        s.apply_diagonal(c & Controls{bit(reg.qubit(j)) | bit(reg.qubit(k)),
                                      bit(reg.qubit(j)) | bit(reg.qubit(k))},
                         [ph](Index) { return ph; });
      }
      s.apply_matrix2(reg.qubit(j), mat2::hadamard(), c);
    }
  }
}

UnitaryPtr gate_unitary(int target, const Mat2& m) {
  const Mat2 adj = mat2::adjoint(m);
  return make_unitary([target, m](StateVector& s, const Controls& c) { s.apply_matrix2(target, m, c); },
                      [target, adj](StateVector& s, const Controls& c) { s.apply_matrix2(target, adj, c); },
                      bit(target));
}

UnitaryPtr dense_unitary(std::vector<int> targets, std::vector<Complex> matrix) {
  const std::size_t d = std::size_t{1} << targets.size();
  if (matrix.size() != d * d) throw ConfigError("gate dimension does not match target count");
  std::vector<Complex> adj(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t col = 0; col < d; ++col) adj[col * d + r] = std::conj(matrix[r * d + col]);
  }
  Index support = 0;
  for (int t : targets) support |= bit(t);
  return make_unitary(
      [targets, matrix](StateVector& s, const Controls& c) { s.apply_dense(targets, matrix, c); },
      [targets, adj](StateVector& s, const Controls& c) { s.apply_dense(targets, adj, c); }, support);
}

UnitaryPtr hadamard_on(const Register& reg) {
  return make_involution([reg](StateVector& s, const Controls& c) { apply_h(s, reg, c); }, reg.mask());
}

UnitaryPtr basis_prep(const Register& reg, Index value) {
  if (value >= reg.dimension()) throw ConfigError("basis value does not fit register " + reg.name);
  return make_involution([reg, value](StateVector& s, const Controls& c) { xor_constant(s, reg, value, c); },
                         reg.mask());
}

UnitaryPtr amplitude_prep(const Register& reg, std::vector<Complex> amplitudes) {
  const int w = reg.width;
  if (amplitudes.size() != reg.dimension()) throw ConfigError("amplitude count does not match register");
  double total = 0;
  for (const auto& a : amplitudes) total += std::norm(a);
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("amplitudes are not normalized");

  struct Plan {
    std::vector<std::vector<double>> angles;  // angles[t][prefix above t]
    std::vector<Complex> phases;
    bool has_phase = false;
  };
  auto plan = std::make_shared<Plan>();
  plan->angles.resize(w);
  std::vector<double> weight(amplitudes.size());
  for (std::size_t v = 0; v < amplitudes.size(); ++v) weight[v] = std::norm(amplitudes[v]);
  for (int t = w - 1; t >= 0; --t) {
    const Index prefixes = bit(w - 1 - t);
    auto& level = plan->angles[t];
    level.assign(prefixes, 0.0);
    for (Index h = 0; h < prefixes; ++h) {
      double w0 = 0, w1 = 0;
      const Index base = h << (t + 1);
      for (Index low = 0; low < bit(t); ++low) {
        w0 += weight[base | low];
        w1 += weight[base | bit(t) | low];
      }
      level[h] = 2 * std::atan2(std::sqrt(w1), std::sqrt(w0));
    }
  }
  plan->phases.resize(amplitudes.size(), 1.0);
  for (std::size_t v = 0; v < amplitudes.size(); ++v) {
    if (std::abs(amplitudes[v]) > 0) {
      plan->phases[v] = amplitudes[v] / std::abs(amplitudes[v]);
      if (std::abs(plan->phases[v] - 1.0) > 1e-15) plan->has_phase = true;
    }
  }

  auto forward = [reg, plan](StateVector& s, const Controls& c) {
    for (int t = reg.width - 1; t >= 0; --t) {
      const auto& level = plan->angles[t];
      s.apply_matrix2_by(reg.qubit(t), c, [&](Index i0) {
        return mat2::ry(level[reg.value(i0) >> (t + 1)]);
      });
    }
    if (plan->has_phase) s.apply_diagonal(c, [&](Index i) { return plan->phases[reg.value(i)]; });
  };
  auto adjoint = [reg, plan](StateVector& s, const Controls& c) {
    if (plan->has_phase) {
      s.apply_diagonal(c, [&](Index i) { return std::conj(plan->phases[reg.value(i)]); });
    }
    for (int t = 0; t < reg.width; ++t) {
      const auto& level = plan->angles[t];
      s.apply_matrix2_by(reg.qubit(t), c, [&](Index i0) {
        return mat2::ry(-level[reg.value(i0) >> (t + 1)]);
      });
    }
  };
  return make_unitary(forward, adjoint, reg.mask());
}

std::vector<Complex> unitary_with_first_column(std::span<const Complex> column) {
  // Gram-Schmidt over {column, e_0, e_1, ...}.
  const std::size_t d = column.size();
  std::vector<std::vector<Complex>> basis;
  basis.emplace_back(column.begin(), column.end());
  for (std::size_t e = 0; e < d && basis.size() < d; ++e) {
    std::vector<Complex> v(d);
    v[e] = 1.0;
    for (const auto& b : basis) {
      Complex dot = 0;
      for (std::size_t i = 0; i < d; ++i) dot += std::conj(b[i]) * v[i];
      for (std::size_t i = 0; i < d; ++i) v[i] -= dot * b[i];
    }
    double n = 0;
    for (const auto& x : v) n += std::norm(x);
    n = std::sqrt(n);
    if (n < 1e-8) continue;
    for (auto& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  std::vector<Complex> m(d * d);
  for (std::size_t col = 0; col < d; ++col) {
    for (std::size_t r = 0; r < d; ++r) m[r * d + col] = basis[col][r];
  }
  return m;
}

}  // namespace ampdist
