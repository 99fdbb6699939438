#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ampdist/state.hpp"

namespace testutil {

using ampdist::Complex;

inline std::vector<Complex> random_unit_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> v(dim);
  double n = 0;
  for (auto& x : v) {
    x = Complex(g(rng), g(rng));
    n += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(n);
  return v;
}

inline ampdist::StateVector random_state(const ampdist::RegisterLayout& layout, std::mt19937_64& rng) {
  return ampdist::StateVector(layout, random_unit_vector(ampdist::bit(layout.width()), rng));
}

inline Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Independent dense matrix-vector product, used as a reference for procedures.
inline std::vector<Complex> matvec(const std::vector<Complex>& m, const std::vector<Complex>& v) {
  const std::size_t d = v.size();
  std::vector<Complex> out(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) out[r] += m[r * d + c] * v[c];
  }
  return out;
}

}  // namespace testutil
