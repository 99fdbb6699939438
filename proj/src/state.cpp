#include "ampdist/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ampdist {

Register Register::prefix(int count, std::string sub_name) const {
  return slice(0, count, std::move(sub_name));
}

Register Register::slice(int start, int count, std::string sub_name) const {
  if (start < 0 || count < 0 || start + count > width) {
    throw ConfigError("register slice out of range for " + name);
  }
  return Register{sub_name.empty() ? name : std::move(sub_name), offset + start, count};
}

Register RegisterLayout::add(std::string name, int width) {
  if (width < 0) throw ConfigError("negative register width");
  if (contains(name)) throw ConfigError("duplicate register name: " + name);
  if (width_ + width > kMaxQubits) {
    throw BudgetExceeded("layout needs " + std::to_string(width_ + width) +
                         " qubits; the cap is " + std::to_string(kMaxQubits));
  }
  regs_.push_back(Register{std::move(name), width_, width});
  width_ += width;
  return regs_.back();
}

const Register& RegisterLayout::at(std::string_view name) const {
  for (const auto& r : regs_) {
    if (r.name == name) return r;
  }
  throw ConfigError("unknown register: " + std::string(name));
}

bool RegisterLayout::contains(std::string_view name) const {
  return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
}

Controls Controls::operator&(const Controls& other) const {
  const Index shared = mask & other.mask;
  if ((value & shared) != (other.value & shared)) {
    throw ConfigError("contradictory controls");
  }
  return {mask | other.mask, value | other.value};
}

namespace mat2 {
Mat2 hadamard() {
  const double s = std::numbers::sqrt2 / 2;
  return {s, s, s, -s};
}
Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 phase(double angle) { return {1.0, 0.0, 0.0, std::polar(1.0, angle)}; }
Mat2 ry(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return {c, -s, s, c};
}
Mat2 adjoint(const Mat2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}
}  // namespace mat2

namespace {
std::vector<Complex> zero_state(int width) {
  if (width > kMaxQubits) {
    throw BudgetExceeded("statevector of " + std::to_string(width) + " qubits exceeds the cap of " +
                         std::to_string(kMaxQubits));
  }
  std::vector<Complex> v(bit(width));
  v[0] = 1.0;
  return v;
}

RegisterLayout single_register(int width) {
  RegisterLayout l;
  l.add("q", width);
  return l;
}
}  // namespace

StateVector::StateVector(RegisterLayout layout)
    : layout_(std::move(layout)), amps_(zero_state(layout_.width())) {}

StateVector::StateVector(int width) : StateVector(single_register(width)) {}

StateVector::StateVector(RegisterLayout layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != bit(layout_.width())) throw ConfigError("amplitude count does not match width");
}

void StateVector::set_basis(Index i) {
  if (i >= amps_.size()) throw ConfigError("basis index out of range");
  std::fill(amps_.begin(), amps_.end(), Complex{});
  amps_[i] = 1.0;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

double StateVector::settle() {
  const double n = norm();
  const double drift = std::abs(n - 1.0);
  if (drift > kDriftTolerance && n > 0) {
    for (auto& a : amps_) a /= n;
  }
  return drift;
}

void StateVector::check_target(int q) const {
  if (q < 0 || q >= width()) throw ConfigError("target qubit out of range");
}

void StateVector::apply_matrix2(int target, const Mat2& m, const Controls& c) {
  apply_matrix2_by(target, c, [&](Index) -> const Mat2& { return m; });
}

void StateVector::apply_dense(std::span<const int> targets, std::span<const Complex> matrix,
                              const Controls& c) {
  const std::size_t k = targets.size();
  if (k == 0 || k > 3) throw ConfigError("dense gates take one to three targets");
  const std::size_t d = std::size_t{1} << k;
  if (matrix.size() != d * d) throw ConfigError("gate dimension does not match target count");
  Index tmask = 0;
  for (int t : targets) {
    check_target(t);
    if (tmask & bit(t)) throw ConfigError("repeated target qubit");
    tmask |= bit(t);
  }
  if (c.mask & tmask) throw ConfigError("control overlaps target qubit");
  std::array<Index, 8> offs{};
  for (std::size_t j = 0; j < d; ++j) {
    Index o = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (j & (std::size_t{1} << b)) o |= bit(targets[b]);
    }
    offs[j] = o;
  }
  std::array<Complex, 8> in{}, out{};
  for_each_matching(width(), c.mask | tmask, c.value, [&](Index base) {
    for (std::size_t j = 0; j < d; ++j) in[j] = amps_[base | offs[j]];
    for (std::size_t r = 0; r < d; ++r) {
      Complex s = 0;
      for (std::size_t j = 0; j < d; ++j) s += matrix[r * d + j] * in[j];
      out[r] = s;
    }
    for (std::size_t j = 0; j < d; ++j) amps_[base | offs[j]] = out[j];
  });
}

double StateVector::marginal_probability(std::string_view name, Index value) const {
  return marginal_probability(layout_.at(name), value);
}

double StateVector::marginal_probability(const Register& r, Index value) const {
  if (value >= r.dimension()) throw ConfigError("value does not fit register " + r.name);
  double s = 0;
  for_each_matching(width(), r.mask(), r.place(value), [&](Index i) { s += std::norm(amps_[i]); });
  return s;
}

std::map<Index, double> StateVector::exact_outcome_distribution(std::string_view name) const {
  const auto dense = distribution(layout_.at(name));
  std::map<Index, double> out;
  for (Index v = 0; v < dense.size(); ++v) {
    if (dense[v] > 0) out[v] = dense[v];
  }
  return out;
}

std::vector<double> StateVector::distribution(const Register& reg) const {
  return distribution(std::span<const Register>(&reg, 1));
}

std::vector<double> StateVector::distribution(std::span<const Register> regs) const {
  int total = 0;
  for (const auto& r : regs) total += r.width;
  std::vector<double> out(bit(total));
  for (Index i = 0; i < amps_.size(); ++i) {
    const double p = std::norm(amps_[i]);
    if (p == 0) continue;
    Index key = 0;
    int shift = 0;
    for (const auto& r : regs) {
      key |= r.value(i) << shift;
      shift += r.width;
    }
    out[key] += p;
  }
  return out;
}

double seeded_uniform(std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 eng(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::pair<Index, StateVector> StateVector::measure(std::string_view name, std::uint64_t seed) const {
  const Register& r = layout_.at(name);
  const auto probs = distribution(r);
  double total = 0;
  for (double p : probs) total += p;
  const double u = seeded_uniform(seed) * total;
  Index pick = 0;
  double acc = 0;
  for (Index v = 0; v < probs.size(); ++v) {
    if (probs[v] == 0) continue;
    pick = v;
    acc += probs[v];
    if (u < acc) break;
  }
  StateVector post = *this;
  const double keep = probs[pick];
  for (Index i = 0; i < post.amps_.size(); ++i) {
    if (r.value(i) != pick) {
      post.amps_[i] = 0;
    } else {
      post.amps_[i] /= std::sqrt(keep);
    }
  }
  return {pick, std::move(post)};
}

double StateVector::distance(const StateVector& other) const {
  if (other.amps_.size() != amps_.size()) throw ConfigError("width mismatch");
  double s = 0;
  for (Index i = 0; i < amps_.size(); ++i) s += std::norm(amps_[i] - other.amps_[i]);
  return std::sqrt(s);
}

}  // namespace ampdist
