#include "ampdist/biased_aa.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "ampdist/gadgets.hpp"
#include "ampdist/gates.hpp"
#include "ampdist/stats.hpp"

namespace ampdist {

QueryLedger reversed(const QueryLedger& l) {
  return {l.inverse, l.forward, l.controlled_inverse, l.controlled_forward};
}

void BiasedOracle::validate() const {
  if (input_width < 0 || scratch_width < 1) throw ConfigError("biased oracle register widths out of range");
  if (flag_offset < 0 || flag_offset >= scratch_width) throw ConfigError("flag outside the oracle scratch");
  if (!(p > 0.5 && p <= 1.0)) throw ConfigError("biased oracle needs p in (1/2, 1]");
  if (!bind) throw ConfigError("biased oracle has no action");
}

FlagProfile BiasedOracle::profile() const {
  if (profile_override) return profile_override();
  validate();
  RegisterLayout layout;
  const Register in = layout.add("input", input_width);
  const Register scratch = layout.add("scratch", scratch_width);
  StateVector s(layout);
  apply_h(s, in);
  const QueryLedger before = ledger ? ledger() : QueryLedger{};
  bind(in, scratch)->apply(s);
  FlagProfile out;
  out.per_call = ledger ? ledger() - before : QueryLedger{};
  std::vector<Register> regs{in, scratch.slice(flag_offset, 1)};
  const auto joint = s.distribution(regs);
  const double scale = static_cast<double>(in.dimension());
  out.flag_one.resize(in.dimension());
  for (Index x = 0; x < in.dimension(); ++x) {
    out.flag_one[x] = std::clamp(joint[x | in.dimension()] * scale, 0.0, 1.0);
  }
  return out;
}

BiasedOracle synthetic_oracle(int input_width, std::vector<double> flag_one, std::function<bool(Index)> goodness) {
  if (flag_one.size() != bit(input_width)) throw ConfigError("one flag probability per input is required");
  BiasedOracle o;
  o.label = "O_p";
  o.input_width = input_width;
  o.scratch_width = 1;
  o.flag_offset = 0;
  double worst = 1.0;
  for (Index x = 0; x < flag_one.size(); ++x) {
    if (flag_one[x] < 0 || flag_one[x] > 1) throw ConfigError("flag probability out of range");
    worst = std::min(worst, goodness(x) ? flag_one[x] : 1 - flag_one[x]);
  }
  o.p = worst;
  o.goodness = goodness;
  auto angles = std::make_shared<std::vector<double>>();
  for (double r : flag_one) angles->push_back(2 * std::asin(std::sqrt(r)));
  auto counter = std::make_shared<QueryLedger>();
  o.ledger = [counter] { return *counter; };
  o.bind = [angles, counter](const Register& in, const Register& scratch) {
    const int flag = scratch.qubit(0);
    auto forward = [angles, in, flag](StateVector& s, const Controls& c) {
      s.apply_matrix2_by(flag, c, [&](Index i0) { return mat2::ry((*angles)[in.value(i0)]); });
    };
    auto adjoint = [angles, in, flag](StateVector& s, const Controls& c) {
      s.apply_matrix2_by(flag, c, [&](Index i0) { return mat2::ry(-(*angles)[in.value(i0)]); });
    };
    return std::static_pointer_cast<const Unitary>(
        std::make_shared<CountedOracle>(make_unitary(forward, adjoint, in.mask() | bit(flag)), "O_p", counter));
  };
  return o;
}

BiasedOracle synthetic_oracle(int input_width, double p, std::function<bool(Index)> goodness) {
  std::vector<double> probs(bit(input_width));
  for (Index x = 0; x < probs.size(); ++x) probs[x] = goodness(x) ? p : 1 - p;
  return synthetic_oracle(input_width, std::move(probs), std::move(goodness));
}

int choose_k(double p, double delta_prime) {
  if (!(p > 0.5 && p <= 1)) throw ConfigError("majority boosting needs p > 1/2");
  if (!(delta_prime > 0 && delta_prime <= 1)) throw ConfigError("delta' must lie in (0, 1]");
  const double bound = 2 * p / ((p - 0.5) * (p - 0.5)) * std::log(1 / delta_prime);
  int k = std::max(1, static_cast<int>(std::ceil(bound - 1e-12)));
  if (k % 2 == 0) ++k;
  return k;
}

BiasedAAParams make_params(double p, double lambda, double delta, std::optional<int> relaxed_k) {
  if (!(lambda > 0 && lambda <= 1)) throw ConfigError("lambda must lie in (0, 1]");
  if (!(delta > 0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
  BiasedAAParams params;
  params.lambda = lambda;
  params.delta = delta;
  params.delta_prime = std::pow(lambda, 4) * delta * delta;
  if (relaxed_k) {
    if (*relaxed_k < 1) throw ConfigError("k must be positive");
    params.k = *relaxed_k;
    params.relaxed = true;
  } else {
    params.k = choose_k(p, params.delta_prime);
  }
  return params;
}

BoostedPrep build_boosted_prep(const OracleFactory& a, const BiasedOracle& oracle, int k) {
  oracle.validate();
  if (k < 1) throw ConfigError("k must be positive");
  if (oracle.input_width > a.width()) throw ConfigError("oracle input wider than the preparation");
  BoostedPrep bp;
  bp.prep = bp.layout.add("R1", a.width());
  bp.input = bp.prep.slice(0, oracle.input_width, "R1.input");
  for (int i = 0; i < k; ++i) bp.copies.push_back(bp.layout.add("R2_" + std::to_string(i), oracle.scratch_width));
  bp.majority = bp.layout.add("Rmaj", 1);

  std::vector<UnitaryPtr> parts{a.on(bp.prep)};
  std::vector<int> flags;
  for (const auto& copy : bp.copies) {
    parts.push_back(oracle.bind(bp.input, copy));
    flags.push_back(copy.qubit(oracle.flag_offset));
  }
  parts.push_back(gadgets::cond_majority_unitary(bp.input, flags, bp.majority.qubit(0)));
  bp.op = sequence(std::move(parts));
  return bp;
}

namespace {
double chebyshev(double order, double x) {
  if (std::abs(x) <= 1) return std::cos(order * std::acos(x));
  const double v = std::cosh(order * std::acosh(std::abs(x)));
  return (x < 0 && std::fmod(order, 2.0) == 1.0) ? -v : v;
}
}  // namespace

int fpaa_iteration_cap(double lambda, double delta) {
  return static_cast<int>(std::floor(kFixedPointConstant * std::log(2 / delta) / std::sqrt(lambda)));
}

FpaaSchedule fpaa_schedule(double lambda, double delta) {
  if (!(lambda > 0 && lambda <= 1)) throw ConfigError("lambda must lie in (0, 1]");
  if (!(delta > 0 && delta < 1)) throw ConfigError("delta must lie in (0, 1)");
  FpaaSchedule sc;
  sc.lambda = lambda;
  sc.delta = delta;
  // The schedule's own parameter is the square root of the failure probability.
  const double d = std::sqrt(delta);
  int length = static_cast<int>(std::ceil(std::log(2 / d) / std::sqrt(lambda) - 1e-12));
  if (length < 1) length = 1;
  if (length % 2 == 0) ++length;
  sc.iterations = (length - 1) / 2;
  if (sc.iterations > fpaa_iteration_cap(lambda, delta)) {
    throw std::logic_error("fixed-point schedule exceeds its iteration cap");
  }
  const double gamma_inv = std::cosh(std::acosh(1 / d) / length);
  const double root = std::sqrt(std::max(0.0, 1 - 1 / (gamma_inv * gamma_inv)));
  sc.alpha.resize(sc.iterations);
  sc.beta.resize(sc.iterations);
  for (int j = 1; j <= sc.iterations; ++j) {
    const double t = std::tan(2 * std::numbers::pi * j / length) * root;
    sc.alpha[j - 1] = 2 * std::atan2(1.0, t);
  }
  for (int j = 1; j <= sc.iterations; ++j) sc.beta[sc.iterations - j] = -sc.alpha[j - 1];
  // stored in application order: the pair with the largest index acts first
  std::reverse(sc.alpha.begin(), sc.alpha.end());
  std::reverse(sc.beta.begin(), sc.beta.end());
  return sc;
}

double fpaa_success_formula(const FpaaSchedule& sc, double w) {
  const int length = sc.length();
  const double d = std::sqrt(sc.delta);
  const double gamma_inv = std::cosh(std::acosh(1 / d) / length);
  const double t = chebyshev(length, gamma_inv * std::sqrt(std::max(0.0, 1 - w)));
  return 1 - d * d * t * t;
}

std::pair<Complex, Complex> fpaa_two_level(const FpaaSchedule& sc, double w) {
  const double sg = std::sqrt(std::clamp(w, 0.0, 1.0)), sb = std::sqrt(std::clamp(1 - w, 0.0, 1.0));
  Complex g = sg, b = sb;
  for (int j = 0; j < sc.iterations; ++j) {
    g *= std::polar(1.0, sc.alpha[j]);
    // S_s(beta) = I - (1 - e^{-i beta}) |s><s|
    const Complex overlap = sg * g + sb * b;
    const Complex f = (1.0 - std::polar(1.0, -sc.beta[j])) * overlap;
    g = -(g - f * sg);
    b = -(b - f * sb);
  }
  return {g, b};
}

void fpaa_full(StateVector& s, const Unitary& prep, Index zero_mask, int flag, const FpaaSchedule& sc) {
  prep.apply(s);
  for (int j = 0; j < sc.iterations; ++j) {
    const Complex a_phase = std::polar(1.0, sc.alpha[j]);
    s.apply_diagonal(Controls::qubit(flag), [a_phase](Index) { return a_phase; });
    prep.apply_adjoint(s);
    phase_on_zero(s, zero_mask, std::polar(1.0, -sc.beta[j]));
    prep.apply(s);
    global_phase(s, -1.0);
  }
  s.settle();
}

AmplifyOutcome errored_amplify(const OracleFactory& a, const BiasedOracle& oracle, double lambda, double delta,
                               const AmplifyOptions& options) {
  oracle.validate();
  AmplifyOutcome out;
  out.params = make_params(oracle.p, lambda, delta, options.relaxed_k);
  const int k = out.params.k;
  // The A-hat good mass is only guaranteed down to lambda (1 - delta').
  const double schedule_lambda = lambda * (1 - std::min(out.params.delta_prime, 0.5));
  const FpaaSchedule sc = fpaa_schedule(schedule_lambda, delta);
  out.iterations = sc.iterations;
  const std::int64_t qubits = a.width() + static_cast<std::int64_t>(k) * oracle.scratch_width + 1;
  out.qubits = static_cast<int>(std::min<std::int64_t>(qubits, 1 << 30));

  AmplifyEngine engine = options.engine;
  if (engine == AmplifyEngine::Auto) {
    engine = qubits <= options.full_qubit_limit ? AmplifyEngine::Full : AmplifyEngine::Factored;
  }
  if (engine == AmplifyEngine::Full && qubits > kMaxQubits) {
    throw BudgetExceeded("A-hat needs " + std::to_string(qubits) + " qubits; relax k or use the factored engine");
  }
  out.engine_used = engine;

  const Index inputs = bit(oracle.input_width);
  std::vector<double> joint(inputs, 0.0);  // Pr[flag = 1, x] after amplification
  std::vector<double> input_mass(inputs, 0.0);
  {
    RegisterLayout l;
    const Register r = l.add("R1", a.width());
    StateVector s(l);
    a.fresh().on(r)->apply(s);
    input_mass = s.distribution(r.slice(0, oracle.input_width));
  }

  const FlagProfile prof = oracle.profile();
  for (Index x = 0; x < inputs; ++x) {
    const bool good = oracle.goodness && oracle.goodness(x);
    out.max_flag_error = std::max(out.max_flag_error, majority_error(k, prof.flag_one[x], good));
  }

  if (engine == AmplifyEngine::Full) {
    // A on its own ledger: the oracle may query the same factory internally.
    const OracleFactory own_a = a.fresh();
    const auto bp = build_boosted_prep(own_a, oracle, k);
    StateVector s(bp.layout);
    // initial flag mass, from a separate application
    {
      StateVector t(bp.layout);
      bp.op->apply(t);
      out.initial_good_mass = t.marginal_probability(bp.majority, 1);
    }
    const QueryLedger a1 = own_a.ledger();
    const QueryLedger o1 = oracle.ledger ? oracle.ledger() : QueryLedger{};
    fpaa_full(s, *bp.op, low_mask(bp.layout.width()), bp.majority.qubit(0), sc);
    out.prep_calls = own_a.ledger() - a1;
    out.oracle_calls = (oracle.ledger ? oracle.ledger() : QueryLedger{}) - o1;
    std::vector<Register> regs{bp.input, bp.majority};
    const auto d = s.distribution(regs);
    for (Index x = 0; x < inputs; ++x) joint[x] = d[x | inputs];
  } else {
    std::vector<double> good_part(inputs);
    double w = 0;
    for (Index x = 0; x < inputs; ++x) {
      const double says_one = binomial_tail(k, prof.flag_one[x], (k + 1) / 2);
      good_part[x] = input_mass[x] * says_one;
      w += good_part[x];
    }
    out.initial_good_mass = w;
    const auto [cg, cb] = fpaa_two_level(sc, w);
    const double p1 = std::norm(cg);
    for (Index x = 0; x < inputs; ++x) joint[x] = w > 0 ? p1 * good_part[x] / w : 0.0;
    const auto l = static_cast<std::uint64_t>(sc.iterations);
    out.prep_calls = QueryLedger{l + 1, l, 0, 0};
    const auto kk = static_cast<std::uint64_t>(k);
    out.oracle_calls = prof.per_call.scaled(kk * (l + 1)) + reversed(prof.per_call).scaled(kk * l);
  }
  out.oracle_applications = static_cast<std::uint64_t>(k) * (2 * static_cast<std::uint64_t>(sc.iterations) + 1);
  out.witness_distribution = joint;

  double p1 = 0, good_flagged = 0;
  for (Index x = 0; x < inputs; ++x) {
    p1 += joint[x];
    if (oracle.goodness && oracle.goodness(x)) good_flagged += joint[x];
    if (oracle.goodness && oracle.goodness(x) && input_mass[x] > 1e-15) out.solution_exists = true;
  }
  p1 = std::clamp(p1, 0.0, 1.0);
  out.flag_one_prob = p1;
  out.witness_good_given_flag = p1 > 0 ? good_flagged / p1 : 0.0;

  if (options.verifier) {
    out.repetitions = std::max(1, static_cast<int>(std::ceil(std::log2(1 / delta) / 2)));
    double verified = 0;
    for (Index x = 0; x < inputs; ++x) {
      if (options.verifier(x)) verified += joint[x];
    }
    const double miss_all = std::pow(1 - std::min(verified, 1.0), out.repetitions);
    out.exact_success_prob = out.solution_exists ? 1 - miss_all : miss_all;
    out.prep_calls = out.prep_calls.scaled(static_cast<std::uint64_t>(out.repetitions));
    out.oracle_calls = out.oracle_calls.scaled(static_cast<std::uint64_t>(out.repetitions));
    out.oracle_applications *= static_cast<std::uint64_t>(out.repetitions);
    for (int r = 0; r < out.repetitions && !out.witness_found; ++r) {
      if (seeded_uniform(options.seed, 2 * r) < p1) {
        const Index x = draw_index(joint, seeded_uniform(options.seed, 2 * r + 1));
        if (options.verifier(x)) {
          out.witness_found = true;
          out.witness = x;
        }
      }
    }
  } else {
    out.exact_success_prob = out.solution_exists ? p1 : 1 - p1;
    if (seeded_uniform(options.seed, 0) < p1) {
      out.witness_found = true;
      out.witness = draw_index(joint, seeded_uniform(options.seed, 1));
    }
  }
  return out;
}

}  // namespace ampdist
