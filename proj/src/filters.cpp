#include "ampdist/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ampdist/gadgets.hpp"
#include "ampdist/gates.hpp"
#include "ampdist/mdist.hpp"
#include "ampdist/stats.hpp"

namespace ampdist {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kValueTolerance = 1e-12;

double qae_confidence() { return 8 / (kPi * kPi); }

Index floor_angle_index(double target, int l) {
  return static_cast<Index>(std::floor(std::ldexp(1.0, l) / kPi * std::asin(std::sqrt(std::clamp(target, 0.0, 1.0)))));
}
Index ceil_angle_index(double target, int l) {
  return static_cast<Index>(std::ceil(std::ldexp(1.0, l) / kPi * std::asin(std::sqrt(std::clamp(target, 0.0, 1.0)))));
}

std::vector<std::vector<double>> split_rows(const std::vector<double>& joint, Index inputs, int l) {
  std::vector<std::vector<double>> raw(inputs, std::vector<double>(bit(l)));
  for (Index x = 0; x < inputs; ++x) {
    for (Index a = 0; a < bit(l); ++a) raw[x][a] = joint[x | (a * inputs)] * static_cast<double>(inputs);
  }
  return raw;
}
}  // namespace

double DistributionOracle::max_prob() const { return *std::max_element(probs.begin(), probs.end()); }

double DistributionOracle::max_modulus() const {
  double best = 0;
  for (const auto& a : amps) best = std::max(best, std::abs(a));
  return best;
}

void DistributionOracle::validate() const {
  if (outcome_width < 0 || ancilla_width < 0) throw ConfigError("distribution oracle widths out of range");
  if (prep.width() != width()) throw ConfigError("distribution oracle width mismatch");
  if (probs.size() != outcomes() || amps.size() != outcomes()) throw ConfigError("distribution tables incomplete");
  double total = 0;
  for (double p : probs) total += p;
  if (std::abs(total - 1) > kStateTolerance) throw ConfigError("outcome probabilities do not sum to 1");
}

DistributionOracle make_distribution_oracle(OracleFactory prep, int outcome_width) {
  if (outcome_width > prep.width()) throw ConfigError("outcome register wider than the preparation");
  DistributionOracle od;
  od.outcome_width = outcome_width;
  od.ancilla_width = prep.width() - outcome_width;
  RegisterLayout layout;
  const Register r = layout.add("R1", prep.width());
  StateVector s(layout);
  prep.fresh().on(r)->apply(s);
  od.probs = s.distribution(r.prefix(outcome_width));
  od.amps.assign(s.amplitudes().begin(), s.amplitudes().begin() + static_cast<std::ptrdiff_t>(bit(outcome_width)));
  od.prep = std::move(prep);
  od.validate();
  return od;
}

DistributionOracle weights_oracle(const std::vector<double>& weights) {
  if (weights.empty()) throw ConfigError("empty distribution");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw ConfigError("distribution weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0) throw ConfigError("distribution weights sum to zero");
  int width = 0;
  while (bit(width) < weights.size()) ++width;
  std::vector<Complex> amps(bit(width), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) amps[i] = std::sqrt(weights[i] / total);
  return amplitudes_oracle(amps);
}

DistributionOracle amplitudes_oracle(const std::vector<Complex>& amps_in) {
  if (amps_in.empty()) throw ConfigError("empty amplitude list");
  int width = 0;
  while (bit(width) < amps_in.size()) ++width;
  std::vector<Complex> amps(bit(width), 0.0);
  double n = 0;
  for (std::size_t i = 0; i < amps_in.size(); ++i) {
    amps[i] = amps_in[i];
    n += std::norm(amps_in[i]);
  }
  if (n <= 0) throw ConfigError("amplitudes are all zero");
  for (auto& a : amps) a /= std::sqrt(n);
  OracleFactory prep(width, "O_D", [amps](const Register& r) { return amplitude_prep(r, amps); });
  return make_distribution_oracle(std::move(prep), width);
}

// ---- parameters ----

void FilterParams::validate() const {
  if (!(eps > 0 && eps < tau && tau <= 1)) throw ConfigError("filter parameters need 0 < eps < tau <= 1");
  if (!(delta > 0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
  if (l < 1) throw ConfigError("estimation width must be positive");
}

FilterParams FilterParams::with_precision(int width) const {
  FilterParams p = *this;
  p.l = width;
  p.q = width - 3;
  p.tau1 = floor_angle_index(p.tau_prime, width);
  if (p.variant == FilterVariant::Amp) p.tau2 = ceil_angle_index(p.tau2_target, width);
  p.validate();
  return p;
}

FilterParams make_filter_params(double tau, double eps, double delta, FilterVariant variant) {
  FilterParams p;
  p.tau = tau;
  p.eps = eps;
  p.delta = delta;
  p.variant = variant;
  if (!(eps > 0 && eps < tau && tau <= 1)) throw ConfigError("filter parameters need 0 < eps < tau <= 1");
  p.q = static_cast<int>(std::ceil(std::log2(1 / eps) - 1e-12)) + 5;
  p.l = p.q + 3;
  if (variant == FilterVariant::Prob) {
    p.tau_prime = tau - eps / 2;
  } else {
    p.tau_prime = 0.5 * (1 + tau - eps / 16);
    p.tau2_target = 0.5 * (1 - tau + eps / 16);
  }
  return p.with_precision(p.l);
}

bool marks_at_least(Index raw, Index threshold, int l) {
  return gadgets::half_distance_value(raw, l) <= gadgets::half_distance_value(threshold, l);
}

bool marks_at_most(Index raw, Index threshold, int l) {
  return gadgets::half_distance_value(threshold, l) <= gadgets::half_distance_value(raw, l);
}

// ---- Stage 1 ----

StageOneTable prob_stage_one(const DistributionOracle& od, int l) {
  RegisterLayout layout;
  const Register input = layout.add("R1", od.outcome_width);
  const Register work = layout.add("R2", od.width());
  const Register est = layout.add("R4", l);
  StateVector s(layout);
  apply_h(s, input);
  const auto ledgers = eq_amp_est(s, od.prep.fresh(), input, work, est);
  StageOneTable t;
  t.l = l;
  std::vector<Register> regs{input, est};
  t.raw = split_rows(s.distribution(regs), od.outcomes(), l);
  t.per_call = ledgers.prep;
  t.marker_calls = ledgers.marker;
  t.qubits = layout.width() + 1;
  return t;
}

StageOneTable amp_stage_one(const DistributionOracle& od, int l, TestPart part) {
  const auto family = hadamard_test_family(od.prep.fresh(), od.outcome_width, part, [](Index y) { return y; });
  const Index inputs = od.outcomes();
  std::vector<Complex> index_amps(inputs, 1 / std::sqrt(static_cast<double>(inputs)));
  const auto run = mdist_amp_est(family, l, index_amps);
  StageOneTable t;
  t.l = l;
  std::vector<Register> regs{run.index, run.est};
  t.raw = split_rows(run.state.distribution(regs), inputs, l);
  t.per_call = run.calls.v + run.calls.w;
  t.qubits = run.state.width() + 1;
  return t;
}

const StageOneTable& FilterOracleCache::prob(int l) {
  auto it = prob_.find(l);
  if (it == prob_.end()) it = prob_.emplace(l, prob_stage_one(od_, l)).first;
  return it->second;
}

const StageOneTable& FilterOracleCache::amp(int l, TestPart part) {
  const auto key = std::make_pair(l, static_cast<int>(part));
  auto it = amp_.find(key);
  if (it == amp_.end()) it = amp_.emplace(key, amp_stage_one(od_, l, part)).first;
  return it->second;
}

// ---- Stage 2 ----

void explicit_threshold_stage(StateVector& s, const Register& est, const Register& thr, const Register& hd_thr,
                              const Register& hd_est, int flag, Index tau1) {
  if (thr.width != est.width || hd_thr.width != est.width || hd_est.width != est.width) {
    throw ConfigError("threshold stage registers must share the estimate width");
  }
  const auto& amps = s.amplitudes();
  for (Index i = 0; i < s.dimension(); ++i) {
    if (amps[i] == Complex{}) continue;
    if (thr.value(i) != tau1) throw ConfigError("threshold register is not preloaded with tau1");
    if (hd_thr.value(i) != 0 || hd_est.value(i) != 0) throw ConfigError("comparison scratch is not zeroed");
  }
  gadgets::half_distance(s, thr, hd_thr);
  gadgets::half_distance(s, est, hd_est);
  gadgets::compare_mark(s, hd_thr, hd_est, flag);
  gadgets::half_distance(s, est, hd_est);
  gadgets::half_distance(s, thr, hd_thr);
}

namespace {

UnitaryPtr threshold_unitary(const Register& est, Index threshold, int flag, bool at_least) {
  return make_involution(
      [est, threshold, flag, at_least](StateVector& s, const Controls& c) {
        gadgets::threshold_mark(s, est, threshold, flag, at_least, c);
      },
      est.mask() | bit(flag));
}

double component_estimate(Index raw, int l) { return 2 * decode_estimate(raw, l) - 1; }

bool complex_marks(Index re, Index im, int l, double cut) {
  const double c = component_estimate(re, l), d = component_estimate(im, l);
  return std::sqrt(c * c + d * d) >= cut;
}

std::vector<bool> good_inputs(const std::vector<double>& values, double tau) {
  std::vector<bool> good(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) good[x] = values[x] >= tau - kValueTolerance;
  return good;
}

}  // namespace

BiasedOracle prob_fil_borcl(const DistributionOracle& od, const FilterParams& params,
                            std::shared_ptr<FilterOracleCache> cache) {
  if (params.variant != FilterVariant::Prob) throw ConfigError("probability filter needs PROB parameters");
  params.validate();
  od.validate();
  if (!cache) cache = std::make_shared<FilterOracleCache>(od);
  BiasedOracle o;
  o.label = "ProbFilBOrcl";
  o.input_width = od.outcome_width;
  o.scratch_width = od.width() + 1 + params.l;
  o.flag_offset = od.width();
  o.p = qae_confidence();
  const auto good = good_inputs(od.probs, params.tau);
  o.goodness = [good](Index x) { return static_cast<bool>(good[x]); };
  const OracleFactory prep = od.prep;
  const int width = od.width();
  const int l = params.l;
  const Index tau1 = params.tau1;
  o.bind = [prep, width, l, tau1](const Register& input, const Register& scratch) {
    const Register work = scratch.slice(0, width, "R2");
    const int flag = scratch.qubit(width);
    const Register est = scratch.slice(width + 1, l, "R4");
    return sequence({eq_amp_est_unitary(prep, input, work, est), threshold_unitary(est, tau1, flag, true)});
  };
  o.ledger = [prep] { return prep.ledger(); };
  o.profile_override = [cache, l, tau1] {
    const auto& table = cache->prob(l);
    FlagProfile fp;
    fp.per_call = table.per_call;
    for (const auto& row : table.raw) {
      double one = 0;
      for (Index a = 0; a < row.size(); ++a) {
        if (marks_at_least(a, tau1, l)) one += row[a];
      }
      fp.flag_one.push_back(std::clamp(one, 0.0, 1.0));
    }
    return fp;
  };
  return o;
}

BiasedOracle amp_fil_borcl(const DistributionOracle& od, const FilterParams& params, AmpMode mode,
                           std::shared_ptr<FilterOracleCache> cache) {
  if (params.variant != FilterVariant::Amp) throw ConfigError("amplitude filter needs AMP parameters");
  params.validate();
  od.validate();
  if (!cache) cache = std::make_shared<FilterOracleCache>(od);
  const int l = params.l;
  const Index tau1 = params.tau1, tau2 = params.tau2;
  if (mode == AmpMode::Signed && !(tau2 < tau1)) throw ConfigError("two-sided thresholds overlap");
  const double cut = params.tau - params.eps / 2;

  BiasedOracle o;
  o.label = "AmpFilBOrcl";
  o.input_width = od.outcome_width;
  const int work_width = od.width() + 1;
  const int pipelines = mode == AmpMode::Complex ? 2 : 1;
  o.scratch_width = pipelines * (work_width + l) + 1;
  o.flag_offset = pipelines * work_width;
  o.p = mode == AmpMode::Complex ? qae_confidence() * qae_confidence() : qae_confidence();
  const auto good = good_inputs(filtered_values(od, FilterVariant::Amp, mode), params.tau);
  o.goodness = [good](Index x) { return static_cast<bool>(good[x]); };

  const auto real_family = hadamard_test_family(od.prep, od.outcome_width, TestPart::Real, [](Index y) { return y; });
  const auto imag_family = hadamard_test_family(od.prep, od.outcome_width, TestPart::Imag, [](Index y) { return y; });
  o.bind = [=](const Register& input, const Register& scratch) {
    const int flag = scratch.qubit(pipelines * work_width);
    const int est_base = pipelines * work_width + 1;
    const Register work_re = scratch.slice(0, work_width, "R2.re");
    const Register est_re = scratch.slice(est_base, l, "R3.re");
    std::vector<UnitaryPtr> parts{mdist_unitary(real_family, input, work_re, est_re)};
    if (mode == AmpMode::Complex) {
      const Register work_im = scratch.slice(work_width, work_width, "R2.im");
      const Register est_im = scratch.slice(est_base + l, l, "R3.im");
      parts.push_back(mdist_unitary(imag_family, input, work_im, est_im));
      parts.push_back(make_involution(
          [est_re, est_im, flag, l, cut](StateVector& s, const Controls& c) {
            s.apply_xor(c, bit(flag), [&](Index i) {
              return complex_marks(est_re.value(i), est_im.value(i), l, cut) ? bit(flag) : Index{0};
            });
          },
          est_re.mask() | est_im.mask() | bit(flag)));
    } else {
      parts.push_back(threshold_unitary(est_re, tau1, flag, true));
      if (mode == AmpMode::Signed) parts.push_back(threshold_unitary(est_re, tau2, flag, false));
    }
    return sequence(std::move(parts));
  };
  const OracleFactory prep = od.prep;
  o.ledger = [prep] { return prep.ledger(); };
  o.profile_override = [cache, l, tau1, tau2, mode, cut] {
    FlagProfile fp;
    const auto& re = cache->amp(l, TestPart::Real);
    fp.per_call = re.per_call;
    if (mode == AmpMode::Complex) {
      const auto& im = cache->amp(l, TestPart::Imag);
      fp.per_call = fp.per_call + im.per_call;
      for (Index x = 0; x < re.raw.size(); ++x) {
        double one = 0;
        for (Index a = 0; a < bit(l); ++a) {
          if (re.raw[x][a] == 0) continue;
          for (Index b = 0; b < bit(l); ++b) {
            if (complex_marks(a, b, l, cut)) one += re.raw[x][a] * im.raw[x][b];
          }
        }
        fp.flag_one.push_back(std::clamp(one, 0.0, 1.0));
      }
      return fp;
    }
    for (const auto& row : re.raw) {
      double one = 0;
      for (Index a = 0; a < row.size(); ++a) {
        const bool hit = marks_at_least(a, tau1, l) || (mode == AmpMode::Signed && marks_at_most(a, tau2, l));
        if (hit) one += row[a];
      }
      fp.flag_one.push_back(std::clamp(one, 0.0, 1.0));
    }
    return fp;
  };
  return o;
}

// ---- top level ----

std::vector<double> filtered_values(const DistributionOracle& od, FilterVariant variant, AmpMode mode) {
  if (variant == FilterVariant::Prob) return od.probs;
  std::vector<double> v;
  for (const auto& a : od.amps) {
    switch (mode) {
      case AmpMode::Real: v.push_back(a.real()); break;
      case AmpMode::Signed: v.push_back(std::abs(a.real())); break;
      case AmpMode::Complex: v.push_back(std::abs(a)); break;
    }
  }
  return v;
}

Truth classify(const std::vector<double>& values, double tau, double eps) {
  bool gap = false;
  for (double v : values) {
    if (v >= tau - kValueTolerance) return Truth::Yes;
    if (v >= tau - eps) gap = true;
  }
  return gap ? Truth::Gap : Truth::No;
}

namespace {

FilterOutcome run_filter(const DistributionOracle& od, FilterVariant variant, double tau, double eps, double delta,
                         const FilterOptions& options) {
  od.validate();
  FilterParams params = make_filter_params(tau, eps, delta, variant);
  if (options.precision) params = params.with_precision(*options.precision);
  params.delta = delta;
  params.validate();
  auto cache = options.cache ? options.cache : std::make_shared<FilterOracleCache>(od);
  const AmpMode mode = variant == FilterVariant::Prob ? AmpMode::Real : options.mode;
  const BiasedOracle oracle = variant == FilterVariant::Prob ? prob_fil_borcl(od, params, cache)
                                                             : amp_fil_borcl(od, params, mode, cache);
  const double lambda = std::min(1.0, variant == FilterVariant::Prob ? tau : tau * tau);

  AmplifyOptions amp;
  amp.engine = options.engine;
  amp.relaxed_k = options.relaxed_k;
  amp.seed = options.seed;
  const auto run = errored_amplify(od.prep, oracle, lambda, delta, amp);

  FilterOutcome out;
  out.params = params;
  out.mode = mode;
  out.oracle_p = oracle.p;
  out.k = run.params.k;
  out.iterations = run.iterations;
  out.qubits = run.qubits;
  out.flag_one_prob = run.flag_one_prob;
  out.witness_distribution = run.witness_distribution;
  out.queries = run.prep_calls + run.oracle_calls;
  out.oracle_applications = run.oracle_applications;
  if (variant == FilterVariant::Prob) {
    const auto& table = cache->prob(params.l);
    const auto kk = static_cast<std::uint64_t>(run.params.k);
    const auto it = static_cast<std::uint64_t>(run.iterations);
    out.marker_calls = table.marker_calls.scaled(kk * (it + 1)) + reversed(table.marker_calls).scaled(kk * it);
  }

  const auto values = filtered_values(od, variant, mode);
  out.truth = classify(values, tau, eps);
  const FlagProfile prof = oracle.profile();
  for (Index x = 0; x < values.size(); ++x) {
    const bool yes = values[x] >= tau - kValueTolerance;
    const bool no = values[x] < tau - eps;
    if (!yes && !no) continue;
    out.max_flag_error = std::max(out.max_flag_error, majority_error(out.k, prof.flag_one[x], yes));
    out.min_oracle_correctness = std::min(out.min_oracle_correctness, yes ? prof.flag_one[x] : 1 - prof.flag_one[x]);
  }
  double valid = 0;
  for (Index x = 0; x < values.size(); ++x) {
    if (values[x] >= tau - eps) valid += run.witness_distribution[x];
  }
  switch (out.truth) {
    case Truth::Yes: out.exact_success_prob = valid; break;
    case Truth::No: out.exact_success_prob = 1 - run.flag_one_prob; break;
    case Truth::Gap: out.exact_success_prob = 1 - run.flag_one_prob + valid; break;
  }
  out.exact_success_prob = std::clamp(out.exact_success_prob, 0.0, 1.0);
  out.flag = run.witness_found;
  if (run.witness_found) out.witness = run.witness;
  return out;
}

}  // namespace

FilterOutcome profil(const DistributionOracle& od, double tau, double eps, double delta,
                     const FilterOptions& options) {
  return run_filter(od, FilterVariant::Prob, tau, eps, delta, options);
}

FilterOutcome ampfil(const DistributionOracle& od, double tau, double eps, double delta,
                     const FilterOptions& options) {
  return run_filter(od, FilterVariant::Amp, tau, eps, delta, options);
}

}  // namespace ampdist
