#include "ampdist/apps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "ampdist/gates.hpp"
#include "ampdist/stats.hpp"

namespace ampdist {

namespace {

int width_for(std::size_t count) {
  int w = 0;
  while (bit(w) < count) ++w;
  return w;
}

constexpr double kCompareSlack = 1e-12;

// Interval search for an unknown value v in [0, 1] with a promise-gap filter: the call
// at tau answers yes if v >= tau, no if v < tau - eps. Probing tau = (lo + hi + eps)/2
// maps the interval width w to (w + eps)/2 whichever way the answer falls.
class IntervalSearch {
 public:
  using Query = std::function<FilterOutcome(double tau)>;

  IntervalSearch(double eps, int rounds, Query query) : eps_(eps), rounds_(rounds), query_(std::move(query)) {}

  double probe(double lo, double hi) const { return std::min(1.0, (lo + hi + eps_) / 2); }
  bool forced_yes(double tau) const { return tau <= eps_ + kCompareSlack; }

  const FilterOutcome& outcome(double tau) {
    auto it = memo_.find(tau);
    if (it == memo_.end()) it = memo_.emplace(tau, query_(tau)).first;
    return it->second;
  }

  // Calls leaf(lo, hi, probability) for every answer path.
  void enumerate(const std::function<void(double, double, double)>& leaf) { walk(0, 0.0, 1.0, 1.0, leaf); }

  // Follows one path with seeded draws.
  std::pair<double, double> sample(std::uint64_t seed, std::vector<SearchRound>& path, QueryLedger& queries) {
    double lo = 0, hi = 1;
    for (int r = 0; r < rounds_; ++r) {
      const double tau = probe(lo, hi);
      SearchRound round{tau, true, false};
      if (!forced_yes(tau)) {
        const auto& out = outcome(tau);
        round.queried = true;
        round.yes = seeded_uniform(seed, static_cast<std::uint64_t>(r)) < out.flag_one_prob;
        queries = queries + out.queries;
      }
      path.push_back(round);
      update(round.yes, tau, lo, hi);
    }
    return {lo, hi};
  }

 private:
  void update(bool yes, double tau, double& lo, double& hi) const {
    if (yes) {
      lo = std::max(lo, tau - eps_);
    } else {
      hi = std::min(hi, tau);
    }
  }

  void walk(int r, double lo, double hi, double prob, const std::function<void(double, double, double)>& leaf) {
    if (prob <= 0) return;
    if (r == rounds_) {
      leaf(lo, hi, prob);
      return;
    }
    const double tau = probe(lo, hi);
    const double yes = forced_yes(tau) ? 1.0 : outcome(tau).flag_one_prob;
    for (bool answer : {true, false}) {
      double l2 = lo, h2 = hi;
      update(answer, tau, l2, h2);
      walk(r + 1, l2, h2, prob * (answer ? yes : 1 - yes), leaf);
    }
  }

  double eps_;
  int rounds_;
  Query query_;
  std::map<double, FilterOutcome> memo_;
};

int rounds_to_width(double eps, double target_width) {
  // width after r rounds: eps + (1 - eps) / 2^r
  if (target_width >= 1) return 0;
  const double ratio = (1 - eps) / (target_width - eps);
  return std::max(0, static_cast<int>(std::ceil(std::log2(ratio) - 1e-12)));
}

FilterOptions with_cache(FilterOptions options, const DistributionOracle& od) {
  if (!options.cache) options.cache = std::make_shared<FilterOracleCache>(od);
  return options;
}

}  // namespace

// ---- arrays ----

std::map<Index, std::size_t> brute_force_freq(const std::vector<Index>& values) {
  std::map<Index, std::size_t> freq;
  for (Index v : values) ++freq[v];
  return freq;
}

DistributionOracle array_to_oracle(const std::vector<Index>& values, Index alphabet) {
  if (values.empty()) throw ConfigError("empty array");
  const Index top = *std::max_element(values.begin(), values.end());
  if (alphabet != 0 && top >= alphabet) throw ConfigError("array value outside the alphabet");
  const int value_width = std::max(1, width_for(std::max<Index>(alphabet, top + 1)));
  const int index_width = width_for(values.size());
  if (value_width + index_width > kMaxQubits) throw BudgetExceeded("array oracle exceeds the qubit cap");
  std::vector<Index> padded(values);
  padded.resize(bit(index_width), 0);
  std::vector<Complex> weights(bit(index_width), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) weights[i] = 1 / std::sqrt(static_cast<double>(values.size()));

  OracleFactory prep(value_width + index_width, "O_D", [=](const Register& r) {
    const Register value = r.slice(0, value_width, "value");
    const Register index = r.slice(value_width, index_width, "index");
    auto lookup = make_involution(
        [value, index, padded](StateVector& s, const Controls& c) {
          s.apply_xor(c, value.mask(), [&](Index i) { return value.place(padded[index.value(i)]); });
        },
        value.mask() | index.mask());
    if (index_width == 0) return lookup;
    return sequence({amplitude_prep(index, weights), lookup});
  });
  return make_distribution_oracle(std::move(prep), value_width);
}

KDistResult kdistinctness(const std::vector<Index>& values, int k, double delta, const FilterOptions& options) {
  const int n = static_cast<int>(values.size());
  if (k < 1 || k > n) throw ConfigError("k must lie in [1, n]");
  KDistResult res;
  const auto freq = brute_force_freq(values);
  std::size_t most = 0;
  for (const auto& [v, c] : freq) most = std::max(most, c);
  res.truth = static_cast<int>(most) >= k;
  if (k == 1) {
    // every non-empty array qualifies; tau = eps = 1/n leaves no room for a promise gap
    res.answer = true;
    res.witness = values.front();
    res.exact_success_prob = 1;
    return res;
  }
  const auto od = array_to_oracle(values);
  const double tau = static_cast<double>(k) / n, eps = 1.0 / n;
  res.filter = profil(od, tau, eps, delta, options);
  res.answer = res.filter.flag;
  res.witness = res.filter.witness;
  if (res.truth) {
    double hit = 0;
    for (Index x = 0; x < od.outcomes(); ++x) {
      const auto it = freq.find(x);
      if (it != freq.end() && static_cast<int>(it->second) >= k) hit += res.filter.witness_distribution[x];
    }
    res.exact_success_prob = hit;
  } else {
    res.exact_success_prob = 1 - res.filter.flag_one_prob;
  }
  return res;
}

// ---- mode ----

ModeResult mode_search(const DistributionOracle& od, double gap, double delta, const FilterOptions& options_in) {
  if (!(gap > 0 && gap <= 1)) throw ConfigError("gap must lie in (0, 1]");
  if (!(delta > 0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
  od.validate();
  const FilterOptions options = with_cache(options_in, od);
  ModeResult res;
  res.true_mode = static_cast<Index>(std::max_element(od.probs.begin(), od.probs.end()) - od.probs.begin());
  res.true_max = od.probs[res.true_mode];
  // A quarter-gap slack leaves the final interval narrower than g/2, so only the
  // mode can pass the last filter call.
  res.eps_per_call = gap / 4;
  res.rounds = rounds_to_width(res.eps_per_call, gap / 2);
  res.delta_per_call = delta / (res.rounds + 1);
  const double eps = res.eps_per_call;
  auto query = [&](double tau) {
    FilterOptions o = options;
    return profil(od, tau, eps, res.delta_per_call, o);
  };
  IntervalSearch search(eps, res.rounds, query);
  auto final_tau = [eps](double lo) { return std::clamp(lo, 2 * eps, 1.0); };

  search.enumerate([&](double lo, double hi, double prob) {
    const double estimate = (lo + hi) / 2;
    if (std::abs(estimate - res.true_max) > gap / 2 + kCompareSlack) return;
    res.exact_success_prob += prob * search.outcome(final_tau(lo)).witness_distribution[res.true_mode];
  });

  const auto [lo, hi] = search.sample(options.seed, res.path, res.queries);
  const auto& last = search.outcome(final_tau(lo));
  res.queries = res.queries + last.queries;
  const auto stream = static_cast<std::uint64_t>(res.rounds);
  const bool yes = seeded_uniform(options.seed, stream) < last.flag_one_prob;
  res.path.push_back({final_tau(lo), yes, true});
  res.estimate = (lo + hi) / 2;
  if (yes) res.mode = draw_index(last.witness_distribution, seeded_uniform(options.seed, stream + 1));
  res.exact_success_prob = std::clamp(res.exact_success_prob, 0.0, 1.0);
  return res;
}

// ---- Boolean functions ----

BooleanFunction BooleanFunction::parse(const std::string& text) {
  BooleanFunction f;
  for (char ch : text) {
    if (ch == '0' || ch == '1') {
      f.table.push_back(static_cast<std::uint8_t>(ch - '0'));
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw ParseError(std::string("truth table contains '") + ch + "'");
    }
  }
  if (f.table.empty()) throw ParseError("empty truth table");
  f.n = width_for(f.table.size());
  if (bit(f.n) != f.table.size()) throw ParseError("truth table length is not a power of two");
  if (f.n > kMaxWalshArity) throw ConfigError("truth table arity exceeds the transform cap");
  return f;
}

BooleanFunction BooleanFunction::from_predicate(int n, const std::function<bool(Index)>& pred) {
  if (n < 0 || n > kMaxWalshArity) throw ConfigError("arity out of range");
  BooleanFunction f;
  f.n = n;
  for (Index x = 0; x < bit(n); ++x) f.table.push_back(pred(x) ? 1 : 0);
  return f;
}

std::vector<double> walsh_spectrum(const BooleanFunction& f) {
  if (f.n > kMaxWalshArity) throw ConfigError("arity exceeds the transform cap");
  const Index size = bit(f.n);
  std::vector<double> v(size);
  for (Index x = 0; x < size; ++x) v[x] = f.table[x] ? -1.0 : 1.0;
  for (Index len = 1; len < size; len <<= 1) {
    for (Index i = 0; i < size; i += 2 * len) {
      for (Index j = i; j < i + len; ++j) {
        const double a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
    }
  }
  for (auto& c : v) c /= static_cast<double>(size);
  return v;
}

double max_walsh(const BooleanFunction& f) {
  double best = 0;
  for (double c : walsh_spectrum(f)) best = std::max(best, std::abs(c));
  return best;
}

double nonlinearity_value(const BooleanFunction& f) { return 0.5 - 0.5 * max_walsh(f); }

DjOracle dj_prep(const BooleanFunction& f) {
  if (f.n < 1) throw ConfigError("Deutsch-Jozsa preparation needs at least one input bit");
  const auto table = f.table;
  DjOracle dj;
  dj.phase = OracleFactory(f.n, "f", [table](const Register& r) {
    return make_involution(
        [r, table](StateVector& s, const Controls& c) {
          s.negate_where(c, [&](Index i) { return table[r.value(i)] != 0; });
        },
        r.mask());
  });
  const OracleFactory phase = dj.phase;
  dj.prep = OracleFactory(f.n, "DJ", [phase](const Register& r) {
    return sequence({hadamard_on(r), phase.on(r), hadamard_on(r)});
  });
  return dj;
}

NonlinResult nonlinearity(const BooleanFunction& f, double lambda, double delta, const FilterOptions& options_in) {
  if (!(lambda > 0 && lambda < 0.5)) throw ConfigError("lambda must lie in (0, 1/2)");
  if (!(delta > 0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
  NonlinResult res;
  res.fmax = max_walsh(f);
  res.eta = 0.5 - 0.5 * res.fmax;
  const auto dj = dj_prep(f);
  const auto od = make_distribution_oracle(dj.prep, f.n);
  FilterOptions options = with_cache(options_in, od);
  options.mode = AmpMode::Signed;
  // final width 4 lambda puts the midpoint within 2 lambda of f-max, i.e. lambda in eta
  res.rounds = rounds_to_width(lambda, 4 * lambda);
  res.delta_per_call = res.rounds > 0 ? delta / res.rounds : delta;
  auto query = [&](double tau) { return ampfil(od, tau, lambda, res.delta_per_call, options); };
  IntervalSearch search(lambda, res.rounds, query);
  search.enumerate([&](double lo, double hi, double prob) {
    const double eta_hat = 0.5 - 0.25 * (lo + hi);
    if (std::abs(eta_hat - res.eta) <= lambda + kCompareSlack) res.exact_success_prob += prob;
  });
  const auto [lo, hi] = search.sample(options.seed, res.path, res.queries);
  res.fmax_estimate = (lo + hi) / 2;
  res.estimate = 0.5 - 0.5 * res.fmax_estimate;
  res.exact_success_prob = std::clamp(res.exact_success_prob, 0.0, 1.0);
  return res;
}

}  // namespace ampdist
