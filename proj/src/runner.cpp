#include "ampdist/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "ampdist/gates.hpp"
#include "ampdist/mdist.hpp"
#include "ampdist/stats.hpp"

namespace ampdist {

using nlohmann::json;

namespace {

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
const T& need(const std::optional<T>& v, const char* name) {
  if (!v) throw ConfigError(std::string("--") + name + " is required");
  return *v;
}

void in_open_unit(double v, const char* name) {
  if (!(v > 0 && v < 1)) throw ConfigError(std::string("--") + name + " must lie in (0, 1)");
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

const char* truth_name(Truth t) {
  switch (t) {
    case Truth::Yes: return "yes";
    case Truth::No: return "no";
    case Truth::Gap: return "gap";
  }
  return "?";
}

AmpMode parse_mode(const std::string& s) {
  if (s == "real") return AmpMode::Real;
  if (s == "signed") return AmpMode::Signed;
  if (s == "complex") return AmpMode::Complex;
  throw ConfigError("unknown --mode " + s);
}

AmplifyEngine parse_engine(const std::string& s) {
  if (s == "auto") return AmplifyEngine::Auto;
  if (s == "full") return AmplifyEngine::Full;
  if (s == "factored") return AmplifyEngine::Factored;
  throw ConfigError("unknown --engine " + s);
}

const char* engine_name(AmplifyEngine e) {
  switch (e) {
    case AmplifyEngine::Auto: return "auto";
    case AmplifyEngine::Full: return "full";
    case AmplifyEngine::Factored: return "factored";
  }
  return "?";
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

DistributionOracle load_distribution(const ExperimentConfig& c) {
  if (c.input.empty()) throw ConfigError("--input is required");
  const std::string text = read_text_file(c.input);
  if (c.input_kind == "weights") return weights_oracle(parse_weights(text));
  if (c.input_kind == "array") return array_to_oracle(parse_array(text));
  if (c.input_kind == "amplitudes") return amplitudes_oracle(parse_amplitudes(text));
  throw ConfigError("unknown --input-kind " + c.input_kind);
}

FilterOptions filter_options(const ExperimentConfig& c, std::uint64_t seed) {
  FilterOptions o;
  o.seed = seed;
  o.mode = parse_mode(c.mode);
  o.relaxed_k = c.relaxed_k;
  o.precision = c.precision;
  if (c.engine == "full") o.engine = AmplifyEngine::Full;
  return o;
}

json filter_json(const FilterOutcome& f) {
  json j;
  j["flag"] = f.flag;
  j["witness"] = f.witness ? json(*f.witness) : json(nullptr);
  j["verdict"] = f.flag ? "yes" : "no";
  j["truth"] = truth_name(f.truth);
  j["exact_success_prob"] = f.exact_success_prob;
  j["flag_one_prob"] = f.flag_one_prob;
  j["params"] = {{"tau", f.params.tau},           {"eps", f.params.eps},   {"delta", f.params.delta},
                 {"q", f.params.q},               {"l", f.params.l},       {"tau_prime", f.params.tau_prime},
                 {"tau1", f.params.tau1},         {"tau2", f.params.tau2}, {"oracle_p", f.oracle_p},
                 {"k", f.k},                      {"iterations", f.iterations}};
  j["max_flag_error"] = f.max_flag_error;
  j["min_oracle_correctness"] = f.min_oracle_correctness;
  j["qubits"] = f.qubits;
  j["witness_distribution"] = f.witness_distribution;
  j["ledger"] = {{"O_D", ledger_json(f.queries)},
                 {"EQ", ledger_json(f.marker_calls)},
                 {"oracle_applications", f.oracle_applications}};
  return j;
}

json path_json(const std::vector<SearchRound>& path) {
  json arr = json::array();
  for (const auto& r : path) arr.push_back({{"tau", r.tau}, {"yes", r.yes}, {"queried", r.queried}});
  return arr;
}

// ---- per-command trials ----

json trial_qae(const ExperimentConfig& c, std::uint64_t seed) {
  const int m = need(c.m, "m");
  AEConfig{m}.validate();
  OracleFactory prep;
  MarkerBuilder marker;
  double p = 0;
  if (c.p) {
    p = *c.p;
    if (!(p >= 0 && p <= 1)) throw ConfigError("--p must lie in [0, 1]");
    const double angle = 2 * std::asin(std::sqrt(p));
    prep = OracleFactory(1, "A", [angle](const Register& r) { return gate_unitary(r.qubit(0), mat2::ry(angle)); });
    marker = basis_marker(1);
  } else {
    const auto od = load_distribution(c);
    const Index target = need(c.target, "target");
    if (target >= od.outcomes()) throw ConfigError("--target outside the outcome range");
    p = od.probs[target];
    // mark the target outcome on the low qubits of the work register
    const int outcome_width = od.outcome_width;
    prep = od.prep;
    marker = [target, outcome_width](const Register& work) {
      const Register low = work.prefix(outcome_width);
      return make_involution(
          [low, target](StateVector& s, const Controls& ctl) {
            s.negate_where(ctl, [&](Index i) { return low.value(i) == target; });
          },
          low.mask());
    };
  }
  const auto res = qae(prep, marker, AEConfig{m});
  const auto raw = res.raw_distribution();
  const Index drawn = draw_index(raw, seeded_uniform(seed, 0));
  json j;
  j["p"] = p;
  j["m"] = m;
  j["raw"] = drawn;
  j["estimate"] = decode_estimate(drawn, m);
  j["error_bound"] = qae_error_bound(p, m);
  j["exact_within_bound"] = res.mass_within(p, qae_error_bound(p, m));
  if (m >= 4) j["exact_within_2^-q"] = res.mass_within(p, std::ldexp(1.0, -(m - 3)));
  j["qubits"] = res.state.width();
  j["ledger"] = {{"prep", ledger_json(res.calls.prep)}, {"marker", ledger_json(res.calls.marker)}};
  return j;
}

json trial_true_amp(const ExperimentConfig& c, std::uint64_t seed) {
  const double re = c.alpha_re.value_or(0), im = c.alpha_im.value_or(0);
  const Complex alpha(re, im);
  if (std::abs(alpha) > 1 + 1e-12) throw ConfigError("|alpha| must not exceed 1");
  const double eps = need(c.eps, "eps"), delta = need(c.delta, "delta");
  in_open_unit(eps, "eps");
  in_open_unit(delta, "delta");
  std::vector<Complex> amps(4, 0.0);
  amps[0] = alpha;
  amps[1] = std::sqrt(std::max(0.0, 1 - std::norm(alpha)));
  OracleFactory a(2, "A", [amps](const Register& r) { return amplitude_prep(r, amps); });
  const auto backend = c.backend == "mdist" ? EstimationBackend::MDist : EstimationBackend::Qae;
  if (c.backend != "mdist" && c.backend != "qae") throw ConfigError("unknown --backend " + c.backend);
  const auto r = true_amp_est(a, 0, eps, delta, backend, seed);
  json j;
  j["alpha"] = complex_json(alpha);
  j["estimate"] = r.norm;
  j["real_part"] = r.real_part;
  j["imag_part"] = r.imag_part;
  j["true_modulus"] = r.true_modulus;
  j["exact_success_prob"] = r.exact_success_prob;
  j["m"] = r.m;
  j["repetitions"] = r.repetitions;
  j["qubits"] = r.qubits;
  j["ledger"] = {{"A", ledger_json(r.calls)}};
  return j;
}

json trial_mdist_audit(const ExperimentConfig& c, std::uint64_t seed) {
  const int m = need(c.m, "m");
  const int k = c.k.value_or(1);
  AEConfig{m}.validate();
  if (k < 1) throw ConfigError("--k must be positive");
  std::vector<int> sizes = c.branches.empty() ? std::vector<int>{1, 2, 4} : c.branches;
  json runs = json::array();
  bool pass = true;
  std::set<std::uint64_t> totals;
  for (int size : sizes) {
    if (size < 1 || (size & (size - 1)) != 0) throw ConfigError("--branches entries must be powers of two");
    int index_width = 0;
    while ((1 << index_width) < size) ++index_width;
    const auto family = random_family(index_width, 2, k, seed);
    std::vector<Complex> uniform(bit(index_width), 1 / std::sqrt(static_cast<double>(size)));
    const auto run = mdist_amp_est(family, m, uniform);
    const auto audit = audit_query_count(run);
    pass = pass && audit.pass;
    totals.insert(audit.total);
    runs.push_back({{"branches", size},
                    {"v_calls", audit.v_calls},
                    {"w_calls", audit.w_calls},
                    {"total", audit.total},
                    {"w_bound", audit.w_bound},
                    {"bound", audit.bound},
                    {"pass", audit.pass}});
  }
  json j;
  j["m"] = m;
  j["k"] = k;
  j["runs"] = runs;
  j["identical_across_branches"] = totals.size() == 1;
  j["pass"] = pass && totals.size() == 1;
  j["verdict"] = j["pass"].get<bool>() ? "pass" : "fail";
  return j;
}

json trial_biased_aa(const ExperimentConfig& c, std::uint64_t seed) {
  const int n = need(c.n, "n");
  if (n < 1 || n > 12) throw ConfigError("--n must lie in [1, 12]");
  const double p = need(c.p, "p");
  if (!(p > 0.5 && p <= 1)) throw ConfigError("--p must lie in (1/2, 1]");
  const double lambda = need(c.lambda, "lambda"), delta = need(c.delta, "delta");
  std::set<Index> good(c.good.begin(), c.good.end());
  for (Index g : good) {
    if (g >= bit(n)) throw ConfigError("--good entry outside the input range");
  }
  const auto oracle = synthetic_oracle(n, p, [good](Index x) { return good.count(x) > 0; });
  const OracleFactory a(n, "A", [](const Register& r) { return hadamard_on(r); });
  AmplifyOptions opt;
  opt.engine = parse_engine(c.engine);
  opt.relaxed_k = c.relaxed_k;
  opt.seed = seed;
  if (c.verify) opt.verifier = [good](Index x) { return good.count(x) > 0; };
  const auto out = errored_amplify(a, oracle, lambda, delta, opt);
  json j;
  j["verdict"] = out.witness_found ? "witness" : "no_solution";
  j["witness"] = out.witness_found ? json(out.witness) : json(nullptr);
  j["solution_exists"] = out.solution_exists;
  j["exact_success_prob"] = out.exact_success_prob;
  j["flag_one_prob"] = out.flag_one_prob;
  j["witness_good_given_flag"] = out.witness_good_given_flag;
  j["initial_good_mass"] = out.initial_good_mass;
  j["max_flag_error"] = out.max_flag_error;
  j["k"] = out.params.k;
  j["delta_prime"] = out.params.delta_prime;
  j["relaxed_k"] = out.params.relaxed;
  j["iterations"] = out.iterations;
  j["repetitions"] = out.repetitions;
  j["engine"] = engine_name(out.engine_used);
  j["qubits"] = out.qubits;
  j["ledger"] = {{"A", ledger_json(out.prep_calls)},
                 {"O_p", ledger_json(out.oracle_calls)},
                 {"oracle_applications", out.oracle_applications}};
  return j;
}

json trial_filter(const ExperimentConfig& c, std::uint64_t seed, bool amplitude) {
  const double tau = need(c.tau, "tau"), eps = need(c.eps, "eps"), delta = need(c.delta, "delta");
  const auto od = load_distribution(c);
  const auto opts = filter_options(c, seed);
  const auto out = amplitude ? ampfil(od, tau, eps, delta, opts) : profil(od, tau, eps, delta, opts);
  json j = filter_json(out);
  if (amplitude) j["mode"] = c.mode;
  return j;
}

json trial_kdist(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.input.empty()) throw ConfigError("--input is required");
  const auto values = parse_array(read_text_file(c.input));
  const int k = need(c.k, "k");
  const double delta = c.delta.value_or(0.1);
  const auto r = kdistinctness(values, k, delta, filter_options(c, seed));
  json j;
  j["answer"] = r.answer;
  j["verdict"] = r.answer ? "yes" : "no";
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  j["truth"] = r.truth;
  j["exact_success_prob"] = r.exact_success_prob;
  j["n"] = values.size();
  j["k"] = k;
  if (k > 1) j["filter"] = filter_json(r.filter);
  j["qubits"] = k > 1 ? r.filter.qubits : 0;
  j["ledger"] = {{"O_D", ledger_json(r.filter.queries)}};
  return j;
}

json trial_mode(const ExperimentConfig& c, std::uint64_t seed) {
  const double gap = need(c.gap, "gap"), delta = need(c.delta, "delta");
  const auto od = load_distribution(c);
  const auto r = mode_search(od, gap, delta, filter_options(c, seed));
  json j;
  j["mode"] = r.mode ? json(*r.mode) : json(nullptr);
  j["verdict"] = r.mode ? "found" : "none";
  j["estimate"] = r.estimate;
  j["true_mode"] = r.true_mode;
  j["true_max"] = r.true_max;
  j["exact_success_prob"] = r.exact_success_prob;
  j["rounds"] = r.rounds;
  j["eps_per_call"] = r.eps_per_call;
  j["delta_per_call"] = r.delta_per_call;
  j["path"] = path_json(r.path);
  j["ledger"] = {{"O_D", ledger_json(r.queries)}};
  return j;
}

json trial_nonlin(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.truth_table.empty()) throw ConfigError("--truth-table is required");
  const auto f = BooleanFunction::parse(read_text_file(c.truth_table));
  const double lambda = need(c.lambda, "lambda"), delta = need(c.delta, "delta");
  const auto r = nonlinearity(f, lambda, delta, filter_options(c, seed));
  json j;
  j["n"] = f.n;
  j["estimate"] = r.estimate;
  j["eta"] = r.eta;
  j["fmax_estimate"] = r.fmax_estimate;
  j["fmax"] = r.fmax;
  j["exact_success_prob"] = r.exact_success_prob;
  j["rounds"] = r.rounds;
  j["delta_per_call"] = r.delta_per_call;
  j["path"] = path_json(r.path);
  j["ledger"] = {{"f", ledger_json(r.queries)}};
  return j;
}

void flatten(const json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) joined += ';';
      joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
    }
    out[prefix] = joined;
  } else if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else {
    out[prefix] = j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

// ---- config ----

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  if (!input.empty()) {
    j["input"] = input;
    j["input_kind"] = input_kind;
  }
  if (!truth_table.empty()) j["truth_table"] = truth_table;
  put(j, "tau", tau);
  put(j, "eps", eps);
  put(j, "delta", delta);
  put(j, "lambda", lambda);
  put(j, "gap", gap);
  put(j, "p", p);
  put(j, "alpha_re", alpha_re);
  put(j, "alpha_im", alpha_im);
  put(j, "k", k);
  put(j, "m", m);
  put(j, "n", n);
  put(j, "relaxed_k", relaxed_k);
  put(j, "precision", precision);
  put(j, "target", target);
  if (!branches.empty()) j["branches"] = branches;
  if (!good.empty()) j["good"] = good;
  j["mode"] = mode;
  j["engine"] = engine;
  j["backend"] = backend;
  j["verify"] = verify;
  j["seed"] = seed;
  j["trials"] = trials;
  j["parallel"] = parallel;
  return j;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> commands{"qae",  "true-amp-est", "mdist-audit", "biased-aa", "profil",
                                              "ampfil", "kdist",      "mode",        "nonlin",    "selftest"};
  if (!commands.count(command)) throw ConfigError("unknown subcommand " + command);
  if (trials < 1) throw ConfigError("--trials must be positive");
  if (parallel < 1) throw ConfigError("--parallel must be positive");
  if (delta && !(*delta > 0 && *delta < 0.5)) throw ConfigError("--delta must lie in (0, 1/2)");
  if (eps && !(*eps > 0 && *eps < 1)) throw ConfigError("--eps must lie in (0, 1)");
  if (tau && !(*tau > 0 && *tau <= 1)) throw ConfigError("--tau must lie in (0, 1]");
  if (tau && eps && !(*eps < *tau)) throw ConfigError("--eps must be below --tau");
  if (lambda && !(*lambda > 0 && *lambda <= 1)) throw ConfigError("--lambda must lie in (0, 1]");
  if (gap && !(*gap > 0 && *gap <= 1)) throw ConfigError("--gap must lie in (0, 1]");
  if (m && (*m < 1 || *m > 20)) throw ConfigError("--m must lie in [1, 20]");
  if (precision && (*precision < 1 || *precision > 20)) throw ConfigError("--precision must lie in [1, 20]");
  parse_mode(mode);
  parse_engine(engine);
}

// ---- inputs ----

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Index> parse_array(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.is_array() || j.empty()) throw ParseError("array input must be a non-empty JSON list");
  std::vector<Index> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ParseError("array entries must be non-negative integers");
    out.push_back(v.get<Index>());
  }
  return out;
}

std::vector<double> parse_weights(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.is_array() || j.empty()) throw ParseError("weights must be a non-empty JSON list");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number() || v.get<double>() < 0) throw ParseError("weights must be non-negative numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<Complex> parse_amplitudes(const std::string& text) {
  const json j = parse_json_text(text);
  if (!j.is_array() || j.empty()) throw ParseError("amplitudes must be a non-empty JSON list");
  std::vector<Complex> out;
  for (const auto& v : j) {
    if (v.is_number()) {
      out.emplace_back(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      out.emplace_back(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ParseError("amplitudes must be numbers or [re, im] pairs");
    }
  }
  return out;
}

json ledger_json(const QueryLedger& l) {
  return {{"forward", l.forward},
          {"inverse", l.inverse},
          {"controlled_forward", l.controlled_forward},
          {"controlled_inverse", l.controlled_inverse},
          {"total", l.total()}};
}

// ---- running ----

json run_trial(const ExperimentConfig& c, std::uint64_t seed) {
  if (c.command == "qae") return trial_qae(c, seed);
  if (c.command == "true-amp-est") return trial_true_amp(c, seed);
  if (c.command == "mdist-audit") return trial_mdist_audit(c, seed);
  if (c.command == "biased-aa") return trial_biased_aa(c, seed);
  if (c.command == "profil") return trial_filter(c, seed, false);
  if (c.command == "ampfil") return trial_filter(c, seed, true);
  if (c.command == "kdist") return trial_kdist(c, seed);
  if (c.command == "mode") return trial_mode(c, seed);
  if (c.command == "nonlin") return trial_nonlin(c, seed);
  if (c.command == "selftest") return selftest();
  throw ConfigError("unknown subcommand " + c.command);
}

json run_experiment(const ExperimentConfig& c) {
  c.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<json> results(static_cast<std::size_t>(c.trials));
  std::vector<std::exception_ptr> errors(results.size());
  const int workers = std::min(c.parallel, c.trials);
  auto work = [&](int worker) {
    for (int t = worker; t < c.trials; t += workers) {
      try {
        results[t] = run_trial(c, c.seed + static_cast<std::uint64_t>(t));
        results[t]["trial"] = t;
        results[t]["seed"] = c.seed + static_cast<std::uint64_t>(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json report;
  report["command"] = c.command;
  report["config"] = c.to_json();
  report["trials"] = results;
  json summary;
  summary["trials"] = c.trials;
  std::map<std::string, int> verdicts;
  double success = 0;
  int with_success = 0;
  for (const auto& r : results) {
    if (r.contains("verdict") && r["verdict"].is_string()) ++verdicts[r["verdict"].get<std::string>()];
    if (r.contains("exact_success_prob")) {
      success += r["exact_success_prob"].get<double>();
      ++with_success;
    }
  }
  if (!verdicts.empty()) summary["verdicts"] = verdicts;
  if (with_success) summary["mean_exact_success_prob"] = success / with_success;
  report["summary"] = summary;
  if (c.timing) {
    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return report;
}

std::string render(const json& report, OutputFormat format) {
  if (format == OutputFormat::Json) return report.dump(2) + "\n";
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> columns;
  for (const auto& t : report.at("trials")) {
    std::map<std::string, std::string> row;
    row["command"] = report.at("command").get<std::string>();
    flatten(t, "", row);
    for (const auto& [key, value] : row) columns.insert(key);
    rows.push_back(std::move(row));
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& col : columns) {
    out << (first ? "" : ",") << csv_field(col);
    first = false;
  }
  out << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& col : columns) {
      const auto it = row.find(col);
      out << (first ? "" : ",") << (it == row.end() ? "" : csv_field(it->second));
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

json selftest() {
  json checks = json::array();
  auto record = [&](const std::string& name, bool pass) { checks.push_back({{"name", name}, {"pass", pass}}); };

  {
    OracleFactory half(1, "A", [](const Register& r) { return hadamard_on(r); });
    const auto res = qae(half, basis_marker(1), AEConfig{3});
    record("qae exact phase at p = 1/2", res.mass_within(0.5, 1e-12) > 1 - 1e-9 && res.calls.marker.total() == 7);
  }
  record("majority size example", choose_k(0.9, 0.1) == 27);
  {
    const auto fam = random_family(1, 2, 1, 1);
    const auto run = mdist_amp_est(fam, 3, {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    const auto audit = audit_query_count(run);
    record("multi-distribution audit at m = 3", audit.w_calls <= 32 && audit.pass);
  }
  {
    const auto f = BooleanFunction::from_predicate(4, [](Index x) { return (((x & 1) & (x >> 1)) ^ ((x >> 2) & (x >> 3))) & 1; });
    record("bent function spectrum", std::abs(max_walsh(f) - 0.25) < 1e-12);
  }
  {
    const auto sc = fpaa_schedule(0.25, 0.1);
    record("fixed-point schedule closed form",
           std::abs(std::norm(fpaa_two_level(sc, 0.25).first) - fpaa_success_formula(sc, 0.25)) < 1e-9);
  }
  {
    const auto out = profil(weights_oracle({5, 1, 1, 1}), 0.5, 0.25, 0.1);
    record("probability filter planted heavy outcome", out.exact_success_prob >= 0.9);
  }
  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  return {{"checks", checks}, {"pass", all}, {"verdict", all ? "pass" : "fail"}};
}

}  // namespace ampdist
