#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>

#include "ampdist/runner.hpp"
#include "ampdist/stats.hpp"

namespace py = pybind11;
using namespace ampdist;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

template <class T>
void take(const py::dict& d, const char* key, std::optional<T>& slot) {
  if (d.contains(key) && !d[key].is_none()) slot = d[key].cast<T>();
}

template <class T>
void take(const py::dict& d, const char* key, T& slot) {
  if (d.contains(key) && !d[key].is_none()) slot = d[key].cast<T>();
}

ExperimentConfig config_from(const std::string& command, const py::dict& d) {
  static const std::set<std::string> known{"input", "input_kind", "truth_table", "tau", "eps", "delta", "lambda",
                                           "gap", "p", "alpha_re", "alpha_im", "k", "m", "n", "relaxed_k",
                                           "precision", "target", "branches", "good", "mode", "engine", "backend",
                                           "verify", "seed", "trials", "parallel"};
  for (const auto& item : d) {
    const auto key = item.first.cast<std::string>();
    if (!known.count(key)) throw ConfigError("unknown option " + key);
  }
  ExperimentConfig c;
  c.command = command;
  take(d, "input", c.input);
  take(d, "input_kind", c.input_kind);
  take(d, "truth_table", c.truth_table);
  take(d, "tau", c.tau);
  take(d, "eps", c.eps);
  take(d, "delta", c.delta);
  take(d, "lambda", c.lambda);
  take(d, "gap", c.gap);
  take(d, "p", c.p);
  take(d, "alpha_re", c.alpha_re);
  take(d, "alpha_im", c.alpha_im);
  take(d, "k", c.k);
  take(d, "m", c.m);
  take(d, "n", c.n);
  take(d, "relaxed_k", c.relaxed_k);
  take(d, "precision", c.precision);
  take(d, "target", c.target);
  take(d, "branches", c.branches);
  take(d, "good", c.good);
  take(d, "mode", c.mode);
  take(d, "engine", c.engine);
  take(d, "backend", c.backend);
  take(d, "verify", c.verify);
  take(d, "seed", c.seed);
  take(d, "trials", c.trials);
  take(d, "parallel", c.parallel);
  return c;
}

FilterOptions filter_options(const std::string& mode, std::uint64_t seed) {
  FilterOptions o;
  o.seed = seed;
  if (mode == "real") {
    o.mode = AmpMode::Real;
  } else if (mode == "signed") {
    o.mode = AmpMode::Signed;
  } else if (mode == "complex") {
    o.mode = AmpMode::Complex;
  } else {
    throw ConfigError("unknown mode " + mode);
  }
  return o;
}

py::dict filter_dict(const FilterOutcome& f) {
  py::dict d;
  d["flag"] = f.flag;
  d["witness"] = f.witness ? py::cast(*f.witness) : py::none();
  d["exact_success_prob"] = f.exact_success_prob;
  d["flag_one_prob"] = f.flag_one_prob;
  d["truth"] = f.truth == Truth::Yes ? "yes" : f.truth == Truth::No ? "no" : "gap";
  d["witness_distribution"] = f.witness_distribution;
  d["k"] = f.k;
  d["iterations"] = f.iterations;
  d["queries"] = f.queries.total();
  return d;
}

}  // namespace

PYBIND11_MODULE(ampdist, m) {
  m.doc() = "Amplitude and distribution property estimation on an exact statevector simulator";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<BudgetExceeded> budget_error(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      PyErr_SetString(config_error.ptr(), e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(parse_error.ptr(), e.what());
    } catch (const BudgetExceeded& e) {
      PyErr_SetString(budget_error.ptr(), e.what());
    }
  });

  m.def(
      "run",
      [](const std::string& command, const py::kwargs& kwargs) {
        const auto config = config_from(command, kwargs);
        nlohmann::json report;
        {
          py::gil_scoped_release release;
          report = run_experiment(config);
        }
        return to_python(report);
      },
      py::arg("command"), "Runs a subcommand with CLI-equivalent options; returns the report as a dict.");

  m.def("selftest", [] { return to_python(selftest()); });

  m.def("choose_k", &choose_k, py::arg("p"), py::arg("delta_prime"));
  m.def("binomial_tail", &binomial_tail, py::arg("trials"), py::arg("success"), py::arg("at_least"));

  m.def(
      "walsh_spectrum", [](const std::string& table) { return walsh_spectrum(BooleanFunction::parse(table)); },
      py::arg("truth_table"));
  m.def(
      "nonlinearity_value", [](const std::string& table) { return nonlinearity_value(BooleanFunction::parse(table)); },
      py::arg("truth_table"));

  m.def(
      "profil",
      [](const std::vector<double>& weights, double tau, double eps, double delta, std::uint64_t seed) {
        return filter_dict(profil(weights_oracle(weights), tau, eps, delta, filter_options("real", seed)));
      },
      py::arg("weights"), py::arg("tau"), py::arg("eps"), py::arg("delta"), py::arg("seed") = 0);
  m.def(
      "ampfil",
      [](const std::vector<Complex>& amps, double tau, double eps, double delta, const std::string& mode,
         std::uint64_t seed) {
        return filter_dict(ampfil(amplitudes_oracle(amps), tau, eps, delta, filter_options(mode, seed)));
      },
      py::arg("amplitudes"), py::arg("tau"), py::arg("eps"), py::arg("delta"), py::arg("mode") = "real",
      py::arg("seed") = 0);
  m.def(
      "kdistinctness",
      [](const std::vector<Index>& values, int k, double delta, std::uint64_t seed) {
        const auto r = kdistinctness(values, k, delta, filter_options("real", seed));
        py::dict d;
        d["answer"] = r.answer;
        d["witness"] = r.witness ? py::cast(*r.witness) : py::none();
        d["truth"] = r.truth;
        d["exact_success_prob"] = r.exact_success_prob;
        return d;
      },
      py::arg("values"), py::arg("k"), py::arg("delta") = 0.1, py::arg("seed") = 0);
}
