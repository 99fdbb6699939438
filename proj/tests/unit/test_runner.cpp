#include <cstdio>
#include <fstream>

#include "ampdist/runner.hpp"
#include "doctest.h"

using namespace ampdist;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string(P_tmpdir) + "/ampdist_runner_" + name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("input parsers accept well-formed lists") {
    CHECK(parse_array("[3, 0, 7]") == std::vector<Index>{3, 0, 7});
    CHECK(parse_weights("[1, 2.5, 0]") == std::vector<double>{1, 2.5, 0});
    const auto amps = parse_amplitudes("[0.5, [0, -0.5]]");
    REQUIRE(amps.size() == 2);
    CHECK(amps[1] == Complex(0, -0.5));
  }

  TEST_CASE("input parsers reject malformed content") {
    CHECK_THROWS_AS(parse_array("[1, 2"), ParseError);
    CHECK_THROWS_AS(parse_array("[1, -2]"), ParseError);
    CHECK_THROWS_AS(parse_array("[1.5]"), ParseError);
    CHECK_THROWS_AS(parse_array("[]"), ParseError);
    CHECK_THROWS_AS(parse_weights("{\"a\": 1}"), ParseError);
    CHECK_THROWS_AS(parse_weights("[1, -1]"), ParseError);
    CHECK_THROWS_AS(parse_amplitudes("[[1, 2, 3]]"), ParseError);
    CHECK_THROWS_AS(read_text_file("/nonexistent/ampdist/input.json"), ConfigError);
  }

  TEST_CASE("config validation") {
    ExperimentConfig c;
    c.command = "profil";
    c.tau = 0.4;
    c.eps = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.eps = 0.1;
    c.delta = 0.6;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.delta = 0.1;
    CHECK_NOTHROW(c.validate());
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.trials = 1;
    c.command = "bogus";
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("config echo round-trips through JSON text") {
    ExperimentConfig c;
    c.command = "biased-aa";
    c.n = 3;
    c.p = 0.9;
    c.lambda = 0.125;
    c.delta = 0.1;
    c.good = {5};
    c.seed = 42;
    const auto j = nlohmann::json::parse(c.to_json().dump());
    CHECK(j["command"] == "biased-aa");
    CHECK(j["n"] == 3);
    CHECK(j["good"] == nlohmann::json::array({5}));
    CHECK(j["seed"] == 42);
    CHECK_FALSE(j.contains("tau"));
  }

  TEST_CASE("trials are deterministic and independent of worker count") {
    ExperimentConfig c;
    c.command = "profil";
    c.input = write_temp("weights.json", "[5, 1, 1, 1]");
    c.tau = 0.5;
    c.eps = 0.25;
    c.delta = 0.1;
    c.seed = 7;
    c.trials = 6;
    const auto serial = run_experiment(c);
    c.parallel = 3;
    const auto threaded = run_experiment(c);
    CHECK(serial["trials"] == threaded["trials"]);
    CHECK(render(threaded, OutputFormat::Json) == render(run_experiment(c), OutputFormat::Json));
    CHECK(serial["trials"][2]["seed"] == 9);
  }

  TEST_CASE("errors inside workers propagate with their type") {
    ExperimentConfig c;
    c.command = "profil";
    c.input = write_temp("bad.json", "[1, 2");
    c.tau = 0.5;
    c.eps = 0.25;
    c.delta = 0.1;
    c.trials = 3;
    c.parallel = 2;
    CHECK_THROWS_AS(run_experiment(c), ParseError);
    c.input = write_temp("weights.json", "[5, 1, 1, 1]");
    c.engine = "full";
    CHECK_THROWS_AS(run_experiment(c), BudgetExceeded);
  }

  TEST_CASE("csv has a header and one row per trial") {
    ExperimentConfig c;
    c.command = "qae";
    c.p = 0.3;
    c.m = 4;
    c.trials = 3;
    const auto text = render(run_experiment(c), OutputFormat::Csv);
    int lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(lines == 4);
    CHECK(text.rfind("command,", 0) == 0);
  }

  TEST_CASE("selftest passes") {
    const auto r = selftest();
    CHECK(r["pass"].get<bool>());
  }
}
