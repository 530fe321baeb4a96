#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "cupgame/harness.hpp"
#include "cupgame/stones.hpp"

using namespace cupgame;
using namespace cupgame::harness;

namespace {

std::string data(const std::string& name) { return std::string(CUPGAME_TEST_DATA) + "/" + name; }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells(1);
  for (char c : line) {
    if (c == ',') cells.emplace_back();
    else cells.back() += c;
  }
  return cells;
}

// Drops the header comment and the wall_time column.
std::vector<std::string> stable_rows(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  std::getline(ss, line);
  auto header = split(line);
  const auto wall = std::find(header.begin(), header.end(), "wall_time") - header.begin();
  REQUIRE(wall < std::ptrdiff_t(header.size()));
  while (std::getline(ss, line)) {
    auto cells = split(line);
    REQUIRE(cells.size() == header.size());
    cells.erase(cells.begin() + wall);
    std::string joined;
    for (const auto& c : cells) joined += c + ",";
    out.push_back(joined);
  }
  return out;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing rejects bad input") {
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"filler", "hold"}, {"rounds", 5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n", 4}, {"rounds", 5}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n", 4}, {"filler", "hold"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n", 4}, {"filler", "hold"}, {"rounds", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"n", 4}, {"filler", "hold"}, {"rounds", 5}, {"record_level", "loud"}}),
                  ConfigError);
  CHECK_THROWS_AS(load_config(data("empty_range.json")), ConfigError);
  CHECK_THROWS_AS(load_config(data("no_such_file.json")), ConfigError);

  ExperimentConfig bad = load_config(data("bad_strategy.json"));
  CHECK_THROWS_AS(make_filler(bad.filler, bad.n, 1), ConfigError);
  CHECK_THROWS_AS(make_emptier(json{{"name", "nobody"}}, 1), ConfigError);
  CHECK_THROWS_AS(make_filler(json{{"name", "main"}, {"k", 0}}, 8, 1), ConfigError);

  ExperimentConfig ok = load_config(data("warmup8.json"));
  CHECK(ok.n == 8);
  CHECK(ok.rounds == 512);
  CHECK(ok.stop_at_backlog == Rational(7, 2));
  CHECK(ok.variant.name() == "standard");
}

TEST_CASE("environment overrides and config hash") {
  ExperimentConfig cfg = load_config(data("warmup8.json"));
  const auto before = config_hash(cfg.document);
  setenv("CUPGAME_SEED", "99", 1);
  setenv("CUPGAME_WORKERS", "3", 1);
  apply_env_overrides(cfg);
  unsetenv("CUPGAME_SEED");
  unsetenv("CUPGAME_WORKERS");
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 3);
  CHECK(config_hash(cfg.document) != before);

  setenv("CUPGAME_SEED", "x1", 1);
  CHECK_THROWS_AS(apply_env_overrides(cfg), ConfigError);
  unsetenv("CUPGAME_SEED");

  json a = json::parse(R"({"n": 4, "rounds": 3, "filler": "hold"})");
  json b = json::parse(R"({"filler": "hold", "rounds": 3, "n": 4})");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(hex64(config_hash(a)).size() == 16);
}

TEST_CASE("simulate reaches the warmup target") {
  ExperimentConfig cfg = load_config(data("warmup8.json"));
  RunSummary s = run_experiment(cfg, cfg.seed);
  CHECK(s.max_backlog >= Rational(7, 2));
  CHECK(s.conservation_violations == 0);
  RunSummary again = run_experiment(cfg, cfg.seed);
  CHECK(again.rounds_played == s.rounds_played);
}

TEST_CASE("sweeps are deterministic across worker counts") {
  json doc = json::parse(R"({"n": 64, "filler": {"name": "main", "k": 4}, "rounds": 100000,
    "stop": {"when_filler_done": true}, "seed": 5, "repetitions": 2, "sweep": {"filler.k": [2, 4, 8]}})");
  ExperimentConfig one = parse_config(doc);
  one.workers = 1;
  ExperimentConfig four = one;
  four.workers = 4;
  std::stringstream a, b;
  auto rows = run_sweep(one, a);
  run_sweep(four, b);
  CHECK(stable_rows(a.str()) == stable_rows(b.str()));
  CHECK(a.str().rfind(std::string("# schema ") + kSweepCsvSchema, 0) == 0);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].ok);
    CHECK(*rows[i].k >= *rows[i - 1].k);
    if (*rows[i].k > *rows[i - 1].k) {
      CHECK(rows[i].summary.rounds_played >= rows[i - 1].summary.rounds_played);
      CHECK(rows[i].summary.max_backlog >= rows[i - 1].summary.max_backlog);
    }
  }
}

TEST_CASE("a failing run becomes an error row") {
  json doc = json::parse(R"({"n": 8, "filler": "hold", "rounds": 3,
    "sweep": {"filler": ["hold", "nonesuch"]}})");
  std::stringstream csv;
  auto rows = run_sweep(parse_config(doc), csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK(csv.str().find(",error,") != std::string::npos);
}

TEST_CASE("curve rows") {
  auto horizons = log_spaced(1, 256, 2);
  CHECK(horizons.front() == 1);
  CHECK(horizons.back() == 256);
  auto points = run_curve(16, horizons);
  REQUIRE(points.size() == horizons.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].t == horizons[i]);
    CHECK(points[i].bound == bound_b_of_t(16, horizons[i]));
    if (i > 0) CHECK(points[i].measured >= points[i - 1].measured);
  }
  std::stringstream csv;
  write_curve_csv(csv, 16, points);
  CHECK(csv.str().rfind(std::string("# schema ") + kCurveCsvSchema, 0) == 0);
}

TEST_CASE("verify suites report and replay failures") {
  SuiteOptions opt;
  opt.cases = 20;
  SuiteReport clean = run_suite("order-fuzz", opt);
  CHECK(clean.passed());
  CHECK(clean.checks > 0);

  opt.inject_failure = true;
  SuiteReport bad = run_suite("order-fuzz", opt);
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.reproducers.size() == 1);

  SuiteOptions replay = opt;
  replay.case_seed = bad.reproducers.front();
  SuiteReport again = run_suite("order-fuzz", replay);
  CHECK_FALSE(again.passed());
  CHECK(again.reproducers == bad.reproducers);
  CHECK(again.to_json()["schema"] == kVerifySchema);

  CHECK_THROWS(run_suite("nonesuch", SuiteOptions{}));
}

TEST_CASE("envelope monitor") {
  EnvelopeMonitor m;
  m.check(64, 10, Rational(1));
  CHECK(m.checks() == 1);
  CHECK(m.violation_count() == 0);
  m.check(64, 10, Rational(100000));
  CHECK(m.violation_count() == 1);
  CHECK(EnvelopeMonitor::bound(64, 10) > 0);
}

}  // TEST_SUITE
