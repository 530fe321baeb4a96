#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cupgame/emptiers.hpp"
#include "cupgame/engine.hpp"
#include "cupgame/fillers.hpp"

namespace cupgame::harness {

using nlohmann::json;

inline constexpr const char* kSweepCsvSchema = "cupgame.sweep.v1";
inline constexpr const char* kCurveCsvSchema = "cupgame.curve.v1";
inline constexpr const char* kVerifySchema = "cupgame.verify.v1";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  GameVariant variant = GameVariant::negative_fill();
  std::int64_t n = 0;
  json filler = json::object();   // {"name": ..., params...}
  json emptier = json::object();  // defaults to greedy/lowest
  std::int64_t rounds = 0;
  std::optional<Rational> stop_at_backlog;
  bool stop_when_filler_done = false;
  std::uint64_t seed = 1;
  std::int64_t repetitions = 1;
  std::int64_t workers = 0;  // 0 = hardware concurrency
  RecordLevel record_level = RecordLevel::BacklogOnly;
  std::string trace_json;
  std::string backlog_csv;
  std::string sweep_csv;
  json sweep = json::object();  // dotted config path -> array of values
  json document;                // the parsed input, overrides applied
};

ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);
// CUPGAME_SEED and CUPGAME_WORKERS replace the file's seed and workers.
void apply_env_overrides(ExperimentConfig& cfg);

// FNV-1a over the canonical dump.
std::uint64_t config_hash(const json& doc);
std::string hex64(std::uint64_t v);
std::string build_id();

std::unique_ptr<FillerStrategy> make_filler(const json& spec, std::int64_t n, std::uint64_t seed);
std::unique_ptr<EmptierStrategy> make_emptier(const json& spec, std::uint64_t seed);
std::string strategy_id(const json& spec);

// Checks backlog(t) <= kSlack * min(b(t), sqrt(t ln n) * sqrt(ln n)) for games
// played against greedy.
class EnvelopeMonitor {
 public:
  static constexpr double kSlack = 10.0;
  static double bound(std::int64_t n, std::int64_t t);

  void check(std::int64_t n, std::int64_t t, const Rational& backlog);
  // Wraps any observer already in `options`.
  void attach(RunOptions& options, std::int64_t n);

  std::int64_t checks() const { return checks_; }
  std::int64_t violation_count() const { return violation_count_; }
  const std::vector<std::string>& examples() const { return examples_; }
  void merge(const EnvelopeMonitor& other);

 private:
  std::int64_t checks_ = 0;
  std::int64_t violation_count_ = 0;
  std::vector<std::string> examples_;
};

struct RunSummary {
  std::int64_t n = 0;
  std::string variant;
  std::string filler;
  std::string emptier;
  std::uint64_t seed = 0;
  std::int64_t rounds_played = 0;
  Rational final_backlog;
  Rational max_backlog;
  bool filler_done = false;
  std::optional<MainFillerPlan> plan;
  std::int64_t conservation_checks = 0;
  std::int64_t conservation_violations = 0;
  std::int64_t envelope_checks = 0;
  std::int64_t envelope_violations = 0;
  double wall_time = 0;

  json to_json() const;
};

// Plays one game. With `trace` set the full record is copied out.
RunSummary run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                          EnvelopeMonitor* monitor = nullptr, GameTrace* trace = nullptr);

// One config per point of the cross product of cfg.sweep, times repetitions.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& cfg);

struct SweepRow {
  std::int64_t index = 0;
  std::int64_t n = 0;
  std::optional<std::int64_t> k;
  std::int64_t t = 0;
  std::uint64_t seed = 0;
  std::string variant, filler, emptier;
  bool ok = true;
  std::string error;
  RunSummary summary;
};

// Runs every expanded config on `workers` threads and writes rows in index
// order as they finish. Failed runs become rows with status "error".
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream& csv,
                                EnvelopeMonitor* monitor = nullptr);
void write_sweep_header(std::ostream& csv, const ExperimentConfig& cfg);
void write_sweep_row(std::ostream& csv, const SweepRow& row);

struct CurvePoint {
  std::int64_t t = 0;
  Rational measured;
  Rational bound;
  std::string filler;
};

// For every horizon, the best backlog any candidate filler reaches within
// that many rounds against greedy in the negative-fill game.
std::vector<CurvePoint> run_curve(std::int64_t n, const std::vector<std::int64_t>& horizons,
                                  EnvelopeMonitor* monitor = nullptr);
void write_curve_csv(std::ostream& csv, std::int64_t n, const std::vector<CurvePoint>& points);
std::vector<std::int64_t> log_spaced(std::int64_t lo, std::int64_t hi, std::int64_t per_octave);

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::int64_t cases = 0;  // 0 = suite default
  bool inject_failure = false;
  std::optional<std::uint64_t> case_seed;  // run just this case
  EnvelopeMonitor* monitor = nullptr;      // fed by games played against greedy
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::int64_t cases = 0;
  std::int64_t checks = 0;
  std::vector<std::string> violations;  // capped; see violation_count
  std::int64_t violation_count = 0;
  std::vector<std::uint64_t> reproducers;  // case seeds that failed
  json details = json::object();
  double seconds = 0;

  bool passed() const { return violation_count == 0; }
  void fail(std::uint64_t case_seed, const std::string& what);
  json to_json() const;
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

}  // namespace cupgame::harness
